#pragma once

// Batch configuration: a single strict JSON object selects a suite, the equation
// parameters, the initial-data ensemble and the acceptance thresholds.
//
// Keys (all optional except "suite"):
//   suite        simulate | split | energy | absorbing | decay | smoothing | omega | xsb
//   K            band limit (64)             gamma   damping (1)
//   s            Sobolev index (-0.5)        N       split / I-method cutoff (8)
//   dt           step; default is the stability rule min(0.5/(K max|u0| + 1), dt_cap)
//   dt_cap       (1e-3)                      T       horizon (10/gamma, or 10 when gamma = 0)
//   integrator   etdrk4 | ifrk4              stride  steps between recorded samples (10)
//   forcing      recipe object, default {"kind": "none"}
//   initial      recipe object, default rough power law with exponent 0.1 and radius 1
//   members      ensemble size (1, or the length of radii)
//   radii        per-member H^s radii overriding initial.radius
//   cutoffs      energy suite cutoffs ([8, 16, 32])
//   energy_order energies recorded in traces (0, 2, 3 or 4; default 2)
//   probes, etas omega suite sample times and increments
//   b            xsb suite time weight exponent (0.5)
//   snapshots    xsb suite snapshot count (64)
//   thresholds   object overriding the suite's default thresholds
//   out_dir      output root ("kdvlab-out")   seed    base seed (0)
// A recipe object is {"kind": none | single-mode | rough-power-law | random-band,
// "radius": H^s norm, "mode", "phase", "exponent", "lo", "hi"}.
// Member i uses seed + i; the forcing uses seed + 7919.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kdv/dynamics.hpp"
#include "kdv/trajectory_io.hpp"

namespace kdv {

enum class Suite { Simulate, Split, Energy, Absorbing, Decay, Smoothing, Omega, Xsb };

std::string_view suite_name(Suite s);

enum class RecipeKind { None, SingleMode, RoughPowerLaw, RandomBand };

struct DataRecipe {
  RecipeKind kind = RecipeKind::None;
  double radius = 1.0;
  int mode = 1;
  double phase = 0.0;
  double exponent = 0.5;
  int lo = 1;
  int hi = 4;

  /// Field on grid with H^s norm equal to radius (zero for kind none).
  SpectralField build(const GridSpec& grid, double s, std::uint64_t seed) const;
};

struct RunConfig {
  Suite suite = Suite::Simulate;
  int K = 64;
  double gamma = 1.0;
  double s = -0.5;
  double N = 8.0;
  std::optional<double> dt;
  double dt_cap = 1e-3;
  std::optional<double> T;
  Integrator integrator = Integrator::ExponentialRK4;
  int stride = 10;
  DataRecipe forcing;
  DataRecipe initial{RecipeKind::RoughPowerLaw, 1.0, 1, 0.0, 0.1, 1, 4};
  int members = 1;
  std::vector<double> radii;
  std::vector<double> cutoffs{8.0, 16.0, 32.0};
  int energy_order = 2;
  std::vector<double> probes;
  std::vector<double> etas;
  double b = 0.5;
  int snapshots = 64;
  std::vector<std::pair<std::string, double>> thresholds;
  std::string out_dir = "kdvlab-out";
  std::uint64_t seed = 0;

  double horizon() const;
  double threshold(std::string_view key) const;
};

/// Thresholds used by a suite when the config does not override them.
std::vector<std::pair<std::string, double>> default_thresholds(Suite suite);

/// Strict parse: unknown keys, wrong types and out-of-range values throw ConfigError
/// naming the key.
RunConfig parse_config(std::string_view text);

/// Re-checks every constraint enforced by parse_config.
void validate(const RunConfig& cfg);

/// Initial data of every ensemble member.
std::vector<SpectralField> build_ensemble(const RunConfig& cfg);

/// KdvParams for cfg; dt follows the stability rule over the ensemble unless set.
KdvParams build_params(const RunConfig& cfg, const std::vector<SpectralField>& ensemble);

/// Runs the suite and fills thresholds, measurements and verdicts. Errors propagate.
SuiteReport run_suite(const RunConfig& cfg);

struct DispatchResult {
  int exit_code = 0;  // 0 all verdicts true, 1 some verdict false, 2 run failed
  std::string summary;  // summary.json text, or the failure document
};

/// Runs the suite and writes <out_dir>/<suite>/{trace.csv, summary.json}, or
/// failure.json when the run throws.
DispatchResult dispatch(const RunConfig& cfg);

}  // namespace kdv
