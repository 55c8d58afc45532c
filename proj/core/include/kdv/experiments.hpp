#pragma once

// Experiment drivers: each one runs trajectories of the full or split flow and
// reduces them to a few measured numbers. Thresholds are not applied here; the
// run_config layer compares measurements against configured limits.
//
// Tail windows are [T/2, T]. Norms with index s use KdvParams::s.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kdv/dynamics.hpp"
#include "kdv/imethod.hpp"
#include "kdv/spectral.hpp"

namespace kdv {

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> l2;
  std::vector<double> hs;     // |u|_{H^s}
  std::vector<double> hs_w;   // |w|_{H^s}
  std::vector<double> hs3_v;  // |v|_{H^{s+3}}
  std::vector<double> E2, E3, E4;  // zero when not evaluated
  KdvParams meta;

  std::size_t size() const noexcept { return times.size(); }
  /// Throws std::invalid_argument on length mismatch or non-increasing times.
  void validate() const;
};

struct FitReport {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;  // 0 when fewer than 3 samples
  double t0 = 0.0;
  double t1 = 0.0;
  std::size_t samples = 0;
};

/// Least-squares line through (x, y). Throws std::invalid_argument on fewer than 2 points.
FitReport linear_fit(std::span<const double> x, std::span<const double> y);

struct RecordOptions {
  int stride = 1;        // steps between records
  int energy_order = 0;  // 0 skips E2..E4, otherwise 2, 3 or 4 with cutoff p.split_cutoff
};

/// Steps the full equation to T (rounded to whole steps) and records every `stride` steps.
/// v and w columns hold P_N u and Q_N u.
TrajectoryRecord simulate(const SpectralField& u0, const KdvParams& p, double T,
                          RecordOptions opts = {}, SolverState* final_state = nullptr);

/// Same for the coupled split system started from init_split(u0).
TrajectoryRecord simulate_split(const SpectralField& u0, const KdvParams& p, double T,
                                RecordOptions opts = {}, SplitState* final_state = nullptr);

/// Largest value of `series` over samples with time >= from.
double tail_sup(const TrajectoryRecord& rec, const std::vector<double>& series, double from);

struct AbsorbingReport {
  std::vector<double> initial_radius;  // |u0|_{H^s} per member
  std::vector<double> tail_sup;        // sup over [T/2, T] of |u|_{H^s} per member
  std::vector<double> entry_time;      // first time after which |u|_{H^s} stays in the ball
  double ball_radius = 0.0;            // (1 + margin) * max tail sup
  double max_tail_sup = 0.0;
  double min_tail_sup = 0.0;
  FitReport entry_fit;                 // entry time against log initial radius
  std::vector<TrajectoryRecord> traces;
};

/// Throws DivergenceError (with the member index in the message) if a member blows up.
AbsorbingReport run_absorbing_ball(std::span<const SpectralField> ensemble, const KdvParams& p,
                                   double T, double margin = 0.5, int stride = 10);

struct DecayReport {
  FitReport fit;        // log |w|_{H^s} against t on [T/4, T]
  double w0 = 0.0;
  double wT = 0.0;
  bool underflow = false;  // w reached zero inside the window; counted as decay
  TrajectoryRecord trace;
};

/// Throws std::invalid_argument when Q_N u0 = 0.
DecayReport run_decay(const SpectralField& u0, const KdvParams& p, double T, int stride = 10);

struct SmoothingReport {
  double initial_hs = 0.0;
  double tail_sup_v = 0.0;  // sup over [T/2, T] of |v|_{H^{s+3}}
  TrajectoryRecord trace;
};

SmoothingReport run_smoothing(const SpectralField& u0, const KdvParams& p, double T,
                              int stride = 10);

struct EnergyIdentityReport {
  std::vector<double> dts;
  std::vector<double> residuals;  // max relative residual per dt
  double order = 0.0;             // log2 of the last residual ratio
};

/// Centered differences of E2 against -2 gamma E2 + 2 Lambda2(m; u, f) + Lambda3(M3) at
/// `samples` equally spaced times in (0, T), for dt, dt/2, ..., dt/2^(levels-1).
/// Residuals are relative to max |dE2/dt| over the samples.
EnergyIdentityReport run_energy_identity(const SpectralField& u0, const KdvParams& p,
                                         const IMultiplier& im, double T, int levels = 3,
                                         int samples = 8);

struct DriftRow {
  double cutoff = 0.0;
  double dE2 = 0.0;
  double dE3 = 0.0;
  double dE4 = 0.0;
  double ratio = 0.0;  // |dE4| / |dE2|
};

/// E2, E3, E4 at 0 and T along one trajectory, one row per cutoff.
std::vector<DriftRow> energy_drift(const SpectralField& u0, const KdvParams& p, double T,
                                   std::span<const double> cutoffs);

struct OmegaReport {
  double compactness_bound = 0.0;  // max over members and probes of |v|_{H^{s+3}} + |w|_{H^s}
  double max_pairwise = 0.0;       // max H^s distance between final states
  double absorbing_radius = 0.0;   // max over members of the tail sup of |u|_{H^s}
  std::vector<double> etas;
  std::vector<double> increments;  // max over members and probes of |u(t + eta) - u(t)|_{H^s}
  FitReport increment_fit;         // increments against eta
  std::vector<SpectralField> finals;
};

/// Probes must lie in [T/2, T - max eta]; etas are rounded to whole steps.
OmegaReport run_omega_limit(std::span<const SpectralField> ensemble, const KdvParams& p,
                            double T, std::span<const double> probes,
                            std::span<const double> etas);

/// Diagnostic X_{s,b} size of equally spaced snapshots on [t0, t0 + n dt): Hann taper in
/// time, each mode demodulated by e^{-i xi^3 t} so that tau - xi^3 runs over the
/// 2pi/(n dt) lattice. Not the restriction norm. Requires n >= 8 and 0 <= b <= 1/2.
double xsb_norm_estimate(std::span<const SpectralField> snapshots, double t0, double dt,
                         double s, double b);

/// Time average of the tapered |u(t_k)|^2_{H^s}; equals the b = 0 estimate squared.
double tapered_hs_average(std::span<const SpectralField> snapshots, double s);

/// Snapshots every `stride` steps of the full flow, n in total, starting after `skip` steps.
std::vector<SpectralField> collect_snapshots(const SpectralField& u0, const KdvParams& p,
                                             int skip, int stride, int n);

}  // namespace kdv
