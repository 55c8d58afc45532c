#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kdv/errors.hpp"
#include "kdv/run_config.hpp"

using namespace kdv;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_rejects(const std::string& text, const std::string& key) {
  try {
    parse_config(text);
    FAIL("accepted: " << text);
  } catch (const ConfigError& e) {
    CHECK_MESSAGE(std::string(e.what()).find("'" + key + "'") != std::string::npos, e.what());
  }
}

}  // namespace

TEST_CASE("minimal document takes the documented defaults") {
  const auto cfg = parse_config(R"({"suite": "decay"})");
  CHECK(cfg.suite == Suite::Decay);
  CHECK(cfg.K == 64);
  CHECK(cfg.gamma == 1.0);
  CHECK(cfg.s == -0.5);
  CHECK(cfg.horizon() == 10.0);
  CHECK_FALSE(cfg.dt.has_value());
  CHECK(cfg.forcing.kind == RecipeKind::None);
  CHECK(cfg.initial.kind == RecipeKind::RoughPowerLaw);
  CHECK(cfg.threshold("slope_fraction") == 0.5);

  const auto ens = build_ensemble(cfg);
  const auto p = build_params(cfg, ens);
  CHECK(p.dt == doctest::Approx(stable_dt(ens.front(), 1e-3)));
  CHECK(sobolev_norm(ens.front(), -0.5) == doctest::Approx(1.0));

  CHECK(parse_config(R"({"suite": "simulate", "gamma": 0.5})").horizon() == 20.0);
  CHECK(parse_config(R"({"suite": "simulate", "gamma": 0})").horizon() == 10.0);
}

TEST_CASE("full document") {
  const auto cfg = parse_config(R"({
    "suite": "absorbing", "K": 32, "gamma": 0.5, "s": -0.4, "N": 4, "dt": 1e-3, "T": 3,
    "integrator": "ifrk4", "stride": 5,
    "forcing": {"kind": "single-mode", "mode": 2, "radius": 0.7},
    "initial": {"kind": "random-band", "lo": 1, "hi": 6},
    "radii": [0.1, 10], "thresholds": {"tail_spread": 0.05},
    "out_dir": "somewhere", "seed": 42})");
  CHECK(cfg.members == 2);
  CHECK(cfg.integrator == Integrator::IntegratingFactorRK4);
  CHECK(cfg.threshold("tail_spread") == 0.05);
  CHECK(cfg.threshold("control_tail") == 1e-4);
  const auto ens = build_ensemble(cfg);
  CHECK(sobolev_norm(ens[1], -0.4) == doctest::Approx(10.0));
  const auto p = build_params(cfg, ens);
  CHECK(p.dt == 1e-3);
  CHECK(sobolev_norm(p.forcing, -0.4) == doctest::Approx(0.7));
  CHECK(project_low(p.forcing, 1.5) == SpectralField(p.grid));
}

TEST_CASE("strict validation names the key") {
  check_rejects(R"({"suite": "decay", "gamma": 0})", "gamma");
  check_rejects(R"({"suite": "simulate", "K": -4})", "K");
  check_rejects(R"({"suite": "simulate", "K": 3.5})", "K");
  check_rejects(R"({"suite": "simulate", "gama": 1})", "gama");
  check_rejects(R"({"suite": "warp"})", "suite");
  check_rejects(R"({"K": 16})", "suite");
  check_rejects(R"({"suite": "simulate", "dt": 0})", "dt");
  check_rejects(R"({"suite": "energy", "s": 0.5})", "s");
  check_rejects(R"({"suite": "xsb", "b": 0.7})", "b");
  check_rejects(R"({"suite": "xsb", "snapshots": 4})", "snapshots");
  check_rejects(R"({"suite": "simulate", "initial": {"kind": "single-mode", "mode": 99}})", "initial.mode");
  check_rejects(R"({"suite": "simulate", "initial": {"kind": "random-band", "lo": 5, "hi": 2}})", "initial.lo");
  check_rejects(R"({"suite": "simulate", "forcing": {"knd": "none"}})", "forcing.knd");
  check_rejects(R"({"suite": "simulate", "thresholds": {"tail_spread": 1}})", "thresholds.tail_spread");
  check_rejects(R"({"suite": "simulate", "seed": -1})", "seed");
  check_rejects(R"({"suite": "omega", "T": 10, "probes": [1]})", "probes");
  check_rejects(R"({"suite": "absorbing", "members": 3, "radii": [1, 2]})", "members");
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
}

TEST_CASE("dispatch") {
  const auto root = std::filesystem::temp_directory_path() / "kdvlab_test_config";
  std::filesystem::remove_all(root);

  SUBCASE("decay suite on defaults passes") {
    auto cfg = parse_config(R"({"suite": "decay"})");
    cfg.out_dir = (root / "defaults").string();
    const auto r = dispatch(cfg);
    CHECK(r.exit_code == 0);
    CHECK(std::filesystem::exists(root / "defaults" / "decay" / "trace.csv"));
    CHECK(slurp(root / "defaults" / "decay" / "summary.json") == r.summary);
  }

  SUBCASE("divergence is reported") {
    auto cfg = parse_config(R"({"suite": "simulate", "gamma": 0, "dt": 0.5, "T": 50,
                                "initial": {"kind": "single-mode", "mode": 8, "radius": 50}})");
    cfg.out_dir = (root / "bad").string();
    const auto r = dispatch(cfg);
    CHECK(r.exit_code == 2);
    CHECK(r.summary.find("divergence") != std::string::npos);
    CHECK(std::filesystem::exists(root / "bad" / "simulate" / "failure.json"));
  }

  SUBCASE("a failed verdict gives exit 1") {
    auto cfg = parse_config(R"({"suite": "decay", "T": 2, "thresholds": {"slope_fraction": 5}})");
    cfg.out_dir = (root / "strict").string();
    CHECK(dispatch(cfg).exit_code == 1);
  }

  SUBCASE("identical config and seed give identical bytes") {
    for (const char* suite : {"simulate", "split", "omega", "xsb"}) {
      auto cfg = parse_config(std::string(R"({"suite": ")") + suite +
                              R"(", "K": 16, "T": 1, "energy_order": 3,
                                 "forcing": {"kind": "random-band", "lo": 1, "hi": 3, "radius": 0.5}})");
      cfg.seed = 9;
      cfg.out_dir = (root / "one").string();
      dispatch(cfg);
      cfg.out_dir = (root / "two").string();
      dispatch(cfg);
      for (const char* file : {"trace.csv", "summary.json"}) {
        const auto a = slurp(root / "one" / suite / file);
        CHECK(!a.empty());
        CHECK(a == slurp(root / "two" / suite / file));
      }
    }
  }
  std::filesystem::remove_all(root);
}
