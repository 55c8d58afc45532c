#include <doctest.h>

#include <cmath>

#include "kdv/errors.hpp"
#include "kdv/experiments.hpp"
#include "kdv/initial_data.hpp"

using namespace kdv;

TEST_CASE("linear_fit") {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const auto fit = linear_fit(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK(fit.samples == 4);
  CHECK(fit.t0 == 0.0);
  CHECK(fit.t1 == 3.0);

  const std::vector<double> two{0, 1};
  CHECK(linear_fit(two, two).r2 == 0.0);
  const std::vector<double> noisy{0.0, 1.0, 0.0, 1.0};
  CHECK(linear_fit(x, noisy).r2 < 0.5);
  CHECK_THROWS(linear_fit(std::vector<double>{1.0}, std::vector<double>{1.0}));
  CHECK_THROWS(linear_fit(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}));
}

TEST_CASE("simulate records every stride and the final step") {
  const auto grid = GridSpec::for_band(16);
  auto p = make_params(grid, 1.0, 1e-2);
  const auto u0 = random_band(grid, 1, 4, 1);
  const auto rec = simulate(u0, p, 1.0, {30, 2});
  CHECK_NOTHROW(rec.validate());
  REQUIRE(rec.size() == 5);  // 0, 30, 60, 90, 100
  CHECK(rec.times.back() == doctest::Approx(1.0));
  CHECK(rec.l2.front() == doctest::Approx(sobolev_norm(u0, 0.0)));
  CHECK(rec.E2.front() == doctest::Approx(rec.l2.front() * rec.l2.front()));
  CHECK(rec.E4.front() == 0.0);
  CHECK(rec.meta.dt == p.dt);

  TrajectoryRecord broken = rec;
  broken.times[2] = broken.times[1];
  CHECK_THROWS(broken.validate());
  broken = rec;
  broken.E3.pop_back();
  CHECK_THROWS(broken.validate());
}

TEST_CASE("decay suite") {
  const auto grid = GridSpec::for_band(64);
  auto p = make_params(grid, 1.0, 1e-3);
  p.split_cutoff = 8.0;
  p.forcing = single_mode(grid, 1, 1.0);

  SUBCASE("linear mode recovers the damping rate to 1%") {
    auto lin = p;
    lin.nonlinear = false;
    const auto r = run_decay(normalized(rough_power_law(grid, 0.1, 5), -0.5, 1.0), lin, 10.0);
    CHECK(r.fit.slope == doctest::Approx(-1.0).epsilon(0.01));
    CHECK(r.wT <= 1e-3 * r.w0);
    CHECK_FALSE(r.underflow);
  }
  SUBCASE("small amplitude slope within 10%") {
    const auto r = run_decay(normalized(rough_power_law(grid, 0.1, 5), -0.5, 0.01), p, 10.0);
    CHECK(r.fit.slope == doctest::Approx(-1.0).epsilon(0.1));
    CHECK(r.fit.r2 > 0.99);
  }
  SUBCASE("underflow counts as decay") {
    auto fast = p;
    fast.gamma = 200.0;
    fast.nonlinear = false;
    const auto r = run_decay(normalized(rough_power_law(grid, 0.1, 5), -0.5, 1.0), fast, 10.0, 50);
    CHECK(r.underflow);
    CHECK(r.wT == 0.0);
  }
  CHECK_THROWS_AS(run_decay(single_mode(grid, 2, 1.0), p, 1.0), std::invalid_argument);
}

TEST_CASE("absorbing ball without forcing") {
  const auto grid = GridSpec::for_band(32);
  auto p = make_params(grid, 1.0, 1e-3);
  std::vector<SpectralField> ens{normalized(random_band(grid, 1, 6, 1), -0.5, 0.1),
                                 normalized(random_band(grid, 1, 6, 2), -0.5, 1.0)};
  const auto r = run_absorbing_ball(ens, p, 20.0, 0.5, 20);
  CHECK(r.max_tail_sup < 1e-4);
  CHECK(r.initial_radius[0] == doctest::Approx(0.1));
  CHECK(r.entry_time[1] > r.entry_time[0]);
  for (const auto& tr : r.traces)
    for (std::size_t k = 1; k < tr.size(); ++k) CHECK(tr.l2[k] < tr.l2[k - 1]);
}

TEST_CASE("divergence names the ensemble member") {
  const auto grid = GridSpec::for_band(16);
  auto p = make_params(grid, 0.0, 0.5);
  std::vector<SpectralField> ens{SpectralField(grid), single_mode(grid, 8, 100.0)};
  try {
    run_absorbing_ball(ens, p, 50.0);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(std::string(e.what()).find("member 1") != std::string::npos);
  }
}

TEST_CASE("energy identity") {
  const auto grid = GridSpec::for_band(32);
  const IMultiplier im(8, -0.5);
  auto p = make_params(grid, 0.5, 4e-4);
  p.forcing = single_mode(grid, 2, 0.3);
  const auto u0 = normalized(random_band(grid, 1, 4, 3), -0.5, 0.3);

  SUBCASE("linear mode matches the exact energy law") {
    auto lin = make_params(grid, 0.5, 1e-4);
    lin.nonlinear = false;
    const auto r = run_energy_identity(u0, lin, im, 0.2, 2, 4);
    for (double res : r.residuals) CHECK(res < 1e-8);
  }
  SUBCASE("residual converges at second order") {
    const auto r = run_energy_identity(u0, p, im, 0.2, 3, 4);
    REQUIRE(r.residuals.size() == 3);
    CHECK(r.dts[1] == doctest::Approx(2e-4));
    CHECK(r.order >= 1.8);
  }
}

TEST_CASE("omega limit without forcing collapses to zero") {
  const auto grid = GridSpec::for_band(32);
  auto p = make_params(grid, 1.0, 1e-3);
  std::vector<SpectralField> ens{normalized(random_band(grid, 1, 3, 1), -0.5, 0.2),
                                 normalized(random_band(grid, 1, 3, 2), -0.5, 2.0)};
  const std::vector<double> probes{10.0, 15.0};
  const std::vector<double> etas{0.001, 0.002, 0.003, 0.004};
  const auto r = run_omega_limit(ens, p, 20.0, probes, etas);
  CHECK(r.max_pairwise < 1e-6);
  CHECK(r.compactness_bound < 1e-2);
  CHECK(r.increment_fit.r2 >= 0.9);
  CHECK(r.finals.size() == 2);
  const std::vector<double> early{2.0};
  CHECK_THROWS(run_omega_limit(ens, p, 20.0, early, etas));
}

TEST_CASE("X_{s,b} estimator") {
  const auto grid = GridSpec::for_band(16);

  SUBCASE("b = 0 is the tapered time average") {
    const auto p = make_params(grid, 0.2, 1e-3);
    const auto snaps = collect_snapshots(normalized(rough_power_law(grid, 0.2, 4), -0.5, 1.0), p, 0, 7, 32);
    const double est = xsb_norm_estimate(snaps, 0.0, 7e-3, -0.5, 0.0);
    const double avg = tapered_hs_average(snaps, -0.5);
    CHECK(std::abs(est * est - avg) <= 1e-10 * avg);
  }

  SUBCASE("a linear mode sits on the characteristic") {
    const int xi0 = 5;
    auto linear_mode = [&](double detune) {
      std::vector<SpectralField> snaps;
      for (int k = 0; k < 64; ++k) {
        SpectralField f(grid);
        f.set(xi0, std::polar(0.5, (xi0 * xi0 * xi0 + detune) * k * 1.0));
        snaps.push_back(f);
      }
      return xsb_norm_estimate(snaps, 0.0, 1.0, 0.0, 0.5) / xsb_norm_estimate(snaps, 0.0, 1.0, 0.0, 0.0);
    };
    CHECK(linear_mode(0.0) < 1.01);
    // <2>^{1/2} = 1.495
    CHECK(linear_mode(2.0) > 1.4);
  }

  SUBCASE("monotone in b") {
    auto p = make_params(grid, 0.5, 1e-3);
    p.forcing = single_mode(grid, 1, 1.0);
    const auto snaps = collect_snapshots(normalized(rough_power_law(grid, 0.01, 8), -0.5, 1.0), p, 100, 5, 40);
    double previous = 0.0;
    for (double b = 0.0; b <= 0.5; b += 0.05) {
      const double est = xsb_norm_estimate(snaps, 0.1, 5e-3, -0.5, b);
      CHECK(est >= previous);
      previous = est;
    }
  }

  const std::vector<SpectralField> few(7, SpectralField(grid));
  CHECK_THROWS_AS(xsb_norm_estimate(few, 0.0, 1.0, 0.0, 0.0), std::invalid_argument);
  const std::vector<SpectralField> enough(8, SpectralField(grid));
  CHECK_THROWS_AS(xsb_norm_estimate(enough, 0.0, 1.0, 0.0, 0.6), std::invalid_argument);
  CHECK(xsb_norm_estimate(enough, 0.0, 1.0, 0.0, 0.5) == 0.0);
}
