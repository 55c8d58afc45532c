#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "kdv/errors.hpp"
#include "kdv/initial_data.hpp"
#include "kdv/spectral.hpp"
#include "oracles.hpp"

using namespace kdv;

namespace {

std::vector<double> sample(int M, auto&& fn) {
  std::vector<double> out(M);
  for (int j = 0; j < M; ++j) out[j] = fn(2.0 * std::numbers::pi * j / M);
  return out;
}

SpectralField random_field(const GridSpec& grid, std::uint64_t seed) {
  return random_band(grid, 1, grid.K, seed);
}

}  // namespace

TEST_CASE("GridSpec enforces the product-exact sample count") {
  CHECK_THROWS_AS(GridSpec(4, 16), AliasingError);
  CHECK_THROWS_AS(GridSpec(1, 100), AliasingError);
  CHECK_NOTHROW(GridSpec(4, 17));
  const auto g = GridSpec::for_band(64);
  CHECK(g.M >= 4 * 64 + 1);
  CHECK(g.M == 270);
}

TEST_CASE("from_physical") {
  const GridSpec grid(4, 17);

  SUBCASE("single cosine") {
    const auto f = from_physical(sample(17, [](double x) { return std::cos(x); }), grid);
    CHECK(std::abs(f.coeff(1) - Complex(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(f.coeff(-1) - Complex(0.5, 0.0)) < 1e-15);
    for (int xi : {0, 2, 3, 4}) CHECK(std::abs(f.coeff(xi)) < 1e-15);
  }
  SUBCASE("zero samples") {
    const auto f = from_physical(std::vector<double>(17, 0.0), grid);
    CHECK(f == SpectralField(grid));
  }
  SUBCASE("mode outside the band is discarded") {
    const auto f = from_physical(sample(17, [](double x) { return std::cos(6 * x); }), grid);
    for (int xi = 0; xi <= 4; ++xi) CHECK(std::abs(f.coeff(xi)) < 1e-15);
  }
  SUBCASE("mean is removed") {
    const auto f = from_physical(sample(17, [](double x) { return 3.0 + std::sin(2 * x); }), grid);
    CHECK(f.mean() == 0.0);
    CHECK(std::abs(f.coeff(2) - Complex(0.0, -0.5)) < 1e-15);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(from_physical(std::vector<double>(16, 0.0), grid), ShapeError);
  }
}

TEST_CASE("to_physical") {
  const GridSpec grid(4, 17);
  CHECK(to_physical(SpectralField(grid), 16) == std::vector<double>(16, 0.0));

  SpectralField f(grid);
  f.set(1, 0.5);
  const auto p = to_physical(f, 16);
  for (int j = 0; j < 16; ++j) CHECK(std::abs(p[j] - std::cos(2.0 * std::numbers::pi * j / 16)) < 1e-12);

  CHECK_THROWS_AS(to_physical(f, 8), AliasingError);
  CHECK_NOTHROW(to_physical(f, 9));

  SUBCASE("agrees with direct synthesis") {
    const auto g = random_field(GridSpec::for_band(24), 3);
    const auto fast = to_physical(g, 101);
    const auto slow = oracle::direct_synthesis(g, 101);
    for (int j = 0; j < 101; ++j) CHECK(std::abs(fast[j] - slow[j]) < 1e-12);
  }
}

TEST_CASE("physical round trip is the identity on band-limited fields") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto grid = GridSpec::for_band(8 + static_cast<int>(seed) * 3);
    const auto f = random_field(grid, seed);
    const auto back = from_physical(to_physical(f, grid.M), grid);
    CHECK(oracle::rel_diff(back, f) < 1e-12);
  }
}

TEST_CASE("projectors") {
  const GridSpec grid(8, 33);
  SpectralField f(grid);
  f.set(1, {0.3, 0.1});
  f.set(5, {-0.2, 0.4});

  CHECK(project_low(f, 3).coeff(1) == f.coeff(1));
  CHECK(project_low(f, 3).coeff(5) == Complex(0.0, 0.0));
  CHECK(project_high(f, 3).coeff(5) == f.coeff(5));
  CHECK(project_high(f, 3).coeff(1) == Complex(0.0, 0.0));
  CHECK(project_low(f, 8) == f);
  CHECK(project_high(f, 8) == SpectralField(grid));

  SUBCASE("|xi| = N belongs to the low part only") {
    CHECK(project_low(f, 5).coeff(5) == f.coeff(5));
    CHECK(project_high(f, 5).coeff(5) == Complex(0.0, 0.0));
  }

  SUBCASE("partition and idempotence are exact") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g = random_field(GridSpec::for_band(32), seed);
      for (double N : {0.5, 3.0, 7.5, 16.0, 31.0, 40.0}) {
        const auto lo = project_low(g, N);
        const auto hi = project_high(g, N);
        CHECK(lo + hi == g);
        CHECK(project_low(lo, N) == lo);
        CHECK(project_low(hi, N) == SpectralField(g.grid()));
        CHECK(project_high(lo, N) == SpectralField(g.grid()));
      }
    }
  }
}

TEST_CASE("low-pass projection gains regularity at most <N>^{m-s}") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto u = rough_power_law(GridSpec::for_band(64), 0.1 + 0.05 * seed, seed);
    for (double s : {-0.75, -0.5, -0.25, 0.0, 1.0})
      for (double m : {s, s + 0.5, s + 3.0})
        for (double N : {4.0, 16.0, 50.0}) {
          const double lhs = sobolev_norm(project_low(u, N), m);
          const double rhs = std::pow(1.0 + N * N, 0.5 * (m - s)) * sobolev_norm(u, s);
          CHECK(lhs <= rhs * (1.0 + 1e-14));
        }
  }
}

TEST_CASE("derivative") {
  const GridSpec grid(4, 17);
  SpectralField c(grid);
  c.set(1, 0.5);  // cos x
  const auto d = derivative(c, 1);
  // -sin x = (i/2) e^{ix} - (i/2) e^{-ix}
  CHECK(d.coeff(1) == Complex(0.0, 0.5));
  CHECK(d.coeff(-1) == Complex(0.0, -0.5));

  SpectralField mode(grid);
  mode.set(3, 1.0);
  CHECK(std::abs(derivative(mode, 3).coeff(3) - Complex(0.0, -27.0)) < 1e-14);
  CHECK(derivative(SpectralField(grid), 2) == SpectralField(grid));

  SUBCASE("matches differentiated samples") {
    const auto g = random_field(GridSpec::for_band(16), 9);
    const auto dg = to_physical(derivative(g, 1), 200);
    for (int j = 0; j < 200; ++j) {
      const double x = 2.0 * std::numbers::pi * j / 200;
      Complex sum = 0.0;
      for (int xi = -16; xi <= 16; ++xi) sum += Complex(0.0, xi) * g.coeff(xi) * std::polar(1.0, xi * x);
      CHECK(std::abs(dg[j] - sum.real()) < 1e-12);
    }
  }
}

TEST_CASE("bessel potential") {
  const GridSpec grid(4, 17);
  SpectralField f(grid);
  f.set(1, {0.25, -0.5});
  f.set(3, {0.1, 0.0});
  CHECK(bessel_potential(f, 0.0) == f);
  CHECK(std::abs(bessel_potential(f, 2.0).coeff(1) - 2.0 * f.coeff(1)) < 1e-15);
  const auto g = random_field(GridSpec::for_band(40), 2);
  CHECK(oracle::rel_diff(bessel_potential(bessel_potential(g, 1.7), -1.7), g) < 1e-12);
  CHECK(std::abs(sobolev_norm(bessel_potential(g, 1.7), 0.0) - sobolev_norm(g, 1.7)) <
        1e-12 * sobolev_norm(g, 1.7));
}

TEST_CASE("sobolev norm") {
  const GridSpec grid(4, 17);
  CHECK(sobolev_norm(SpectralField(grid), 0.3) == 0.0);
  SpectralField c(grid);
  c.set(1, 0.5);
  CHECK(sobolev_norm(c, 0.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(sobolev_norm(c, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

  SUBCASE("Plancherel against physical samples") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto grid64 = GridSpec::for_band(64);
      const auto u = random_field(grid64, seed);
      const auto p = to_physical(u, grid64.M);
      double sq = 0.0, mean = 0.0;
      for (double x : p) {
        sq += x * x;
        mean += x;
      }
      sq /= grid64.M;
      mean /= grid64.M;
      const double n0 = sobolev_norm(u, 0.0);
      CHECK(std::abs(n0 * n0 - (sq - mean * mean)) < 1e-10 * n0 * n0);
    }
  }
}

TEST_CASE("dealiased product") {
  const GridSpec grid(4, 17);
  SpectralField c(grid);
  c.set(1, 0.5);
  const auto sq = dealiased_product(c, c);
  CHECK(std::abs(sq.coeff(2) - 0.25) < 1e-15);
  CHECK(std::abs(sq.coeff(-2) - 0.25) < 1e-15);
  CHECK(std::abs(sq.mean() - 0.5) < 1e-15);
  CHECK(std::abs(sq.coeff(1)) < 1e-15);
  CHECK(sobolev_norm(dealiased_product(c, SpectralField(grid)), 0.0) == 0.0);

  CHECK_THROWS_AS(dealiased_product(c, SpectralField(GridSpec(5, 21))), ShapeError);

  SUBCASE("exact against the direct convolution") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const int K = 2 + static_cast<int>((seed * 37) % 63);
      const auto g = GridSpec::for_band(K);
      const auto a = random_field(g, 2 * seed);
      const auto b = random_field(g, 2 * seed + 1);
      CHECK(oracle::rel_diff(dealiased_product(a, b), oracle::brute_product(a, b)) < 1e-12);
    }
  }
}

TEST_CASE("Hermitian symmetry holds by construction") {
  const auto g = random_field(GridSpec::for_band(12), 5);
  for (const auto& h : {derivative(g, 3), bessel_potential(g, -0.5), dealiased_product(g, g),
                        project_high(g, 4.0)})
    for (int xi = 0; xi <= 12; ++xi) CHECK(h.coeff(-xi) == std::conj(h.coeff(xi)));
  SpectralField f(g.grid());
  CHECK_THROWS_AS(f.set(0, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(f.set(13, 1.0), ShapeError);
}

TEST_CASE("transforms are bitwise reproducible") {
  const auto g = random_field(GridSpec::for_band(50), 8);
  CHECK(dealiased_product(g, g) == dealiased_product(g, g));
  CHECK(to_physical(g, 300) == to_physical(g, 300));
}
