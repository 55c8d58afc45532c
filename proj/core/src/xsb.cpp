#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kdv/errors.hpp"
#include "kdv/experiments.hpp"

namespace kdv {

namespace {

std::vector<double> taper(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = std::sin(std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
    w[k] = x * x;
  }
  return w;
}

void check_snapshots(std::span<const SpectralField> snaps) {
  if (snaps.size() < 8) throw std::invalid_argument("xsb: need at least 8 snapshots");
  for (const auto& f : snaps)
    if (f.grid() != snaps.front().grid()) throw ShapeError("xsb: snapshots on different grids");
}

}  // namespace

double tapered_hs_average(std::span<const SpectralField> snapshots, double s) {
  check_snapshots(snapshots);
  const auto w = taper(snapshots.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    const double h = w[k] * sobolev_norm(snapshots[k], s);
    sum += h * h;
  }
  return sum / static_cast<double>(snapshots.size());
}

double xsb_norm_estimate(std::span<const SpectralField> snapshots, double t0, double dt, double s,
                         double b) {
  check_snapshots(snapshots);
  if (!(b >= 0.0 && b <= 0.5)) throw std::invalid_argument("xsb: b must lie in [0, 1/2]");
  if (!(dt > 0.0)) throw std::invalid_argument("xsb: dt must be > 0");
  const std::size_t n = snapshots.size();
  const int K = snapshots.front().band();
  const auto w = taper(n);
  const double nd = static_cast<double>(n);
  const double dsigma = 2.0 * std::numbers::pi / (nd * dt);

  std::vector<Complex> d(n);
  double total = 0.0;
  for (int xi = 1; xi <= K; ++xi) {
    const double x3 = static_cast<double>(xi) * xi * xi;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = t0 + static_cast<double>(k) * dt;
      d[k] = w[k] * snapshots[k].coeff(xi) * std::polar(1.0, -std::fmod(x3 * t, 2.0 * std::numbers::pi));
    }
    double mode = 0.0;
    const long lo = -static_cast<long>(n / 2);
    for (long j = lo; j < lo + static_cast<long>(n); ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += d[k] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) *
                                          static_cast<double>(k) / nd);
      acc /= nd;
      const double sigma = static_cast<double>(j) * dsigma;
      mode += std::pow(1.0 + sigma * sigma, b) * std::norm(acc);
    }
    // -xi contributes the same amount with tau reflected.
    total += 2.0 * std::pow(1.0 + static_cast<double>(xi) * xi, s) * mode;
  }
  return std::sqrt(total);
}

}  // namespace kdv
