#include "kdv/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kdv {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SpectralField single_mode(const GridSpec& grid, int xi, double amplitude, double phase) {
  if (xi < 1 || xi > grid.K) throw std::invalid_argument("single_mode: mode outside 1..K");
  SpectralField f(grid);
  f.set(xi, std::polar(0.5 * amplitude, phase));
  return f;
}

SpectralField rough_power_law(const GridSpec& grid, double exponent, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SpectralField f(grid);
  for (int xi = 1; xi <= grid.K; ++xi) {
    const double modulus = std::pow(1.0 + static_cast<double>(xi) * xi, -0.5 * exponent);
    f.set(xi, std::polar(modulus, 2.0 * std::numbers::pi * uniform01(rng)));
  }
  return f;
}

SpectralField random_band(const GridSpec& grid, int lo, int hi, std::uint64_t seed) {
  if (lo < 1 || hi < lo || hi > grid.K)
    throw std::invalid_argument("random_band: need 1 <= lo <= hi <= K");
  std::mt19937_64 rng(seed);
  SpectralField f(grid);
  for (int xi = lo; xi <= hi; ++xi) {
    const double modulus = uniform01(rng);
    f.set(xi, std::polar(modulus, 2.0 * std::numbers::pi * uniform01(rng)));
  }
  return f;
}

SpectralField normalized(SpectralField f, double s, double radius) {
  const double norm = sobolev_norm(f, s);
  if (norm > 0.0) f *= radius / norm;
  return f;
}

}  // namespace kdv
