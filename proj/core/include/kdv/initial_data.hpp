#pragma once

// Deterministic initial-data and forcing recipes.

#include <cstdint>
#include <random>

#include "kdv/spectral.hpp"

namespace kdv {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng);

/// amplitude * cos(xi x + phase).
SpectralField single_mode(const GridSpec& grid, int xi, double amplitude, double phase = 0.0);

/// |coeff(xi)| = <xi>^{-exponent} on 1 <= |xi| <= K with uniformly random phases.
SpectralField rough_power_law(const GridSpec& grid, double exponent, std::uint64_t seed);

/// Random coefficients with uniform modulus in [0, 1) and uniform phase on lo <= |xi| <= hi.
SpectralField random_band(const GridSpec& grid, int lo, int hi, std::uint64_t seed);

/// f rescaled so that sobolev_norm(f, s) == radius. A zero field is returned unchanged.
SpectralField normalized(SpectralField f, double s, double radius);

}  // namespace kdv
