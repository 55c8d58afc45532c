#pragma once

// Band-limited real periodic fields on T = R/2piZ and their exact spectral calculus.
//
// Coefficient convention: coeff(xi) = (1/2pi) int u(x) e^{-i xi x} dx, discretized
// as (1/M) sum_j u(x_j) e^{-i xi x_j} with x_j = 2pi j / M. Only the non-negative
// half of the spectrum is stored; coeff(-xi) = conj(coeff(xi)) by construction.

#include <complex>
#include <span>
#include <vector>

namespace kdv {

using Complex = std::complex<double>;

struct GridSpec {
  int K = 0;  // highest retained mode
  int M = 0;  // physical sample count used for products

  GridSpec() = default;
  /// Throws AliasingError unless K >= 2 and M >= 4K + 1.
  GridSpec(int band, int samples);

  /// Grid for band K with the smallest 5-smooth M >= 4K + 1.
  static GridSpec for_band(int band);

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const GridSpec& grid);

  const GridSpec& grid() const noexcept { return grid_; }
  int band() const noexcept { return grid_.K; }

  /// Coefficient at any integer frequency; zero outside |xi| <= K.
  Complex coeff(int xi) const noexcept;
  /// Sets coeff(xi) and, implicitly, coeff(-xi). The zero mode must be real.
  void set(int xi, Complex value);

  /// Coefficients for xi = 0..K.
  std::span<const Complex> half() const noexcept { return half_; }
  std::span<Complex> half_mut() noexcept { return half_; }

  double mean() const noexcept { return half_.empty() ? 0.0 : half_[0].real(); }
  bool is_finite() const noexcept;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale) noexcept;

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double c, SpectralField a) { return a *= c; }

  friend bool operator==(const SpectralField&, const SpectralField&) = default;

 private:
  GridSpec grid_;
  std::vector<Complex> half_;
};

/// Forward transform of M = grid.M real samples, truncated to |xi| <= K, mean removed.
SpectralField from_physical(std::span<const double> samples, const GridSpec& grid);

/// Evaluates the field on M equispaced points; requires M >= 2K + 1.
std::vector<double> to_physical(const SpectralField& f, int samples);

/// P_N: keeps |xi| <= N.
SpectralField project_low(const SpectralField& f, double cutoff);
/// Q_N: keeps |xi| > N, so that project_low + project_high is the identity.
SpectralField project_high(const SpectralField& f, double cutoff);

/// coeff(xi) -> (i xi)^order coeff(xi).
SpectralField derivative(const SpectralField& f, int order);

/// J^a: coeff(xi) -> (1 + xi^2)^{a/2} coeff(xi).
SpectralField bessel_potential(const SpectralField& f, double a);

/// ( sum_{xi != 0} (1 + xi^2)^s |coeff(xi)|^2 )^{1/2}.
double sobolev_norm(const SpectralField& f, double s);

/// Exact band-K truncation of the product a*b; the zero mode is kept.
SpectralField dealiased_product(const SpectralField& a, const SpectralField& b);

/// (1/2pi) int u^3 dx, exact for band-limited u on a grid with M >= 3K + 1.
double cubic_mean(const SpectralField& u);

}  // namespace kdv
