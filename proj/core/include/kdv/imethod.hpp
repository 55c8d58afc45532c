#pragma once

// The I-operator and the multilinear calculus behind the modified energies
// E2 = |Iu|^2, E3 = E2 + Lambda3(sigma3), E4 = E3 + Lambda4(sigma4).
//
// A k-multiplier is a function of k integer frequencies; Lambda_k(m; u_1..u_k)
// sums m(xi) * prod_j coeff_j(xi_j) over nonzero band frequencies with
// xi_1 + ... + xi_k = 0. With this normalization Lambda2(m(xi1)m(xi2); u, u)
// is exactly |Iu|^2_{L2}.

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "kdv/spectral.hpp"

namespace kdv {

/// m(xi) = min(1, N^{-s} |xi|^s): one below N, N^{-s}|xi|^s above, monotone.
class IMultiplier {
 public:
  /// Requires N > 0 and -3/4 <= s < 0.
  IMultiplier(double cutoff, double s);

  double operator()(int xi) const noexcept;
  double squared(int xi) const noexcept;

  double cutoff() const noexcept { return cutoff_; }
  double s() const noexcept { return s_; }

 private:
  double cutoff_;
  double s_;
};

double m_value(int xi, const IMultiplier& im);

/// coeff(xi) -> m(xi) coeff(xi).
SpectralField apply_I(const SpectralField& f, const IMultiplier& im);

/// i (xi_1^3 + ... + xi_k^3); throws DomainError unless the frequencies sum to zero.
Complex alpha_k(std::span<const int> xis);

using Multiplier = std::function<Complex(std::span<const int>)>;

/// Average of m over all k! orderings of the arguments.
Complex symmetrize(const Multiplier& m, std::span<const int> xis);

/// Direct nested-loop Lambda_k for 2 <= k <= 5. Throws ShapeError on grid mismatch.
Complex lambda_k(const Multiplier& m, std::span<const SpectralField> fields);

/// Flux multiplier of |Iu|^2 under the quadratic nonlinearity,
/// (i/3) (m^2(xi1) xi1 + m^2(xi2) xi2 + m^2(xi3) xi3).
Complex M3(const std::array<int, 3>& xi, const IMultiplier& im);
/// -M3 / alpha3; zero when every |xi_j| <= N.
double sigma3(const std::array<int, 3>& xi, const IMultiplier& im);
/// -(3/2) i [ sigma3(xi1, xi2, xi3 + xi4) (xi3 + xi4) ]_sym
Complex M4(const std::array<int, 4>& xi, const IMultiplier& im);
/// -M4 / alpha4. On the resonant set alpha4 = 0 the value is 0 provided M4
/// cancels there (|M4| <= 1e-12 * scale); otherwise CancellationViolation.
double sigma4(const std::array<int, 4>& xi, const IMultiplier& im);
/// -2 i [ sigma4(xi1, xi2, xi3, xi4 + xi5) (xi4 + xi5) ]_sym
Complex M5(const std::array<int, 5>& xi, const IMultiplier& im);

/// Relative tolerance of the resonant-set cancellation check in sigma4.
inline constexpr double kCancellationTolerance = 1e-12;

/// Result of checking M4 on one resonant quadruple.
struct CancellationCheck {
  double m4_abs = 0.0;
  double scale = 0.0;
  bool passed = true;
};
CancellationCheck check_m4_cancellation(const std::array<int, 4>& xi, const IMultiplier& im);

// Band sums used by the energies. These take the single field u in every slot.

/// |Iu|^2_{L2}
double energy2(const SpectralField& u, const IMultiplier& im);
/// Lambda2(m(xi1)m(xi2); u, f)
double lambda2_forcing(const SpectralField& u, const SpectralField& f, const IMultiplier& im);
/// Lambda3(M3; u, u, u), evaluated through a dealiased product.
double lambda3_flux(const SpectralField& u, const IMultiplier& im);
/// Lambda3(sigma3; u, u, u)
double lambda3_sigma3(const SpectralField& u, const IMultiplier& im);
/// Lambda4(sigma4; u, u, u, u), O(K^3).
double lambda4_sigma4(const SpectralField& u, const IMultiplier& im);

/// Right-hand side of d/dt |Iu|^2 = -2 gamma E2 + 2 Lambda2(m; u, f) + Lambda3(M3).
double energy2_rate(const SpectralField& u, const SpectralField& forcing, double gamma,
                    const IMultiplier& im);

struct MultiEnergyReport {
  double E2 = 0.0;
  double Lambda3 = 0.0;
  double Lambda4 = 0.0;
  double E3 = 0.0;
  double E4 = 0.0;
  double t = 0.0;
  int order = 2;  // highest energy actually evaluated; higher entries are zero
};

/// Energies up to `order` (2, 3 or 4).
MultiEnergyReport modified_energy(const SpectralField& u, const IMultiplier& im, int order,
                                  double t = 0.0);

struct ScalingRow {
  double cutoff = 0.0;
  double ratio3 = 0.0;  // max |Lambda3(sigma3)| / (N^{-3/2} |Iu|^3)
  double ratio4 = 0.0;  // max |Lambda4(sigma4)| / (N^{-3} |Iu|^4)
};

/// Empirical constants of the N^{-3/2} and N^{-3} bounds on Lambda3(sigma3) and
/// Lambda4(sigma4), one row per cutoff. Throws std::invalid_argument on an empty ensemble.
std::vector<ScalingRow> sigma_scaling_check(std::span<const SpectralField> ensemble,
                                            double s, std::span<const double> cutoffs);

}  // namespace kdv
