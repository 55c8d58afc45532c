#pragma once

// Time integration of
//   u_t + u_xxx + (1/2)(u^2)_x + gamma u = f
// in Fourier variables, u_t(xi) = (i xi^3 - gamma) u(xi) - (i xi / 2)(u^2)(xi) + f(xi),
// and of the frequency-split system u = v + w:
//   v_t + v_xxx + (1/2)(v^2)_x + gamma v = -(1/2) P_N (u^2 - v^2)_x + f
//   w_t + w_xxx + gamma w                = -(1/2) Q_N (u^2 - v^2)_x
// The linear part is propagated exactly; the quadratic terms use exact
// dealiased products.

#include <vector>

#include "kdv/imethod.hpp"
#include "kdv/spectral.hpp"

namespace kdv {

enum class Integrator { ExponentialRK4, IntegratingFactorRK4 };

struct KdvParams {
  double gamma = 1.0;
  double s = -0.5;
  double split_cutoff = 8.0;
  SpectralField forcing;
  GridSpec grid;
  double dt = 1e-3;
  Integrator integrator = Integrator::ExponentialRK4;
  bool nonlinear = true;  // false switches the quadratic term off (linear test mode)

  /// Throws std::invalid_argument on gamma < 0, dt <= 0, forcing off-grid or with a mean.
  void validate() const;
};

/// KdvParams on `grid` with zero forcing.
KdvParams make_params(const GridSpec& grid, double gamma, double dt);

/// Step bound min(0.5 / (K max|u| + 1), cap) for data u.
double stable_dt(const SpectralField& u, double cap);

struct SolverState {
  SpectralField u;
  double t = 0.0;
};

struct SplitState {
  SpectralField v;
  SpectralField w;
  double t = 0.0;

  SpectralField u() const { return v + w; }
};

struct RegularityState {
  SpectralField gN;  // Q_N g
  SpectralField y;   // P_N v
  SpectralField z;   // Q_N v - g_N
};

/// Solution g of g_xxx + gamma g = f: g(xi) = f(xi) / (gamma - i xi^3).
SpectralField stationary_profile(const SpectralField& f, double gamma);

/// Nonlinear-plus-forcing part of the full right-hand side.
SpectralField full_rhs(const SpectralField& u, const KdvParams& p);

/// Two algebraically equivalent forms of the w forcing term.
enum class WForm {
  Difference,  // -(1/2) Q_N (u^2 - v^2)_x
  Transport,   // Q_N [w w_x - (u w)_x]
};

struct SplitRhs {
  SpectralField v;
  SpectralField w;
};

/// Nonlinear-plus-forcing parts of the split right-hand sides.
SplitRhs split_rhs(const SpectralField& v, const SpectralField& w, const KdvParams& p,
                   WForm form = WForm::Transport);

/// Fixed-step exponential integrator for the full and the split flow. The
/// per-mode propagators are built once from (grid, gamma, dt, integrator).
class KdvStepper {
 public:
  explicit KdvStepper(KdvParams params);

  const KdvParams& params() const noexcept { return params_; }

  /// Throws DivergenceError on non-finite output or zero-mode drift beyond 1e-10.
  SolverState step(const SolverState& st) const;
  SplitState step(const SplitState& st) const;

  SolverState advance(SolverState st, int steps) const;
  SplitState advance(SplitState st, int steps) const;

 private:
  template <class Rhs>
  void integrate(std::vector<Complex>& y, Rhs&& rhs) const;

  KdvParams params_;
  // Per-mode coefficients for xi = 0..K.
  std::vector<Complex> lin_;     // i xi^3 - gamma
  std::vector<Complex> exp_;     // e^{L dt}
  std::vector<Complex> exp_half_;
  std::vector<Complex> q_half_;  // (dt/2) phi1(L dt / 2)
  std::vector<Complex> f1_, f2_, f3_;
};

SolverState step_full(const SolverState& st, const KdvParams& p);
SplitState step_split(const SplitState& st, const KdvParams& p);

/// v = P_N u0, w = Q_N u0.
SplitState init_split(const SpectralField& u0, const KdvParams& p);

/// (g_N, y, z) with g = stationary_profile(p.forcing, p.gamma).
RegularityState regularity_view(const SplitState& st, const KdvParams& p, const SpectralField& g);

/// Right-hand side of z_t = -z_xxx - gamma z - (1/2) Q_N (v^2)_x.
SpectralField z_equation_rhs(const SpectralField& z, const SpectralField& v, const KdvParams& p);

/// (|Iu0| + |If|)^{-3.1} clamped to [dt, 1].
double lifetime_hint(const SpectralField& u0, const KdvParams& p, const IMultiplier& im);

/// (1/2)|u_x|^2 - (1/6) mean(u^3); conserved when gamma = 0 and f = 0.
double hamiltonian(const SpectralField& u);

/// phi_k(z) = sum_n z^n / (n + k)!, k = 1..3.
Complex phi_function(int k, Complex z);

}  // namespace kdv
