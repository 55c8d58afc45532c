#include "kdv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "kdv/errors.hpp"

namespace kdv {

namespace {

constexpr double kMeanDrift = 1e-10;

SpectralField field_from(const GridSpec& grid, const Complex* data) {
  SpectralField f(grid);
  auto half = f.half_mut();
  std::copy(data, data + half.size(), half.begin());
  return f;
}

void check_state(const SpectralField& f, double t, const char* name) {
  if (!f.is_finite())
    throw DivergenceError(std::string("divergence: non-finite ") + name + " at t = " +
                              std::to_string(t),
                          t, std::numeric_limits<double>::infinity());
  if (std::abs(f.mean()) > kMeanDrift)
    throw DivergenceError(std::string("divergence: zero mode of ") + name + " drifted to " +
                              std::to_string(f.mean()),
                          t, sobolev_norm(f, 0.0));
}

}  // namespace

void KdvParams::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("KdvParams: gamma must be finite and >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("KdvParams: dt must be > 0");
  if (!(split_cutoff > 0.0)) throw std::invalid_argument("KdvParams: split cutoff must be > 0");
  if (grid.K < 2) throw std::invalid_argument("KdvParams: grid not set");
  if (forcing.grid() != grid) throw ShapeError("KdvParams: forcing lives on a different grid");
  if (forcing.mean() != 0.0) throw std::invalid_argument("KdvParams: forcing must be mean-zero");
  if (!forcing.is_finite()) throw std::invalid_argument("KdvParams: forcing not finite");
}

KdvParams make_params(const GridSpec& grid, double gamma, double dt) {
  KdvParams p;
  p.grid = grid;
  p.gamma = gamma;
  p.dt = dt;
  p.forcing = SpectralField(grid);
  return p;
}

double stable_dt(const SpectralField& u, double cap) {
  const auto samples = to_physical(u, u.grid().M);
  double sup = 0.0;
  for (double x : samples) sup = std::max(sup, std::abs(x));
  return std::min(0.5 / (u.band() * sup + 1.0), cap);
}

SpectralField stationary_profile(const SpectralField& f, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("stationary_profile: gamma must be > 0");
  SpectralField g = f;
  auto half = g.half_mut();
  for (int xi = 0; xi <= f.band(); ++xi) {
    const double x = xi;
    half[xi] /= Complex(gamma, -x * x * x);
  }
  return g;
}

SpectralField full_rhs(const SpectralField& u, const KdvParams& p) {
  SpectralField out = p.forcing;
  if (!p.nonlinear) return out;
  const SpectralField sq = dealiased_product(u, u);
  const auto cs = sq.half();
  auto half = out.half_mut();
  for (int xi = 0; xi <= u.band(); ++xi) half[xi] -= Complex(0.0, 0.5 * xi) * cs[xi];
  return out;
}

SplitRhs split_rhs(const SpectralField& v, const SpectralField& w, const KdvParams& p,
                   WForm form) {
  const GridSpec& grid = p.grid;
  SplitRhs out{p.forcing, SpectralField(grid)};
  if (!p.nonlinear) return out;
  const int M = grid.M;
  const int K = grid.K;
  const double N = p.split_cutoff;

  const auto pv = to_physical(v, M);
  const auto pw = to_physical(w, M);
  std::vector<double> u2(M), v2(M), wterm(M);
  for (int j = 0; j < M; ++j) {
    const double u = pv[j] + pw[j];
    u2[j] = u * u;
    v2[j] = pv[j] * pv[j];
    wterm[j] = form == WForm::Transport ? 0.5 * pw[j] * pw[j] - u * pw[j] : 0.0;
  }
  // Products keep their means; only nonzero modes are used below.
  const SpectralField su2 = from_physical(u2, grid);
  const SpectralField sv2 = from_physical(v2, grid);

  auto hv = out.v.half_mut();
  auto hw = out.w.half_mut();
  const auto cu2 = su2.half();
  const auto cv2 = sv2.half();
  for (int xi = 1; xi <= K; ++xi) {
    const Complex half_dx(0.0, 0.5 * xi);
    if (xi <= N)
      hv[xi] -= half_dx * cu2[xi];
    else
      hv[xi] -= half_dx * cv2[xi];
  }
  if (form == WForm::Difference) {
    for (int xi = 1; xi <= K; ++xi)
      if (xi > N) hw[xi] = -Complex(0.0, 0.5 * xi) * (cu2[xi] - cv2[xi]);
  } else {
    const SpectralField sw = from_physical(wterm, grid);
    const auto cw = sw.half();
    for (int xi = 1; xi <= K; ++xi)
      if (xi > N) hw[xi] = Complex(0.0, static_cast<double>(xi)) * cw[xi];
  }
  return out;
}

Complex phi_function(int k, Complex z) {
  if (k < 1 || k > 3) throw std::invalid_argument("phi_function: k must be 1, 2 or 3");
  if (std::abs(z) < 1.0) {
    // Taylor series; 30 terms reach double precision for |z| < 1.
    Complex term = 1.0;
    for (int j = 1; j <= k; ++j) term /= static_cast<double>(j);
    Complex sum = term;
    for (int n = 1; n < 30; ++n) {
      term *= z / static_cast<double>(n + k);
      sum += term;
    }
    return sum;
  }
  const Complex e = std::exp(z);
  switch (k) {
    case 1:
      return (e - 1.0) / z;
    case 2:
      return (e - 1.0 - z) / (z * z);
    default:
      return (e - 1.0 - z - 0.5 * z * z) / (z * z * z);
  }
}

KdvStepper::KdvStepper(KdvParams params) : params_(std::move(params)) {
  params_.validate();
  const int K = params_.grid.K;
  const double h = params_.dt;
  lin_.resize(K + 1);
  exp_.resize(K + 1);
  exp_half_.resize(K + 1);
  q_half_.resize(K + 1);
  f1_.resize(K + 1);
  f2_.resize(K + 1);
  f3_.resize(K + 1);
  for (int xi = 0; xi <= K; ++xi) {
    const double x = xi;
    const Complex L(-params_.gamma, x * x * x);
    const Complex z = L * h;
    lin_[xi] = L;
    exp_[xi] = std::exp(z);
    exp_half_[xi] = std::exp(0.5 * z);
    q_half_[xi] = 0.5 * h * phi_function(1, 0.5 * z);
    const Complex p1 = phi_function(1, z);
    const Complex p2 = phi_function(2, z);
    const Complex p3 = phi_function(3, z);
    f1_[xi] = h * (p1 - 3.0 * p2 + 4.0 * p3);
    f2_[xi] = h * (p2 - 2.0 * p3);
    f3_[xi] = h * (-p2 + 4.0 * p3);
  }
}

template <class Rhs>
void KdvStepper::integrate(std::vector<Complex>& y, Rhs&& rhs) const {
  const std::size_t n = y.size();
  const std::size_t modes = lin_.size();
  std::vector<Complex> nu(n), na(n), nb(n), nc(n), a(n), b(n), c(n);
  rhs(y, nu);
  if (params_.integrator == Integrator::ExponentialRK4) {
    // Cox-Matthews ETDRK4.
    for (std::size_t i = 0; i < n; ++i) a[i] = exp_half_[i % modes] * y[i] + q_half_[i % modes] * nu[i];
    rhs(a, na);
    for (std::size_t i = 0; i < n; ++i) b[i] = exp_half_[i % modes] * y[i] + q_half_[i % modes] * na[i];
    rhs(b, nb);
    for (std::size_t i = 0; i < n; ++i)
      c[i] = exp_half_[i % modes] * a[i] + q_half_[i % modes] * (2.0 * nb[i] - nu[i]);
    rhs(c, nc);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t m = i % modes;
      y[i] = exp_[m] * y[i] + f1_[m] * nu[i] + 2.0 * f2_[m] * (na[i] + nb[i]) + f3_[m] * nc[i];
    }
  } else {
    // Classical RK4 on the interaction variable e^{-Lt} u.
    const double h = params_.dt;
    for (std::size_t i = 0; i < n; ++i) a[i] = exp_half_[i % modes] * (y[i] + 0.5 * h * nu[i]);
    rhs(a, na);
    for (std::size_t i = 0; i < n; ++i) b[i] = exp_half_[i % modes] * y[i] + 0.5 * h * na[i];
    rhs(b, nb);
    for (std::size_t i = 0; i < n; ++i) c[i] = exp_[i % modes] * y[i] + h * exp_half_[i % modes] * nb[i];
    rhs(c, nc);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t m = i % modes;
      y[i] = exp_[m] * y[i] +
             h / 6.0 * (exp_[m] * nu[i] + 2.0 * exp_half_[m] * (na[i] + nb[i]) + nc[i]);
    }
  }
}

SolverState KdvStepper::step(const SolverState& st) const {
  const GridSpec& grid = params_.grid;
  if (st.u.grid() != grid) throw ShapeError("KdvStepper: state grid differs from params grid");
  std::vector<Complex> y(st.u.half().begin(), st.u.half().end());
  integrate(y, [&](const std::vector<Complex>& in, std::vector<Complex>& out) {
    const SpectralField r = full_rhs(field_from(grid, in.data()), params_);
    std::copy(r.half().begin(), r.half().end(), out.begin());
  });
  SolverState next{field_from(grid, y.data()), st.t + params_.dt};
  check_state(next.u, next.t, "u");
  return next;
}

SplitState KdvStepper::step(const SplitState& st) const {
  const GridSpec& grid = params_.grid;
  if (st.v.grid() != grid || st.w.grid() != grid)
    throw ShapeError("KdvStepper: state grid differs from params grid");
  const std::size_t modes = grid.K + 1;
  std::vector<Complex> y(2 * modes);
  std::copy(st.v.half().begin(), st.v.half().end(), y.begin());
  std::copy(st.w.half().begin(), st.w.half().end(), y.begin() + modes);
  integrate(y, [&](const std::vector<Complex>& in, std::vector<Complex>& out) {
    const SplitRhs r = split_rhs(field_from(grid, in.data()), field_from(grid, in.data() + modes),
                                 params_);
    std::copy(r.v.half().begin(), r.v.half().end(), out.begin());
    std::copy(r.w.half().begin(), r.w.half().end(), out.begin() + modes);
  });
  SplitState next{field_from(grid, y.data()), field_from(grid, y.data() + modes), st.t + params_.dt};
  check_state(next.v, next.t, "v");
  check_state(next.w, next.t, "w");
  return next;
}

SolverState KdvStepper::advance(SolverState st, int steps) const {
  for (int i = 0; i < steps; ++i) st = step(st);
  return st;
}

SplitState KdvStepper::advance(SplitState st, int steps) const {
  for (int i = 0; i < steps; ++i) st = step(st);
  return st;
}

SolverState step_full(const SolverState& st, const KdvParams& p) { return KdvStepper(p).step(st); }

SplitState step_split(const SplitState& st, const KdvParams& p) { return KdvStepper(p).step(st); }

SplitState init_split(const SpectralField& u0, const KdvParams& p) {
  return {project_low(u0, p.split_cutoff), project_high(u0, p.split_cutoff), 0.0};
}

RegularityState regularity_view(const SplitState& st, const KdvParams& p, const SpectralField& g) {
  RegularityState r;
  r.gN = project_high(g, p.split_cutoff);
  r.y = project_low(st.v, p.split_cutoff);
  r.z = project_high(st.v, p.split_cutoff) - r.gN;
  return r;
}

SpectralField z_equation_rhs(const SpectralField& z, const SpectralField& v, const KdvParams& p) {
  SpectralField out(p.grid);
  auto half = out.half_mut();
  const auto cz = z.half();
  SpectralField sq(p.grid);
  if (p.nonlinear) sq = dealiased_product(v, v);
  const auto cs = sq.half();
  for (int xi = 1; xi <= p.grid.K; ++xi) {
    const double x = xi;
    half[xi] = Complex(-p.gamma, x * x * x) * cz[xi];
    if (xi > p.split_cutoff) half[xi] -= Complex(0.0, 0.5 * x) * cs[xi];
  }
  return out;
}

double lifetime_hint(const SpectralField& u0, const KdvParams& p, const IMultiplier& im) {
  const double size = std::sqrt(energy2(u0, im)) + std::sqrt(energy2(p.forcing, im));
  if (size == 0.0) return 1.0;
  return std::max(std::min(std::pow(size, -3.1), 1.0), p.dt);
}

double hamiltonian(const SpectralField& u) {
  const double grad = sobolev_norm(derivative(u, 1), 0.0);
  return 0.5 * grad * grad - cubic_mean(u) / 6.0;
}

}  // namespace kdv
