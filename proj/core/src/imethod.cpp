#include "kdv/imethod.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kdv/errors.hpp"

namespace kdv {

namespace {

template <std::size_t K>
void require_resonant(const std::array<int, K>& xi, const char* who) {
  long long sum = 0;
  for (int x : xi) sum += x;
  if (sum != 0) throw DomainError(std::string(who) + ": frequencies must sum to zero");
}

template <std::size_t K>
void require_nonzero(const std::array<int, K>& xi, const char* who) {
  for (int x : xi)
    if (x == 0) throw DomainError(std::string(who) + ": zero frequency");
}

// m^2(xi) tabulated on |xi| <= limit, with the multiplier as fallback.
class SquaredTable {
 public:
  SquaredTable(const IMultiplier& im, int limit) : im_(im), table_(limit + 1) {
    for (int xi = 0; xi <= limit; ++xi) table_[xi] = im.squared(xi);
  }

  double operator()(int xi) const noexcept {
    const int a = xi < 0 ? -xi : xi;
    return a < static_cast<int>(table_.size()) ? table_[a] : im_.squared(a);
  }

 private:
  const IMultiplier& im_;
  std::vector<double> table_;
};

// sigma3(x, y, -(x+y)) * (-(x+y)), i.e. one pair term of the M4 symmetrization
// with the complementary pair summing to x + y. Exactly odd under (x,y) -> (-x,-y).
template <class Table>
double pair_term(const Table& m2, int x, int y) {
  const int p = x + y;
  const double flux = m2(x) * x + m2(y) * y - m2(p) * p;
  return -flux / (9.0 * static_cast<double>(x) * static_cast<double>(y));
}

// S4 = sum over the six pairs {c,d} of sigma3(xi_a, xi_b, xi_c + xi_d)(xi_c + xi_d),
// so that M4 = -(i/4) S4. `scale` receives the sum of absolute term values.
template <class Table>
double pair_sum4(const Table& m2, const std::array<int, 4>& xi, double* scale) {
  static constexpr int kPairs[6][2] = {{0, 1}, {2, 3}, {0, 2}, {1, 3}, {0, 3}, {1, 2}};
  double sum = 0.0;
  double abs_sum = 0.0;
  for (const auto& pr : kPairs) {
    const double t = pair_term(m2, xi[pr[0]], xi[pr[1]]);
    sum += t;
    abs_sum += std::abs(t);
  }
  if (scale) *scale = abs_sum;
  return sum;
}

template <class Table>
double sigma4_from_table(const Table& m2, const std::array<int, 4>& xi) {
  double scale = 0.0;
  const double s4 = pair_sum4(m2, xi, &scale);
  const long long resonance = static_cast<long long>(xi[0] + xi[1]) * (xi[0] + xi[2]) *
                              (xi[0] + xi[3]);
  if (resonance == 0) {
    if (std::abs(s4) / 4.0 > kCancellationTolerance * scale / 4.0)
      throw CancellationViolation("sigma4: M4 does not vanish on resonant quadruple (" +
                                  std::to_string(xi[0]) + "," + std::to_string(xi[1]) + "," +
                                  std::to_string(xi[2]) + "," + std::to_string(xi[3]) + ")");
    return 0.0;
  }
  // sigma4 = -M4 / alpha4 = (i S4 / 4) / (3 i P)
  return s4 / (12.0 * static_cast<double>(resonance));
}

struct DirectSquared {
  const IMultiplier& im;
  double operator()(int xi) const noexcept { return im.squared(xi); }
};

}  // namespace

IMultiplier::IMultiplier(double cutoff, double s) : cutoff_(cutoff), s_(s) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("IMultiplier: cutoff N must be positive");
  if (!(s < 0.0 && s >= -0.75))
    throw std::invalid_argument("IMultiplier: s must satisfy -3/4 <= s < 0");
}

double IMultiplier::operator()(int xi) const noexcept {
  const double a = std::abs(static_cast<double>(xi));
  if (a <= cutoff_) return 1.0;
  return std::min(1.0, std::pow(a / cutoff_, s_));
}

double IMultiplier::squared(int xi) const noexcept {
  const double m = (*this)(xi);
  return m * m;
}

double m_value(int xi, const IMultiplier& im) { return im(xi); }

SpectralField apply_I(const SpectralField& f, const IMultiplier& im) {
  SpectralField out = f;
  auto half = out.half_mut();
  for (int xi = 1; xi <= f.band(); ++xi) half[xi] *= im(xi);
  return out;
}

Complex alpha_k(std::span<const int> xis) {
  long long sum = 0;
  double cubes = 0.0;
  for (int x : xis) {
    sum += x;
    cubes += static_cast<double>(x) * x * x;
  }
  if (sum != 0) throw DomainError("alpha_k: frequencies must sum to zero");
  return {0.0, cubes};
}

Complex symmetrize(const Multiplier& m, std::span<const int> xis) {
  std::vector<int> order(xis.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> permuted(xis.size());
  Complex sum{0.0, 0.0};
  long count = 0;
  do {
    for (std::size_t j = 0; j < order.size(); ++j) permuted[j] = xis[order[j]];
    sum += m(permuted);
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  return sum / static_cast<double>(count);
}

Complex lambda_k(const Multiplier& m, std::span<const SpectralField> fields) {
  const int k = static_cast<int>(fields.size());
  if (k < 2 || k > 5) throw std::invalid_argument("lambda_k: k must be in [2, 5]");
  const GridSpec& grid = fields[0].grid();
  for (const auto& f : fields)
    if (f.grid() != grid) throw ShapeError("lambda_k: grid mismatch");
  const int K = grid.K;

  std::vector<int> xi(k, -K);
  Complex sum{0.0, 0.0};
  // Odometer over the first k-1 frequencies; the last one closes the hyperplane.
  while (true) {
    bool skip = false;
    int partial = 0;
    for (int j = 0; j + 1 < k; ++j) {
      if (xi[j] == 0) skip = true;
      partial += xi[j];
    }
    const int last = -partial;
    if (!skip && last != 0 && last >= -K && last <= K) {
      xi[k - 1] = last;
      Complex prod{1.0, 0.0};
      for (int j = 0; j < k; ++j) prod *= fields[j].coeff(xi[j]);
      if (prod != Complex(0.0, 0.0)) sum += m(xi) * prod;
    }
    int j = k - 2;
    while (j >= 0 && xi[j] == K) xi[j--] = -K;
    if (j < 0) break;
    ++xi[j];
  }
  return sum;
}

Complex M3(const std::array<int, 3>& xi, const IMultiplier& im) {
  require_resonant(xi, "M3");
  double flux = 0.0;
  for (int x : xi) flux += im.squared(x) * x;
  return {0.0, flux / 3.0};
}

double sigma3(const std::array<int, 3>& xi, const IMultiplier& im) {
  require_resonant(xi, "sigma3");
  require_nonzero(xi, "sigma3");
  const Complex value = -M3(xi, im) / alpha_k(xi);
  return value.real();
}

Complex M4(const std::array<int, 4>& xi, const IMultiplier& im) {
  require_resonant(xi, "M4");
  require_nonzero(xi, "M4");
  return {0.0, -pair_sum4(DirectSquared{im}, xi, nullptr) / 4.0};
}

CancellationCheck check_m4_cancellation(const std::array<int, 4>& xi, const IMultiplier& im) {
  require_resonant(xi, "M4");
  require_nonzero(xi, "M4");
  double scale = 0.0;
  const double s4 = pair_sum4(DirectSquared{im}, xi, &scale);
  CancellationCheck check;
  check.m4_abs = std::abs(s4) / 4.0;
  check.scale = scale / 4.0;
  check.passed = check.m4_abs <= kCancellationTolerance * check.scale;
  return check;
}

double sigma4(const std::array<int, 4>& xi, const IMultiplier& im) {
  require_resonant(xi, "sigma4");
  require_nonzero(xi, "sigma4");
  return sigma4_from_table(DirectSquared{im}, xi);
}

Complex M5(const std::array<int, 5>& xi, const IMultiplier& im) {
  require_resonant(xi, "M5");
  require_nonzero(xi, "M5");
  double sum = 0.0;
  for (int d = 0; d < 5; ++d) {
    for (int e = d + 1; e < 5; ++e) {
      const int q = xi[d] + xi[e];
      if (q == 0) continue;
      std::array<int, 4> args{};
      int n = 0;
      for (int j = 0; j < 5; ++j)
        if (j != d && j != e) args[n++] = xi[j];
      args[3] = q;
      sum += sigma4(args, im) * q;
    }
  }
  return {0.0, -2.0 * sum / 10.0};
}

double energy2(const SpectralField& u, const IMultiplier& im) {
  const auto c = u.half();
  double sum = 0.0;
  for (int xi = 1; xi <= u.band(); ++xi) sum += 2.0 * im.squared(xi) * std::norm(c[xi]);
  return sum;
}

double lambda2_forcing(const SpectralField& u, const SpectralField& f, const IMultiplier& im) {
  if (u.grid() != f.grid()) throw ShapeError("lambda2_forcing: grid mismatch");
  const auto cu = u.half();
  const auto cf = f.half();
  double sum = 0.0;
  for (int xi = 1; xi <= u.band(); ++xi)
    sum += 2.0 * im.squared(xi) * (cu[xi] * std::conj(cf[xi])).real();
  return sum;
}

double lambda3_flux(const SpectralField& u, const IMultiplier& im) {
  // By symmetry Lambda3(M3) = i sum_xi m^2(xi) xi u(xi) (u^2)(-xi).
  const SpectralField sq = dealiased_product(u, u);
  const auto cu = u.half();
  const auto cs = sq.half();
  double sum = 0.0;
  for (int xi = 1; xi <= u.band(); ++xi) {
    // xi and -xi contribute conjugate terms.
    const Complex term = Complex(0.0, im.squared(xi) * xi) * cu[xi] * std::conj(cs[xi]);
    sum += 2.0 * term.real();
  }
  return sum;
}

double lambda3_sigma3(const SpectralField& u, const IMultiplier& im) {
  const int K = u.band();
  const SquaredTable m2(im, 2 * K);
  Complex sum{0.0, 0.0};
  for (int a = -K; a <= K; ++a) {
    if (a == 0) continue;
    const Complex ca = u.coeff(a);
    for (int b = -K; b <= K; ++b) {
      const int c = -a - b;
      if (b == 0 || c == 0 || c < -K || c > K) continue;
      const double flux = m2(a) * a + m2(b) * b + m2(c) * c;
      if (flux == 0.0) continue;
      const double sigma = -flux / (9.0 * a * b * static_cast<double>(c));
      sum += sigma * ca * u.coeff(b) * u.coeff(c);
    }
  }
  return sum.real();
}

double lambda4_sigma4(const SpectralField& u, const IMultiplier& im) {
  const int K = u.band();
  const SquaredTable m2(im, 3 * K);
  const int low = static_cast<int>(std::floor(im.cutoff()));
  Complex sum{0.0, 0.0};
  for (int a = -K; a <= K; ++a) {
    if (a == 0) continue;
    const Complex ca = u.coeff(a);
    for (int b = -K; b <= K; ++b) {
      if (b == 0) continue;
      const Complex cab = ca * u.coeff(b);
      for (int c = -K; c <= K; ++c) {
        const int d = -a - b - c;
        if (c == 0 || d == 0 || d < -K || d > K) continue;
        // Every sigma3 argument inside the cutoff: sigma4 vanishes.
        const int ab = a + b;
        const int ac = a + c;
        const int ad = a + d;
        if (std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d), std::abs(ab),
                      std::abs(ac), std::abs(ad)}) <= low)
          continue;
        const double sigma = sigma4_from_table(m2, {a, b, c, d});
        if (sigma == 0.0) continue;
        sum += sigma * cab * u.coeff(c) * u.coeff(d);
      }
    }
  }
  return sum.real();
}

double energy2_rate(const SpectralField& u, const SpectralField& forcing, double gamma,
                    const IMultiplier& im) {
  return -2.0 * gamma * energy2(u, im) + 2.0 * lambda2_forcing(u, forcing, im) +
         lambda3_flux(u, im);
}

MultiEnergyReport modified_energy(const SpectralField& u, const IMultiplier& im, int order,
                                  double t) {
  if (order < 2 || order > 4) throw std::invalid_argument("modified_energy: order must be 2..4");
  MultiEnergyReport r;
  r.t = t;
  r.order = order;
  r.E2 = energy2(u, im);
  if (order >= 3) {
    r.Lambda3 = lambda3_sigma3(u, im);
    r.E3 = r.E2 + r.Lambda3;
  }
  if (order >= 4) {
    r.Lambda4 = lambda4_sigma4(u, im);
    r.E4 = r.E3 + r.Lambda4;
  }
  return r;
}

std::vector<ScalingRow> sigma_scaling_check(std::span<const SpectralField> ensemble, double s,
                                            std::span<const double> cutoffs) {
  if (ensemble.empty()) throw std::invalid_argument("sigma_scaling_check: empty ensemble");
  std::vector<ScalingRow> rows;
  for (double N : cutoffs) {
    const IMultiplier im(N, s);
    ScalingRow row;
    row.cutoff = N;
    for (const auto& u : ensemble) {
      const double norm_i = std::sqrt(energy2(u, im));
      if (norm_i == 0.0) continue;
      const double r3 = std::abs(lambda3_sigma3(u, im)) / (std::pow(N, -1.5) * std::pow(norm_i, 3));
      const double r4 = std::abs(lambda4_sigma4(u, im)) / (std::pow(N, -3.0) * std::pow(norm_i, 4));
      row.ratio3 = std::max(row.ratio3, r3);
      row.ratio4 = std::max(row.ratio4, r4);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace kdv
