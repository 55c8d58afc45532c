#include "kdv/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "kdv/errors.hpp"

namespace kdv {

namespace {

// FFTW planning is not thread-safe; plans are created once per size under a lock
// and executed through the new-array interface, which is.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [size, plans] : plans_) {
      fftw_destroy_plan(plans.forward);
      fftw_destroy_plan(plans.backward);
    }
  }

  const PlanPair& get(int size) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(size);
    if (it != plans_.end()) return it->second;
    std::vector<double> real(size);
    std::vector<Complex> spec(size / 2 + 1);
    auto* spec_ptr = reinterpret_cast<fftw_complex*>(spec.data());
    PlanPair plans;
    plans.forward = fftw_plan_dft_r2c_1d(size, real.data(), spec_ptr,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.backward = fftw_plan_dft_c2r_1d(size, spec_ptr, real.data(),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    return plans_.emplace(size, plans).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

bool is_five_smooth(int n) {
  for (int p : {2, 3, 5})
    while (n % p == 0) n /= p;
  return n == 1;
}

// Full forward transform keeping the zero mode.
SpectralField analyze(std::span<const double> samples, const GridSpec& grid) {
  const int size = static_cast<int>(samples.size());
  std::vector<double> in(samples.begin(), samples.end());
  std::vector<Complex> out(size / 2 + 1);
  fftw_execute_dft_r2c(plan_cache().get(size).forward, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  SpectralField f(grid);
  auto half = f.half_mut();
  const double scale = 1.0 / size;
  half[0] = Complex(out[0].real() * scale, 0.0);
  for (int xi = 1; xi <= grid.K; ++xi) half[xi] = out[xi] * scale;
  return f;
}

}  // namespace

GridSpec::GridSpec(int band, int samples) : K(band), M(samples) {
  if (K < 2) throw AliasingError("GridSpec: K must be >= 2, got " + std::to_string(K));
  if (M < 4 * K + 1)
    throw AliasingError("GridSpec: M must be >= 4K+1 = " + std::to_string(4 * K + 1) +
                        ", got " + std::to_string(M));
}

GridSpec GridSpec::for_band(int band) {
  int samples = 4 * band + 1;
  while (!is_five_smooth(samples)) ++samples;
  return GridSpec(band, samples);
}

SpectralField::SpectralField(const GridSpec& grid)
    : grid_(grid), half_(static_cast<std::size_t>(grid.K) + 1, Complex(0.0, 0.0)) {}

Complex SpectralField::coeff(int xi) const noexcept {
  if (xi > grid_.K || xi < -grid_.K) return {0.0, 0.0};
  return xi >= 0 ? half_[xi] : std::conj(half_[-xi]);
}

void SpectralField::set(int xi, Complex value) {
  if (xi > grid_.K || xi < -grid_.K)
    throw ShapeError("SpectralField::set: frequency " + std::to_string(xi) +
                     " outside band " + std::to_string(grid_.K));
  if (xi == 0) {
    if (value.imag() != 0.0) throw DomainError("SpectralField::set: zero mode must be real");
    half_[0] = value;
  } else if (xi > 0) {
    half_[xi] = value;
  } else {
    half_[-xi] = std::conj(value);
  }
}

bool SpectralField::is_finite() const noexcept {
  for (const auto& c : half_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (grid_ != other.grid_) throw ShapeError("SpectralField: grid mismatch in +=");
  for (std::size_t i = 0; i < half_.size(); ++i) half_[i] += other.half_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (grid_ != other.grid_) throw ShapeError("SpectralField: grid mismatch in -=");
  for (std::size_t i = 0; i < half_.size(); ++i) half_[i] -= other.half_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) noexcept {
  for (auto& c : half_) c *= scale;
  return *this;
}

SpectralField from_physical(std::span<const double> samples, const GridSpec& grid) {
  if (static_cast<int>(samples.size()) != grid.M)
    throw ShapeError("from_physical: expected " + std::to_string(grid.M) + " samples, got " +
                     std::to_string(samples.size()));
  SpectralField f = analyze(samples, grid);
  f.half_mut()[0] = 0.0;
  return f;
}

std::vector<double> to_physical(const SpectralField& f, int samples) {
  const int K = f.band();
  if (samples < 2 * K + 1)
    throw AliasingError("to_physical: M = " + std::to_string(samples) +
                        " cannot represent band " + std::to_string(K));
  std::vector<Complex> in(samples / 2 + 1, Complex(0.0, 0.0));
  const auto half = f.half();
  for (int xi = 0; xi <= K; ++xi) in[xi] = half[xi];
  std::vector<double> out(samples);
  fftw_execute_dft_c2r(plan_cache().get(samples).backward,
                       reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

SpectralField project_low(const SpectralField& f, double cutoff) {
  SpectralField out = f;
  auto half = out.half_mut();
  for (int xi = 0; xi <= f.band(); ++xi)
    if (xi > cutoff) half[xi] = 0.0;
  return out;
}

SpectralField project_high(const SpectralField& f, double cutoff) {
  SpectralField out = f;
  auto half = out.half_mut();
  for (int xi = 0; xi <= f.band(); ++xi)
    if (xi <= cutoff) half[xi] = 0.0;
  return out;
}

SpectralField derivative(const SpectralField& f, int order) {
  SpectralField out = f;
  auto half = out.half_mut();
  // i^order cycles through 1, i, -1, -i.
  static constexpr Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex phase = kPowers[((order % 4) + 4) % 4];
  for (int xi = 0; xi <= f.band(); ++xi)
    half[xi] *= phase * std::pow(static_cast<double>(xi), order);
  return out;
}

SpectralField bessel_potential(const SpectralField& f, double a) {
  SpectralField out = f;
  auto half = out.half_mut();
  for (int xi = 0; xi <= f.band(); ++xi)
    half[xi] *= std::pow(1.0 + static_cast<double>(xi) * xi, 0.5 * a);
  return out;
}

double sobolev_norm(const SpectralField& f, double s) {
  const auto half = f.half();
  double sum = 0.0;
  for (int xi = 1; xi <= f.band(); ++xi)
    sum += 2.0 * std::pow(1.0 + static_cast<double>(xi) * xi, s) * std::norm(half[xi]);
  return std::sqrt(sum);
}

SpectralField dealiased_product(const SpectralField& a, const SpectralField& b) {
  if (a.grid() != b.grid()) throw ShapeError("dealiased_product: grid mismatch");
  const int M = a.grid().M;
  auto pa = to_physical(a, M);
  const auto pb = to_physical(b, M);
  for (int j = 0; j < M; ++j) pa[j] *= pb[j];
  return analyze(pa, a.grid());
}

double cubic_mean(const SpectralField& u) {
  const auto p = to_physical(u, u.grid().M);
  double sum = 0.0;
  for (double x : p) sum += x * x * x;
  return sum / static_cast<double>(p.size());
}

}  // namespace kdv
