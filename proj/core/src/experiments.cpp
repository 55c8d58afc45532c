#include "kdv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kdv/errors.hpp"

namespace kdv {

namespace {

int step_count(double T, double dt) {
  if (!(T > 0.0)) throw std::invalid_argument("horizon T must be > 0");
  return std::max(1, static_cast<int>(std::lround(T / dt)));
}

class Recorder {
 public:
  Recorder(const KdvParams& p, RecordOptions opts) : p_(p), opts_(opts) {
    if (opts_.stride < 1) throw std::invalid_argument("record stride must be >= 1");
    if (opts_.energy_order != 0) im_.emplace_back(p.split_cutoff, p.s);
    rec_.meta = p;
  }

  void add(double t, const SpectralField& v, const SpectralField& w) {
    const SpectralField u = v + w;
    rec_.times.push_back(t);
    rec_.l2.push_back(sobolev_norm(u, 0.0));
    rec_.hs.push_back(sobolev_norm(u, p_.s));
    rec_.hs_w.push_back(sobolev_norm(w, p_.s));
    rec_.hs3_v.push_back(sobolev_norm(v, p_.s + 3.0));
    MultiEnergyReport e;
    if (!im_.empty()) e = modified_energy(u, im_.front(), opts_.energy_order, t);
    rec_.E2.push_back(e.E2);
    rec_.E3.push_back(e.E3);
    rec_.E4.push_back(e.E4);
  }

  bool due(int step, int last) const { return step % opts_.stride == 0 || step == last; }
  TrajectoryRecord take() { return std::move(rec_); }

 private:
  const KdvParams& p_;
  RecordOptions opts_;
  std::vector<IMultiplier> im_;
  TrajectoryRecord rec_;
};

double max_of(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : *std::max_element(xs.begin(), xs.end());
}

std::string member_message(std::size_t member, const DivergenceError& e) {
  return "divergence in ensemble member " + std::to_string(member) + ": " + e.what();
}

}  // namespace

void TrajectoryRecord::validate() const {
  const std::size_t n = times.size();
  for (const auto* col : {&l2, &hs, &hs_w, &hs3_v, &E2, &E3, &E4})
    if (col->size() != n) throw std::invalid_argument("TrajectoryRecord: column length mismatch");
  for (std::size_t i = 1; i < n; ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("TrajectoryRecord: times must be strictly increasing");
}

FitReport linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("linear_fit: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("linear_fit: need at least 2 points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: abscissae are all equal");
  FitReport fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.samples = n;
  fit.t0 = *std::min_element(x.begin(), x.end());
  fit.t1 = *std::max_element(x.begin(), x.end());
  if (n >= 3) fit.r2 = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

TrajectoryRecord simulate(const SpectralField& u0, const KdvParams& p, double T,
                          RecordOptions opts, SolverState* final_state) {
  const KdvStepper stepper(p);
  const int steps = step_count(T, p.dt);
  Recorder rec(p, opts);
  SolverState st{u0, 0.0};
  rec.add(0.0, project_low(u0, p.split_cutoff), project_high(u0, p.split_cutoff));
  for (int n = 1; n <= steps; ++n) {
    st = stepper.step(st);
    if (rec.due(n, steps))
      rec.add(st.t, project_low(st.u, p.split_cutoff), project_high(st.u, p.split_cutoff));
  }
  if (final_state) *final_state = st;
  return rec.take();
}

TrajectoryRecord simulate_split(const SpectralField& u0, const KdvParams& p, double T,
                                RecordOptions opts, SplitState* final_state) {
  const KdvStepper stepper(p);
  const int steps = step_count(T, p.dt);
  Recorder rec(p, opts);
  SplitState st = init_split(u0, p);
  rec.add(0.0, st.v, st.w);
  for (int n = 1; n <= steps; ++n) {
    st = stepper.step(st);
    if (rec.due(n, steps)) rec.add(st.t, st.v, st.w);
  }
  if (final_state) *final_state = st;
  return rec.take();
}

double tail_sup(const TrajectoryRecord& rec, const std::vector<double>& series, double from) {
  double sup = 0.0;
  for (std::size_t i = 0; i < rec.times.size(); ++i)
    if (rec.times[i] >= from) sup = std::max(sup, series[i]);
  return sup;
}

AbsorbingReport run_absorbing_ball(std::span<const SpectralField> ensemble, const KdvParams& p,
                                   double T, double margin, int stride) {
  if (ensemble.empty()) throw std::invalid_argument("run_absorbing_ball: empty ensemble");
  AbsorbingReport r;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    try {
      r.traces.push_back(simulate(ensemble[i], p, T, {stride, 0}));
    } catch (const DivergenceError& e) {
      throw DivergenceError(member_message(i, e), e.time(), e.norm());
    }
    const auto& tr = r.traces.back();
    r.initial_radius.push_back(tr.hs.front());
    r.tail_sup.push_back(tail_sup(tr, tr.hs, 0.5 * T));
  }
  r.max_tail_sup = max_of(r.tail_sup);
  r.min_tail_sup = *std::min_element(r.tail_sup.begin(), r.tail_sup.end());
  r.ball_radius = (1.0 + margin) * r.max_tail_sup;
  for (const auto& tr : r.traces) {
    double entry = 0.0;
    for (std::size_t k = tr.size(); k-- > 0;)
      if (tr.hs[k] > r.ball_radius) {
        entry = k + 1 < tr.size() ? tr.times[k + 1] : tr.times[k];
        break;
      }
    r.entry_time.push_back(entry);
  }
  std::vector<double> logr;
  for (double x : r.initial_radius) logr.push_back(std::log(std::max(x, 1e-300)));
  const bool spread = std::adjacent_find(logr.begin(), logr.end(), std::not_equal_to<>()) != logr.end();
  if (ensemble.size() >= 2 && spread) r.entry_fit = linear_fit(logr, r.entry_time);
  return r;
}

DecayReport run_decay(const SpectralField& u0, const KdvParams& p, double T, int stride) {
  if (project_high(u0, p.split_cutoff) == SpectralField(u0.grid()))
    throw std::invalid_argument("run_decay: Q_N u0 is zero, nothing to decay");
  DecayReport r;
  r.trace = simulate_split(u0, p, T, {stride, 0});
  const auto& tr = r.trace;
  r.w0 = tr.hs_w.front();
  r.wT = tr.hs_w.back();
  std::vector<double> t, logw;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    if (tr.times[k] < 0.25 * T) continue;
    if (!(tr.hs_w[k] >= std::numeric_limits<double>::min())) {
      r.underflow = true;
      break;
    }
    t.push_back(tr.times[k]);
    logw.push_back(std::log(tr.hs_w[k]));
  }
  if (t.size() >= 2) r.fit = linear_fit(t, logw);
  return r;
}

SmoothingReport run_smoothing(const SpectralField& u0, const KdvParams& p, double T, int stride) {
  SmoothingReport r;
  r.initial_hs = sobolev_norm(u0, p.s);
  r.trace = simulate_split(u0, p, T, {stride, 0});
  r.tail_sup_v = tail_sup(r.trace, r.trace.hs3_v, 0.5 * T);
  return r;
}

EnergyIdentityReport run_energy_identity(const SpectralField& u0, const KdvParams& p,
                                         const IMultiplier& im, double T, int levels,
                                         int samples) {
  if (levels < 2 || samples < 1) throw std::invalid_argument("run_energy_identity: need levels >= 2");
  EnergyIdentityReport r;
  for (int level = 0; level < levels; ++level) {
    KdvParams q = p;
    q.dt = p.dt / std::ldexp(1.0, level);
    const KdvStepper stepper(q);
    const int steps = step_count(T, q.dt);
    std::vector<int> probes;
    for (int i = 1; i <= samples; ++i)
      probes.push_back(static_cast<int>(std::lround(static_cast<double>(i) * steps / (samples + 1))));

    double worst = 0.0, scale = 0.0;
    SolverState prev{u0, 0.0};
    SolverState cur = stepper.step(prev);
    for (int n = 1; n <= probes.back(); ++n) {
      const SolverState next = stepper.step(cur);
      if (std::find(probes.begin(), probes.end(), n) != probes.end()) {
        const double fd = (energy2(next.u, im) - energy2(prev.u, im)) / (2.0 * q.dt);
        double rate = -2.0 * q.gamma * energy2(cur.u, im) + 2.0 * lambda2_forcing(cur.u, q.forcing, im);
        if (q.nonlinear) rate += lambda3_flux(cur.u, im);
        worst = std::max(worst, std::abs(fd - rate));
        scale = std::max(scale, std::abs(rate));
      }
      prev = std::move(cur);
      cur = next;
    }
    r.dts.push_back(q.dt);
    r.residuals.push_back(scale > 0.0 ? worst / scale : worst);
  }
  const double a = r.residuals[r.residuals.size() - 2];
  const double b = r.residuals.back();
  r.order = b > 0.0 ? std::log2(a / b) : std::numeric_limits<double>::max();
  return r;
}

std::vector<DriftRow> energy_drift(const SpectralField& u0, const KdvParams& p, double T,
                                   std::span<const double> cutoffs) {
  const KdvStepper stepper(p);
  const auto end = stepper.advance(SolverState{u0, 0.0}, step_count(T, p.dt));
  std::vector<DriftRow> rows;
  for (double N : cutoffs) {
    const IMultiplier im(N, p.s);
    const auto e0 = modified_energy(u0, im, 4);
    const auto e1 = modified_energy(end.u, im, 4, end.t);
    DriftRow row{N, e1.E2 - e0.E2, e1.E3 - e0.E3, e1.E4 - e0.E4, 0.0};
    row.ratio = row.dE2 != 0.0 ? std::abs(row.dE4) / std::abs(row.dE2) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

OmegaReport run_omega_limit(std::span<const SpectralField> ensemble, const KdvParams& p,
                            double T, std::span<const double> probes,
                            std::span<const double> etas) {
  if (ensemble.empty()) throw std::invalid_argument("run_omega_limit: empty ensemble");
  if (probes.empty() || etas.empty()) throw std::invalid_argument("run_omega_limit: need probes and etas");
  const int steps = step_count(T, p.dt);
  std::vector<int> eta_steps;
  for (double eta : etas) {
    const int k = static_cast<int>(std::lround(eta / p.dt));
    if (k < 1) throw std::invalid_argument("run_omega_limit: eta below one step");
    eta_steps.push_back(k);
  }
  const int max_eta = *std::max_element(eta_steps.begin(), eta_steps.end());
  std::vector<int> probe_steps;
  for (double t : probes) {
    const int k = static_cast<int>(std::lround(t / p.dt));
    if (t < 0.5 * T || k + max_eta > steps)
      throw std::invalid_argument("run_omega_limit: probes must lie in [T/2, T - max eta]");
    probe_steps.push_back(k);
  }

  OmegaReport r;
  for (const int k : eta_steps) r.etas.push_back(k * p.dt);
  r.increments.assign(eta_steps.size(), 0.0);
  const KdvStepper stepper(p);
  for (std::size_t m = 0; m < ensemble.size(); ++m) {
    SplitState st = init_split(ensemble[m], p);
    std::vector<SpectralField> at_probe(probe_steps.size());
    try {
      for (int n = 1; n <= steps; ++n) {
        st = stepper.step(st);
        const SpectralField u = st.u();
        if (2 * n >= steps) r.absorbing_radius = std::max(r.absorbing_radius, sobolev_norm(u, p.s));
        for (std::size_t i = 0; i < probe_steps.size(); ++i) {
          if (n == probe_steps[i]) {
            at_probe[i] = u;
            r.compactness_bound = std::max(
                r.compactness_bound, sobolev_norm(st.v, p.s + 3.0) + sobolev_norm(st.w, p.s));
          }
          for (std::size_t j = 0; j < eta_steps.size(); ++j)
            if (n == probe_steps[i] + eta_steps[j])
              r.increments[j] = std::max(r.increments[j], sobolev_norm(u - at_probe[i], p.s));
        }
      }
    } catch (const DivergenceError& e) {
      throw DivergenceError(member_message(m, e), e.time(), e.norm());
    }
    r.finals.push_back(st.u());
  }
  for (std::size_t a = 0; a < r.finals.size(); ++a)
    for (std::size_t b = a + 1; b < r.finals.size(); ++b)
      r.max_pairwise = std::max(r.max_pairwise, sobolev_norm(r.finals[a] - r.finals[b], p.s));
  if (r.etas.size() >= 2) r.increment_fit = linear_fit(r.etas, r.increments);
  return r;
}

std::vector<SpectralField> collect_snapshots(const SpectralField& u0, const KdvParams& p,
                                             int skip, int stride, int n) {
  if (skip < 0 || stride < 1 || n < 1) throw std::invalid_argument("collect_snapshots: bad counts");
  const KdvStepper stepper(p);
  SolverState st = stepper.advance(SolverState{u0, 0.0}, skip);
  std::vector<SpectralField> out{st.u};
  while (static_cast<int>(out.size()) < n) {
    st = stepper.advance(st, stride);
    out.push_back(st.u);
  }
  return out;
}

}  // namespace kdv
