#include "kdv/run_config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <limits>

#include <json.hpp>

#include "kdv/errors.hpp"
#include "kdv/experiments.hpp"
#include "kdv/initial_data.hpp"

namespace kdv {

namespace {

using Json = nlohmann::json;

constexpr std::uint64_t kForcingSeedOffset = 7919;

constexpr std::array<std::pair<Suite, std::string_view>, 8> kSuites{{
    {Suite::Simulate, "simulate"},
    {Suite::Split, "split"},
    {Suite::Energy, "energy"},
    {Suite::Absorbing, "absorbing"},
    {Suite::Decay, "decay"},
    {Suite::Smoothing, "smoothing"},
    {Suite::Omega, "omega"},
    {Suite::Xsb, "xsb"},
}};

constexpr std::array<std::pair<RecipeKind, std::string_view>, 4> kRecipes{{
    {RecipeKind::None, "none"},
    {RecipeKind::SingleMode, "single-mode"},
    {RecipeKind::RoughPowerLaw, "rough-power-law"},
    {RecipeKind::RandomBand, "random-band"},
}};

[[noreturn]] void fail(std::string_view key, std::string_view constraint) {
  throw ConfigError("config key '" + std::string(key) + "': " + std::string(constraint));
}

void require(bool ok, std::string_view key, std::string_view constraint) {
  if (!ok) fail(key, constraint);
}

void check_keys(const Json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail(std::string(where) + key, "unknown key");
}

double get_number(const Json& v, std::string_view key) {
  require(v.is_number(), key, "must be a number");
  const double x = v.get<double>();
  require(std::isfinite(x), key, "must be finite");
  return x;
}

int get_int(const Json& v, std::string_view key) {
  require(v.is_number_integer(), key, "must be an integer");
  const auto x = v.get<std::int64_t>();
  require(x >= std::numeric_limits<int>::min() && x <= std::numeric_limits<int>::max(), key,
          "out of range");
  return static_cast<int>(x);
}

std::vector<double> get_numbers(const Json& v, std::string_view key) {
  require(v.is_array(), key, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(get_number(x, key));
  return out;
}

DataRecipe parse_recipe(const Json& v, std::string_view key, DataRecipe r) {
  require(v.is_object(), key, "must be an object");
  const std::string prefix = std::string(key) + ".";
  check_keys(v, prefix, {"kind", "radius", "mode", "phase", "exponent", "lo", "hi"});
  if (v.contains("kind")) {
    require(v["kind"].is_string(), prefix + "kind", "must be a string");
    const auto name = v["kind"].get<std::string>();
    const auto it = std::find_if(kRecipes.begin(), kRecipes.end(),
                                 [&](const auto& e) { return e.second == name; });
    require(it != kRecipes.end(), prefix + "kind",
            "must be one of none, single-mode, rough-power-law, random-band");
    r.kind = it->first;
  }
  if (v.contains("radius")) r.radius = get_number(v["radius"], prefix + "radius");
  if (v.contains("mode")) r.mode = get_int(v["mode"], prefix + "mode");
  if (v.contains("phase")) r.phase = get_number(v["phase"], prefix + "phase");
  if (v.contains("exponent")) r.exponent = get_number(v["exponent"], prefix + "exponent");
  if (v.contains("lo")) r.lo = get_int(v["lo"], prefix + "lo");
  if (v.contains("hi")) r.hi = get_int(v["hi"], prefix + "hi");
  return r;
}

void validate_recipe(const DataRecipe& r, std::string_view key, int K) {
  const std::string prefix = std::string(key) + ".";
  require(std::isfinite(r.radius) && r.radius >= 0.0, prefix + "radius", "must be >= 0");
  require(std::isfinite(r.exponent), prefix + "exponent", "must be finite");
  require(std::isfinite(r.phase), prefix + "phase", "must be finite");
  if (r.kind == RecipeKind::SingleMode)
    require(r.mode >= 1 && r.mode <= K, prefix + "mode", "must satisfy 1 <= mode <= K");
  if (r.kind == RecipeKind::RandomBand)
    require(r.lo >= 1 && r.lo <= r.hi && r.hi <= K, prefix + "lo",
            "must satisfy 1 <= lo <= hi <= K");
}

bool uses_imethod(const RunConfig& cfg) {
  return cfg.suite == Suite::Energy || cfg.energy_order > 0;
}

double relative_spread(const std::vector<double>& xs) {
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
}

class ReportBuilder {
 public:
  ReportBuilder(const RunConfig& cfg, const KdvParams& p, double T) : cfg_(cfg) {
    r_.suite = std::string(suite_name(cfg.suite));
    r_.params = {
        {"K", std::int64_t{cfg.K}},
        {"M", std::int64_t{p.grid.M}},
        {"gamma", p.gamma},
        {"s", p.s},
        {"N", p.split_cutoff},
        {"dt", p.dt},
        {"T", T},
        {"integrator", std::string(p.integrator == Integrator::ExponentialRK4 ? "etdrk4" : "ifrk4")},
        {"forcing", std::string(std::find_if(kRecipes.begin(), kRecipes.end(), [&](const auto& e) {
                                  return e.first == cfg.forcing.kind;
                                })->second)},
        {"members", std::int64_t{cfg.members}},
        {"seed", static_cast<std::int64_t>(cfg.seed)},
    };
  }

  double threshold(const std::string& key) {
    const double v = cfg_.threshold(key);
    r_.thresholds.emplace_back(key, v);
    return v;
  }
  void measure(const std::string& key, double v) { r_.measurements.emplace_back(key, v); }
  void verdict(const std::string& key, bool ok) { r_.verdicts.emplace_back(key, ok); }
  void trace(TrajectoryRecord t) { r_.trace = std::move(t); }
  SuiteReport take() { return std::move(r_); }

 private:
  const RunConfig& cfg_;
  SuiteReport r_;
};

std::string indexed(std::string_view base, std::size_t i) { return std::string(base) + "_" + std::to_string(i); }

}  // namespace

std::string_view suite_name(Suite s) {
  for (const auto& [suite, name] : kSuites)
    if (suite == s) return name;
  return "unknown";
}

SpectralField DataRecipe::build(const GridSpec& grid, double s, std::uint64_t seed) const {
  switch (kind) {
    case RecipeKind::None:
      return SpectralField(grid);
    case RecipeKind::SingleMode:
      return normalized(single_mode(grid, mode, 1.0, phase), s, radius);
    case RecipeKind::RoughPowerLaw:
      return normalized(rough_power_law(grid, exponent, seed), s, radius);
    case RecipeKind::RandomBand:
      return normalized(random_band(grid, lo, hi, seed), s, radius);
  }
  return SpectralField(grid);
}

double RunConfig::horizon() const {
  if (T) return *T;
  return gamma > 0.0 ? 10.0 / gamma : 10.0;
}

double RunConfig::threshold(std::string_view key) const {
  for (const auto& [k, v] : thresholds)
    if (k == key) return v;
  for (const auto& [k, v] : default_thresholds(suite))
    if (k == key) return v;
  throw ConfigError("no threshold named '" + std::string(key) + "' for this suite");
}

std::vector<std::pair<std::string, double>> default_thresholds(Suite suite) {
  switch (suite) {
    case Suite::Simulate:
      return {{"l2_drift", 1e-8}, {"hamiltonian_drift", 1e-6}};
    case Suite::Split:
      return {{"split_error_per_time", 1e-9}};
    case Suite::Energy:
      return {{"residual_order", 1.8}};
    case Suite::Absorbing:
      return {{"tail_spread", 0.1}, {"control_tail", 1e-4}};
    case Suite::Decay:
      return {{"slope_fraction", 0.5}, {"final_ratio", 1e-3}};
    case Suite::Smoothing:
      return {{"tail_spread", 0.2}};
    case Suite::Omega:
      return {{"attractor_thickness", 0.1}, {"increment_r2", 0.9}};
    case Suite::Xsb:
      return {{"plancherel", 1e-10}};
  }
  return {};
}

RunConfig parse_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require(doc.is_object(), "<root>", "must be a JSON object");
  check_keys(doc, "", {"suite", "K", "gamma", "s", "N", "dt", "dt_cap", "T", "integrator",
                       "stride", "forcing", "initial", "members", "radii", "cutoffs",
                       "energy_order", "probes", "etas", "b", "snapshots", "thresholds",
                       "out_dir", "seed"});
  RunConfig cfg;
  require(doc.contains("suite"), "suite", "is required");
  require(doc["suite"].is_string(), "suite", "must be a string");
  {
    const auto name = doc["suite"].get<std::string>();
    const auto it = std::find_if(kSuites.begin(), kSuites.end(),
                                 [&](const auto& e) { return e.second == name; });
    require(it != kSuites.end(), "suite",
            "must be one of simulate, split, energy, absorbing, decay, smoothing, omega, xsb");
    cfg.suite = it->first;
  }
  if (doc.contains("K")) cfg.K = get_int(doc["K"], "K");
  if (doc.contains("gamma")) cfg.gamma = get_number(doc["gamma"], "gamma");
  if (doc.contains("s")) cfg.s = get_number(doc["s"], "s");
  if (doc.contains("N")) cfg.N = get_number(doc["N"], "N");
  if (doc.contains("dt")) cfg.dt = get_number(doc["dt"], "dt");
  if (doc.contains("dt_cap")) cfg.dt_cap = get_number(doc["dt_cap"], "dt_cap");
  if (doc.contains("T")) cfg.T = get_number(doc["T"], "T");
  if (doc.contains("integrator")) {
    require(doc["integrator"].is_string(), "integrator", "must be a string");
    const auto name = doc["integrator"].get<std::string>();
    require(name == "etdrk4" || name == "ifrk4", "integrator", "must be etdrk4 or ifrk4");
    cfg.integrator = name == "etdrk4" ? Integrator::ExponentialRK4 : Integrator::IntegratingFactorRK4;
  }
  if (doc.contains("stride")) cfg.stride = get_int(doc["stride"], "stride");
  if (doc.contains("forcing")) cfg.forcing = parse_recipe(doc["forcing"], "forcing", cfg.forcing);
  if (doc.contains("initial")) cfg.initial = parse_recipe(doc["initial"], "initial", cfg.initial);
  if (doc.contains("radii")) {
    cfg.radii = get_numbers(doc["radii"], "radii");
    cfg.members = static_cast<int>(cfg.radii.size());
  }
  if (doc.contains("members")) {
    cfg.members = get_int(doc["members"], "members");
    require(cfg.radii.empty() || cfg.members == static_cast<int>(cfg.radii.size()), "members",
            "must equal the length of radii");
  }
  if (doc.contains("cutoffs")) cfg.cutoffs = get_numbers(doc["cutoffs"], "cutoffs");
  if (doc.contains("energy_order")) cfg.energy_order = get_int(doc["energy_order"], "energy_order");
  if (doc.contains("probes")) cfg.probes = get_numbers(doc["probes"], "probes");
  if (doc.contains("etas")) cfg.etas = get_numbers(doc["etas"], "etas");
  if (doc.contains("b")) cfg.b = get_number(doc["b"], "b");
  if (doc.contains("snapshots")) cfg.snapshots = get_int(doc["snapshots"], "snapshots");
  if (doc.contains("thresholds")) {
    const auto& t = doc["thresholds"];
    require(t.is_object(), "thresholds", "must be an object");
    const auto defaults = default_thresholds(cfg.suite);
    for (const auto& [key, value] : t.items()) {
      const bool known = std::any_of(defaults.begin(), defaults.end(),
                                     [&](const auto& d) { return d.first == key; });
      require(known, "thresholds." + key, "unknown threshold for this suite");
      cfg.thresholds.emplace_back(key, get_number(value, "thresholds." + key));
    }
  }
  if (doc.contains("out_dir")) {
    require(doc["out_dir"].is_string(), "out_dir", "must be a string");
    cfg.out_dir = doc["out_dir"].get<std::string>();
  }
  if (doc.contains("seed")) {
    require(doc["seed"].is_number_unsigned(), "seed", "must be an unsigned integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  validate(cfg);
  return cfg;
}

void validate(const RunConfig& cfg) {
  require(cfg.K >= 2 && cfg.K <= 4096, "K", "must be an integer in [2, 4096]");
  require(std::isfinite(cfg.gamma) && cfg.gamma >= 0.0, "gamma", "must be >= 0");
  if (cfg.suite == Suite::Decay) require(cfg.gamma > 0.0, "gamma", "must be > 0 for the decay suite");
  require(cfg.s >= -0.75 && cfg.s <= 3.0, "s", "must lie in [-0.75, 3]");
  if (uses_imethod(cfg)) require(cfg.s < 0.0, "s", "must be < 0 when modified energies are evaluated");
  require(cfg.N > 0.0 && std::isfinite(cfg.N), "N", "must be > 0");
  if (cfg.dt) require(*cfg.dt > 0.0, "dt", "must be > 0");
  require(cfg.dt_cap > 0.0, "dt_cap", "must be > 0");
  if (cfg.T) require(*cfg.T > 0.0, "T", "must be > 0");
  require(cfg.stride >= 1, "stride", "must be >= 1");
  validate_recipe(cfg.forcing, "forcing", cfg.K);
  validate_recipe(cfg.initial, "initial", cfg.K);
  require(cfg.members >= 1, "members", "must be >= 1");
  for (double r : cfg.radii) require(r > 0.0, "radii", "entries must be > 0");
  require(!cfg.cutoffs.empty(), "cutoffs", "must not be empty");
  for (double n : cfg.cutoffs) require(n > 0.0, "cutoffs", "entries must be > 0");
  require(cfg.energy_order == 0 || (cfg.energy_order >= 2 && cfg.energy_order <= 4), "energy_order",
          "must be 0, 2, 3 or 4");
  const double T = cfg.horizon();
  for (double t : cfg.probes) require(t >= 0.5 * T && t <= T, "probes", "entries must lie in [T/2, T]");
  for (double e : cfg.etas) require(e > 0.0, "etas", "entries must be > 0");
  require(cfg.b >= 0.0 && cfg.b <= 0.5, "b", "must lie in [0, 1/2]");
  require(cfg.snapshots >= 8, "snapshots", "must be >= 8");
  if (cfg.suite == Suite::Decay)
    require(cfg.N < cfg.K, "N", "must be below K so that Q_N u0 can be nonzero");
}

std::vector<SpectralField> build_ensemble(const RunConfig& cfg) {
  const auto grid = GridSpec::for_band(cfg.K);
  std::vector<SpectralField> out;
  for (int i = 0; i < cfg.members; ++i) {
    DataRecipe r = cfg.initial;
    if (!cfg.radii.empty()) r.radius = cfg.radii[static_cast<std::size_t>(i)];
    out.push_back(r.build(grid, cfg.s, cfg.seed + static_cast<std::uint64_t>(i)));
  }
  return out;
}

KdvParams build_params(const RunConfig& cfg, const std::vector<SpectralField>& ensemble) {
  const auto grid = GridSpec::for_band(cfg.K);
  KdvParams p;
  p.grid = grid;
  p.gamma = cfg.gamma;
  p.s = cfg.s;
  p.split_cutoff = cfg.N;
  p.integrator = cfg.integrator;
  p.forcing = cfg.forcing.build(grid, cfg.s, cfg.seed + kForcingSeedOffset);
  if (cfg.dt) {
    p.dt = *cfg.dt;
  } else {
    p.dt = cfg.dt_cap;
    for (const auto& u : ensemble) p.dt = std::min(p.dt, stable_dt(u, cfg.dt_cap));
  }
  p.validate();
  return p;
}

SuiteReport run_suite(const RunConfig& cfg) {
  validate(cfg);
  const auto ensemble = build_ensemble(cfg);
  const KdvParams p = build_params(cfg, ensemble);
  const double T = cfg.horizon();
  const bool unforced = p.forcing == SpectralField(p.grid);
  const SpectralField& u0 = ensemble.front();
  ReportBuilder out(cfg, p, T);
  const RecordOptions rec{cfg.stride, cfg.energy_order};

  switch (cfg.suite) {
    case Suite::Simulate: {
      SolverState end;
      out.trace(simulate(u0, p, T, rec, &end));
      const double l2_0 = sobolev_norm(u0, 0.0);
      const double l2_drift = l2_0 > 0.0 ? std::abs(sobolev_norm(end.u, 0.0) - l2_0) / l2_0 : 0.0;
      const double h0 = hamiltonian(u0);
      const double h_drift = h0 != 0.0 ? std::abs(hamiltonian(end.u) - h0) / std::abs(h0) : 0.0;
      out.measure("l2_initial", l2_0);
      out.measure("l2_final", sobolev_norm(end.u, 0.0));
      out.measure("hs_final", sobolev_norm(end.u, p.s));
      out.measure("l2_drift", l2_drift);
      out.measure("hamiltonian_drift", h_drift);
      out.measure("zero_mode_final", end.u.mean());
      if (p.gamma == 0.0 && unforced) {
        out.verdict("l2_conserved", l2_drift <= out.threshold("l2_drift"));
        out.verdict("hamiltonian_conserved", h_drift <= out.threshold("hamiltonian_drift"));
      }
      out.verdict("zero_mode_preserved", std::abs(end.u.mean()) <= 1e-10);
      break;
    }
    case Suite::Split: {
      const KdvStepper stepper(p);
      const int steps = std::max(1, static_cast<int>(std::lround(T / p.dt)));
      SolverState full{u0, 0.0};
      SplitState split = init_split(u0, p);
      double worst = 0.0;
      for (int n = 1; n <= steps; ++n) {
        full = stepper.step(full);
        split = stepper.step(split);
        if (n % cfg.stride == 0 || n == steps)
          worst = std::max(worst, sobolev_norm(split.u() - full.u, 0.0) / full.t);
      }
      out.trace(simulate_split(u0, p, T, rec));
      out.measure("split_error_per_time", worst);
      out.verdict("split_consistent", worst <= out.threshold("split_error_per_time"));
      break;
    }
    case Suite::Energy: {
      const IMultiplier im(cfg.N, cfg.s);
      const auto id = run_energy_identity(u0, p, im, T);
      for (std::size_t i = 0; i < id.dts.size(); ++i) {
        out.measure(indexed("dt", i), id.dts[i]);
        out.measure(indexed("residual", i), id.residuals[i]);
      }
      out.measure("residual_order", id.order);
      out.verdict("identity_converges", id.order >= out.threshold("residual_order"));
      if (p.gamma == 0.0 && unforced) {
        const auto rows = energy_drift(u0, p, T, cfg.cutoffs);
        bool decreasing = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          out.measure(indexed("drift_ratio_N", i), rows[i].cutoff);
          out.measure(indexed("drift_ratio", i), rows[i].ratio);
          if (i > 0) decreasing = decreasing && rows[i].ratio < rows[i - 1].ratio;
        }
        out.verdict("drift_ratio_decreasing", decreasing);
      }
      out.trace(simulate(u0, p, T, {cfg.stride, std::max(cfg.energy_order, 2)}));
      break;
    }
    case Suite::Absorbing: {
      const auto r = run_absorbing_ball(ensemble, p, T, 0.5, cfg.stride);
      for (std::size_t i = 0; i < r.tail_sup.size(); ++i) {
        out.measure(indexed("initial_radius", i), r.initial_radius[i]);
        out.measure(indexed("tail_sup", i), r.tail_sup[i]);
        out.measure(indexed("entry_time", i), r.entry_time[i]);
      }
      out.measure("ball_radius", r.ball_radius);
      out.measure("entry_fit_slope", r.entry_fit.slope);
      out.measure("entry_fit_r2", r.entry_fit.r2);
      if (unforced) {
        out.verdict("control_decays", r.max_tail_sup < out.threshold("control_tail"));
      } else {
        const double spread = relative_spread(r.tail_sup);
        out.measure("tail_spread", spread);
        out.verdict("tail_sups_agree", spread <= out.threshold("tail_spread"));
      }
      out.trace(r.traces.front());
      break;
    }
    case Suite::Decay: {
      const double frac = out.threshold("slope_fraction");
      const double final_ratio = out.threshold("final_ratio");
      bool slopes_ok = true, final_ok = true;
      for (std::size_t i = 0; i < ensemble.size(); ++i) {
        auto r = run_decay(ensemble[i], p, T, cfg.stride);
        out.measure(indexed("slope", i), r.fit.slope);
        out.measure(indexed("fit_r2", i), r.fit.r2);
        out.measure(indexed("w0", i), r.w0);
        out.measure(indexed("wT", i), r.wT);
        out.measure(indexed("underflow", i), r.underflow ? 1.0 : 0.0);
        slopes_ok = slopes_ok && (r.underflow || r.fit.slope <= -frac * p.gamma);
        final_ok = final_ok && r.wT <= final_ratio * r.w0;
        if (i == 0) out.trace(std::move(r.trace));
      }
      out.verdict("decay_rate", slopes_ok);
      if (p.gamma * T >= 10.0) out.verdict("final_ratio", final_ok);
      break;
    }
    case Suite::Smoothing: {
      std::vector<double> tails;
      for (std::size_t i = 0; i < ensemble.size(); ++i) {
        auto r = run_smoothing(ensemble[i], p, T, cfg.stride);
        out.measure(indexed("initial_hs", i), r.initial_hs);
        out.measure(indexed("tail_sup_v", i), r.tail_sup_v);
        tails.push_back(r.tail_sup_v);
        if (i == 0) out.trace(std::move(r.trace));
      }
      const double spread = relative_spread(tails);
      out.measure("tail_spread", spread);
      out.verdict("tail_finite", std::all_of(tails.begin(), tails.end(), [](double x) { return std::isfinite(x); }));
      if (tails.size() >= 2) out.verdict("tail_independent_of_data", spread < out.threshold("tail_spread"));
      break;
    }
    case Suite::Omega: {
      std::vector<double> probes = cfg.probes;
      std::vector<double> etas = cfg.etas;
      if (etas.empty())
        for (int k : {5, 10, 15, 20}) etas.push_back(k * p.dt);
      const double max_eta = *std::max_element(etas.begin(), etas.end());
      if (probes.empty()) probes = {0.5 * T, 0.75 * T, T - max_eta};
      const auto r = run_omega_limit(ensemble, p, T, probes, etas);
      double initial = 0.0;
      for (const auto& u : ensemble) initial = std::max(initial, sobolev_norm(u, p.s));
      out.measure("compactness_bound", r.compactness_bound);
      out.measure("max_pairwise", r.max_pairwise);
      out.measure("absorbing_radius", r.absorbing_radius);
      for (std::size_t i = 0; i < r.etas.size(); ++i) {
        out.measure(indexed("eta", i), r.etas[i]);
        out.measure(indexed("increment", i), r.increments[i]);
      }
      out.measure("increment_fit_r2", r.increment_fit.r2);
      const double scale = unforced ? initial : r.absorbing_radius;
      out.verdict("late_states_close", r.max_pairwise <= out.threshold("attractor_thickness") * scale);
      if (r.etas.size() >= 3)
        out.verdict("equicontinuous", r.increment_fit.r2 >= out.threshold("increment_r2"));
      out.trace(simulate_split(u0, p, T, rec));
      break;
    }
    case Suite::Xsb: {
      const int steps = std::max(1, static_cast<int>(std::lround(T / p.dt)));
      const int skip = steps / 2;
      const int stride = std::max(1, (steps - skip) / cfg.snapshots);
      const auto snaps = collect_snapshots(u0, p, skip, stride, cfg.snapshots);
      const double t0 = skip * p.dt;
      const double est0 = xsb_norm_estimate(snaps, t0, stride * p.dt, p.s, 0.0);
      const double estb = xsb_norm_estimate(snaps, t0, stride * p.dt, p.s, cfg.b);
      const double avg = tapered_hs_average(snaps, p.s);
      const double plancherel = avg > 0.0 ? std::abs(est0 * est0 - avg) / avg : 0.0;
      out.measure("xsb_b0", est0);
      out.measure("xsb_b", estb);
      out.measure("b", cfg.b);
      out.measure("plancherel_error", plancherel);
      out.verdict("plancherel", plancherel <= out.threshold("plancherel"));
      out.verdict("monotone_in_b", estb >= est0);
      out.trace(simulate(u0, p, T, rec));
      break;
    }
  }
  return out.take();
}

DispatchResult dispatch(const RunConfig& cfg) {
  const std::filesystem::path dir = std::filesystem::path(cfg.out_dir) / std::string(suite_name(cfg.suite));
  const std::string suite(suite_name(cfg.suite));
  DispatchResult result;
  try {
    const SuiteReport report = run_suite(cfg);
    persist(report, dir);
    result.summary = summary_json(report);
    result.exit_code = report.all_passed() ? 0 : 1;
    return result;
  } catch (const DivergenceError& e) {
    result.summary = failure_json(suite, "divergence", e.what());
  } catch (const ConfigError& e) {
    result.summary = failure_json(suite, "config", e.what());
  } catch (const std::exception& e) {
    result.summary = failure_json(suite, "error", e.what());
  }
  result.exit_code = 2;
  try {
    write_text(dir / "failure.json", result.summary);
  } catch (const std::exception&) {
    // the failure document is still returned to the caller
  }
  return result;
}

}  // namespace kdv
