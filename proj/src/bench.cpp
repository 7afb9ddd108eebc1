#include "qent/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "qent/criteria.hpp"
#include "qent/diagnostics.hpp"
#include "qent/operators.hpp"

namespace qent {

Experiment parse_experiment(const std::string& name) {
  if (name == "bell") return Experiment::bell;
  if (name == "werner") return Experiment::werner;
  if (name == "region") return Experiment::region;
  if (name == "kerr") return Experiment::kerr;
  if (name == "scaling") return Experiment::scaling;
  fail(ErrorCode::invalid_argument, "unknown experiment '" + name + "'");
}

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::bell: return "bell";
    case Experiment::werner: return "werner";
    case Experiment::region: return "region";
    case Experiment::kerr: return "kerr";
    case Experiment::scaling: return "scaling";
  }
  return "?";
}

std::vector<double> GridSpec::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    v[static_cast<std::size_t>(i)] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  }
  return v;
}

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c)) {
    fail(ErrorCode::invalid_argument, "grid '" + text + "' is not start:stop:count");
  }
  try {
    std::size_t pos = 0;
    g.start = std::stod(a, &pos);
    if (pos != a.size()) throw std::invalid_argument(a);
    g.stop = std::stod(b, &pos);
    if (pos != b.size()) throw std::invalid_argument(b);
    g.count = std::stoi(c, &pos);
    if (pos != c.size()) throw std::invalid_argument(c);
  } catch (const std::exception&) {
    fail(ErrorCode::invalid_argument, "grid '" + text + "' is not start:stop:count");
  }
  return g;
}

SweepConfig default_config(Experiment e) {
  SweepConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::bell:
      break;
    case Experiment::werner:
      c.grids["p"] = {0.0, 1.0, 101};
      break;
    case Experiment::region:
      c.grids["p"] = {0.0, 1.0, 21};
      c.grids["r"] = {0.05, 1.5, 21};
      c.cutoff = 30;
      c.tail_tolerance = 1e-2;
      break;
    case Experiment::kerr:
      c.grids["t"] = {0.0, 2.0 * std::numbers::pi, 128};
      break;
    case Experiment::scaling:
      c.grids["t"] = {0.005, std::numbers::pi / 2.0, 160};
      c.grids["dgcz_t"] = {0.001, 1.0, 400};
      break;
  }
  return c;
}

namespace {

const GridSpec& grid(const SweepConfig& c, const std::string& name) {
  const auto it = c.grids.find(name);
  if (it == c.grids.end()) fail(ErrorCode::invalid_argument, "missing grid '" + name + "'");
  return it->second;
}

TruncationPolicy policy_of(const SweepConfig& c) { return {c.cutoff, c.tail_tolerance}; }

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

std::string fmt_opt(const std::optional<double>& x) { return x ? fmt_real(*x) : std::string("nan"); }

// Evaluates fn(i) for i in [0, n) on up to `threads` workers; results are
// stored by index. The lowest-index failure is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, int threads, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// Root of a sign change of f on [lo, hi], to width tol.
double bisect(const std::function<bool(double)>& positive_side, double lo, double hi, double tol) {
  const bool lo_side = positive_side(lo);
  if (positive_side(hi) == lo_side) fail(ErrorCode::numerical, "bisect: no sign change on the bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (positive_side(mid) == lo_side)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double golden_minimum(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

LocalOperator sigma_minus_a() { return on_a(pauli_lower()); }
LocalOperator sigma_minus_b() { return on_b(pauli_lower()); }
LocalOperator sigma_plus_b() { return on_b(pauli_raise()); }

}  // namespace

void validate(const SweepConfig& c) {
  for (const auto& [name, g] : c.grids) {
    if (g.count < 1) fail(ErrorCode::invalid_argument, "grid '" + name + "' must be nonempty");
    if (!std::isfinite(g.start) || !std::isfinite(g.stop)) {
      fail(ErrorCode::invalid_argument, "grid '" + name + "' has non-finite bounds");
    }
    if (g.count > 1 && !(g.stop > g.start)) {
      fail(ErrorCode::invalid_argument, "grid '" + name + "' must be strictly increasing");
    }
  }
  if (c.cutoff && *c.cutoff < 1) fail(ErrorCode::invalid_argument, "cutoff must be >= 1");
  if (!(c.tail_tolerance > 0.0 && c.tail_tolerance < 1.0)) {
    fail(ErrorCode::invalid_argument, "tail tolerance must lie in (0, 1)");
  }
  if (c.theta_points < 1) fail(ErrorCode::invalid_argument, "theta points must be >= 1");
  if (c.threads < 1) fail(ErrorCode::invalid_argument, "threads must be >= 1");

  auto require_grid = [&](const char* name, double lo, double hi) {
    const GridSpec& g = grid(c, name);
    if (g.start < lo || g.stop > hi) {
      fail(ErrorCode::invalid_argument, std::string("grid '") + name + "' must lie in [" + fmt_real(lo) + ", " +
                                            fmt_real(hi) + "]");
    }
  };
  const std::map<Experiment, std::set<std::string>> known{{Experiment::bell, {}},
                                                          {Experiment::werner, {"p"}},
                                                          {Experiment::region, {"p", "r"}},
                                                          {Experiment::kerr, {"t"}},
                                                          {Experiment::scaling, {"t", "dgcz_t"}}};
  for (const auto& entry : c.grids) {
    if (!known.at(c.experiment).count(entry.first)) {
      fail(ErrorCode::invalid_argument, "unknown grid '" + entry.first + "' for " + experiment_name(c.experiment));
    }
  }
  switch (c.experiment) {
    case Experiment::bell:
      break;
    case Experiment::werner:
      require_grid("p", 0.0, 1.0);
      if (c.werner_family != 1 && c.werner_family != 2) {
        fail(ErrorCode::invalid_argument, "werner family must be 1 or 2");
      }
      break;
    case Experiment::region:
      require_grid("p", 0.0, 1.0);
      require_grid("r", 0.0, INFINITY);
      break;
    case Experiment::kerr:
      require_grid("t", -INFINITY, INFINITY);
      if (!c.alpha || !c.beta) fail(ErrorCode::invalid_argument, "kerr requires --alpha and --beta");
      break;
    case Experiment::scaling:
      require_grid("t", 0.0, INFINITY);
      require_grid("dgcz_t", 0.0, INFINITY);
      if (c.alpha_list.size() < 2) fail(ErrorCode::invalid_argument, "scaling needs at least two alpha values");
      for (double a : c.alpha_list)
        if (!(a > 0.0)) fail(ErrorCode::invalid_argument, "alpha values must be positive");
      if (grid(c, "t").start <= 0.0 || grid(c, "dgcz_t").start <= 0.0) {
        fail(ErrorCode::invalid_argument, "scaling time grids must start after t = 0");
      }
      break;
  }
}

std::vector<BellRecord> run_bell_study() {
  std::vector<BellRecord> out;
  for (int which : {1, 2}) {
    const PureState psi = bell(which);
    BellRecord r;
    r.which = which;
    r.tw_minus_minus = witness_product(sigma_minus_a(), sigma_minus_b(), psi);
    r.tw_minus_plus = witness_product(sigma_minus_a(), sigma_plus_b(), psi);
    WitnessSpec spec{sigma_minus_a(), sigma_minus_a(), sigma_minus_b(), sigma_minus_b(),
                     {true, true, false, false}, WitnessVariant::product_form, std::nullopt};
    r.tw_general = evaluate_general(spec, psi).value;
    r.phase_value = witness_phase(sigma_minus_a(), sigma_minus_b(), psi).value;
    const HzResult hz = hz_test(sigma_minus_a(), sigma_minus_b(), psi);
    r.hz1 = hz.form1_margin;
    r.hz2 = hz.form2_margin;
    r.negativity = negativity(psi);
    r.entropy = entanglement_entropy(psi);
    out.push_back(r);
  }
  return out;
}

WernerStudy run_werner_study(int family, const std::vector<double>& p_grid) {
  if (family != 1 && family != 2) fail(ErrorCode::invalid_argument, "werner family must be 1 or 2");
  const LocalOperator a = sigma_minus_a();
  const LocalOperator b_tw = family == 2 ? sigma_minus_b() : sigma_plus_b();
  const LocalOperator b_hz = sigma_minus_b();

  WernerStudy study;
  study.family = family;
  for (double p : p_grid) {
    const MixedState rho = werner(family, p);
    WernerRecord r;
    r.p = p;
    r.tw_value = witness_product(a, b_tw, rho);
    const HzResult hz = hz_test(a, b_hz, rho);
    r.hz1 = hz.form1_margin;
    r.hz2 = hz.form2_margin;
    r.negativity = negativity(rho);
    r.verdict_tw = r.tw_value < -verdict_tolerance(number_product(a, b_tw, rho));
    r.verdict_hz = hz.entangled_1 || hz.entangled_2;
    study.records.push_back(r);
  }

  constexpr double kRootWidth = 1e-12;
  study.thresholds.tw = bisect([&](double p) { return witness_product(a, b_tw, werner(family, p)) > 0.0; }, 0.0,
                               1.0, kRootWidth);
  auto hz_fires = [&](double p) {
    const HzResult hz = hz_test(a, b_hz, werner(family, p));
    return std::max(hz.form1_margin, hz.form2_margin) > 0.0;
  };
  if (hz_fires(1.0) && !hz_fires(0.0)) study.thresholds.hz = bisect(hz_fires, 0.0, 1.0, kRootWidth);
  study.thresholds.ppt = bisect([&](double p) { return negativity(werner(family, p)) > 0.0; }, 0.0, 1.0, kRootWidth);
  return study;
}

std::vector<RegionRecord> run_region_sweep(const SweepConfig& config) {
  validate(config);
  const std::vector<double> ps = grid(config, "p").values();
  const std::vector<double> rs = grid(config, "r").values();
  const TruncationPolicy policy = policy_of(config);

  // Row-major over (r, p): p varies fastest.
  return parallel_map<RegionRecord>(ps.size() * rs.size(), config.threads, [&](std::size_t i) {
    const double r_val = rs[i / ps.size()];
    const double p_val = ps[i % ps.size()];
    const MixedState rho = squeezed_thermal(p_val, r_val, policy);
    const int cutoff = rho.truncation().cutoff_a;
    const LocalOperator a = on_a(boson_annihilation(cutoff));
    const LocalOperator b = on_b(boson_annihilation(cutoff));

    RegionRecord rec;
    rec.p = p_val;
    rec.r = r_val;
    rec.cutoff = cutoff;
    rec.discarded_weight = rho.truncation().discarded_weight;
    rec.tw_value = witness_product(a, b, rho);
    rec.tw_scale = number_product(a, b, rho);
    rec.verdict_tw = rec.tw_value < -verdict_tolerance(rec.tw_scale);

    rec.twe_value = estimated_witness(a, b, rho, EstimatorKind::meanfield).value;
    // Target: the squeezed component; noise: the thermal product.
    const TruncationPolicy fixed{cutoff, config.tail_tolerance};
    const PureState target = tmsv(r_val, fixed);
    const double x_target = number_product(a, b, target) - witness_product(a, b, target);  // <n_a n_b>
    const LocalMixedState th = thermal(r_val, fixed);
    const double n_th = (number_of(a.matrix) * th.rho).trace().real();
    const double x_noise = n_th * n_th;
    rec.twe_valid = meanfield_valid(p_val, x_target, x_noise);
    rec.verdict_twe = rec.twe_value < -verdict_tolerance(rec.tw_scale);

    const HzResult hz = hz_test(a, b, rho);
    rec.hz1 = hz.form1_margin;
    rec.hz2 = hz.form2_margin;
    rec.verdict_hz = hz.entangled_1 || hz.entangled_2;
    rec.negativity = negativity(rho);
    return rec;
  });
}

std::vector<KerrRecord> run_kerr_time_sweep(const SweepConfig& config) {
  validate(config);
  const std::vector<double> ts = grid(config, "t").values();
  const TruncationPolicy policy = policy_of(config);
  const double alpha = *config.alpha;
  const double beta = *config.beta;
  return parallel_map<KerrRecord>(ts.size(), config.threads, [&](std::size_t i) {
    const double t = ts[i];
    const PureState psi = cross_kerr_evolve(alpha, beta, t, policy);
    const KerrWitness tw = kerr_witness(psi, config.theta_points);
    const DgczResult dg = dgcz_crosskerr(psi, alpha, beta, t);
    KerrRecord r;
    r.t = t;
    r.tw_value = tw.value;
    r.theta = tw.theta;
    r.tw_scale = tw.s_term;
    r.verdict_tw = tw.entangled;
    r.dgcz_margin = dg.margin;
    r.dgcz_lhs = dg.lhs;
    r.tau = dg.tau;
    r.tau_prime = dg.tau_prime;
    r.verdict_dgcz = dg.entangled;
    r.entropy = entanglement_entropy(psi);
    r.cutoff_a = psi.truncation().cutoff_a;
    r.cutoff_b = psi.truncation().cutoff_b;
    r.discarded_weight = psi.truncation().discarded_weight;
    return r;
  });
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorCode::invalid_argument, "log_log_slope: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingStudy run_scaling_sweep(const SweepConfig& config) {
  validate(config);
  const std::vector<double> ts = grid(config, "t").values();
  const std::vector<double> dts = grid(config, "dgcz_t").values();
  const TruncationPolicy policy = policy_of(config);

  ScalingStudy study;
  study.records = parallel_map<ScalingRecord>(config.alpha_list.size(), config.threads, [&](std::size_t i) {
    const double alpha = config.alpha_list[i];
    auto tw_at = [&](double t) {
      return kerr_witness(cross_kerr_evolve(alpha, alpha, t, policy), config.theta_points).value;
    };
    auto dgcz_at = [&](double t) {
      return dgcz_crosskerr(cross_kerr_evolve(alpha, alpha, t, policy), alpha, alpha, t).margin;
    };

    ScalingRecord rec;
    rec.alpha = alpha;
    const PureState probe = cross_kerr_evolve(alpha, alpha, ts.front(), policy);
    rec.cutoff = probe.truncation().cutoff_a;
    rec.discarded_weight = probe.truncation().discarded_weight;

    std::vector<double> values(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) values[k] = tw_at(ts[k]);
    const std::size_t k = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    const double lo = ts[k == 0 ? 0 : k - 1];
    const double hi = ts[std::min(k + 1, ts.size() - 1)];
    rec.t_tw_min = hi > lo ? golden_minimum(tw_at, lo, hi, 1e-7) : ts[k];
    rec.tw_min_value = tw_at(rec.t_tw_min);
    if (values[k] < rec.tw_min_value) {
      rec.t_tw_min = ts[k];
      rec.tw_min_value = values[k];
    }

    double prev_t = dts.front();
    bool prev_negative = dgcz_at(prev_t) < 0.0;
    for (std::size_t j = 1; j < dts.size() && prev_negative; ++j) {
      const double t = dts[j];
      if (dgcz_at(t) >= 0.0) {
        rec.t_dgcz_zero = bisect([&](double s) { return dgcz_at(s) >= 0.0; }, prev_t, t, 1e-9);
        break;
      }
      prev_t = t;
    }
    return rec;
  });

  std::vector<double> xs, ys, dx, dy;
  for (const auto& r : study.records) {
    xs.push_back(r.alpha);
    ys.push_back(r.t_tw_min);
    if (r.t_dgcz_zero) {
      dx.push_back(r.alpha);
      dy.push_back(*r.t_dgcz_zero);
    }
  }
  study.tw_slope = log_log_slope(xs, ys);
  if (dx.size() >= 2) study.dgcz_slope = log_log_slope(dx, dy);
  return study;
}

std::string to_csv(const std::vector<BellRecord>& records) {
  std::string out = "state,tw_minus_minus,tw_minus_plus,tw_general,phase_value,hz1,hz2,negativity,entropy\n";
  for (const auto& r : records) {
    out += "bell" + std::to_string(r.which) + "," + fmt_real(r.tw_minus_minus) + "," + fmt_real(r.tw_minus_plus) +
           "," + fmt_real(r.tw_general) + "," + fmt_real(r.phase_value) + "," + fmt_real(r.hz1) + "," +
           fmt_real(r.hz2) + "," + fmt_real(r.negativity) + "," + fmt_real(r.entropy) + "\n";
  }
  return out;
}

std::string to_csv(const std::vector<WernerRecord>& records) {
  std::string out = "p,tw_value,hz1,hz2,negativity,verdict_tw,verdict_hz\n";
  for (const auto& r : records) {
    out += fmt_real(r.p) + "," + fmt_real(r.tw_value) + "," + fmt_real(r.hz1) + "," + fmt_real(r.hz2) + "," +
           fmt_real(r.negativity) + "," + (r.verdict_tw ? "1" : "0") + "," + (r.verdict_hz ? "1" : "0") + "\n";
  }
  return out;
}

std::string to_csv(const std::vector<RegionRecord>& records) {
  std::string out =
      "p,r,tw_value,tw_scale,twe_value,twe_valid,hz1,hz2,negativity,verdict_tw,verdict_twe,verdict_hz,cutoff,"
      "discarded_weight\n";
  for (const auto& r : records) {
    out += fmt_real(r.p) + "," + fmt_real(r.r) + "," + fmt_real(r.tw_value) + "," + fmt_real(r.tw_scale) + "," +
           fmt_real(r.twe_value) + "," + (r.twe_valid ? "1" : "0") + "," + fmt_real(r.hz1) + "," +
           fmt_real(r.hz2) + "," + fmt_real(r.negativity) + "," + (r.verdict_tw ? "1" : "0") + "," +
           (r.verdict_twe ? "1" : "0") + "," + (r.verdict_hz ? "1" : "0") + "," + std::to_string(r.cutoff) + "," +
           fmt_real(r.discarded_weight) + "\n";
  }
  return out;
}

std::string to_csv(const std::vector<KerrRecord>& records) {
  std::string out =
      "t,tw_value,theta,tw_scale,dgcz_margin,dgcz_lhs,tau,tau_prime,entropy,verdict_tw,verdict_dgcz,cutoff_a,"
      "cutoff_b,discarded_weight\n";
  for (const auto& r : records) {
    out += fmt_real(r.t) + "," + fmt_real(r.tw_value) + "," + fmt_real(r.theta) + "," + fmt_real(r.tw_scale) + "," +
           fmt_real(r.dgcz_margin) + "," + fmt_real(r.dgcz_lhs) + "," + fmt_real(r.tau) + "," +
           fmt_real(r.tau_prime) + "," + fmt_real(r.entropy) + "," + (r.verdict_tw ? "1" : "0") + "," +
           (r.verdict_dgcz ? "1" : "0") + "," + std::to_string(r.cutoff_a) + "," + std::to_string(r.cutoff_b) +
           "," + fmt_real(r.discarded_weight) + "\n";
  }
  return out;
}

std::string to_csv(const std::vector<ScalingRecord>& records) {
  std::string out = "alpha,t_tw_min,tw_min_value,t_dgcz_zero,cutoff,discarded_weight\n";
  for (const auto& r : records) {
    out += fmt_real(r.alpha) + "," + fmt_real(r.t_tw_min) + "," + fmt_real(r.tw_min_value) + "," +
           fmt_opt(r.t_dgcz_zero) + "," + std::to_string(r.cutoff) + "," + fmt_real(r.discarded_weight) + "\n";
  }
  return out;
}

SweepOutput run_sweep(const SweepConfig& config) {
  validate(config);
  SweepOutput out;
  switch (config.experiment) {
    case Experiment::bell:
      out.csv = to_csv(run_bell_study());
      break;
    case Experiment::werner: {
      const WernerStudy s = run_werner_study(config.werner_family, grid(config, "p").values());
      out.csv = to_csv(s.records);
      out.summary = "family=" + std::to_string(s.family) + "\ntw_threshold=" + fmt_real(s.thresholds.tw) +
                    "\nhz_threshold=" + fmt_opt(s.thresholds.hz) + "\nppt_threshold=" + fmt_real(s.thresholds.ppt) +
                    "\n";
      break;
    }
    case Experiment::region:
      out.csv = to_csv(run_region_sweep(config));
      break;
    case Experiment::kerr:
      out.csv = to_csv(run_kerr_time_sweep(config));
      break;
    case Experiment::scaling: {
      const ScalingStudy s = run_scaling_sweep(config);
      out.csv = to_csv(s.records);
      out.summary = "tw_slope=" + fmt_real(s.tw_slope) + "\ndgcz_slope=" + fmt_opt(s.dgcz_slope) + "\n";
      break;
    }
  }
  return out;
}

}  // namespace qent
