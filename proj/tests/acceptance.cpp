// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "oracle.hpp"
#include "qent/bench.hpp"
#include "qent/criteria.hpp"
#include "qent/diagnostics.hpp"
#include "qent/selftest.hpp"

using namespace qent;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < limit_seconds;
  const bool pass = out.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s criterion %d (%s): %s; %.2f s of %.0f s%s\n", pass ? "PASS" : "FAIL", id, name, out.detail.c_str(),
              secs, limit_seconds, in_time ? "" : " [too slow]");
  std::fflush(stdout);
}

// Dense 4x4 reference for the qubit witnesses.
double oracle_product(const oracle::V& psi) {
  return oracle::witness_product(oracle::lower(), oracle::lower(), oracle::projector(psi));
}

double oracle_phase(const oracle::V& psi) {
  const oracle::M a = oracle::kron(oracle::lower(), oracle::eye(2));
  const oracle::M b = oracle::kron(oracle::eye(2), oracle::lower());
  const oracle::M rho = oracle::projector(psi);
  const double s = 2.0 * oracle::ev(a.adjoint() * a * b.adjoint() * b, rho);
  const oracle::M x = a.adjoint() * b;
  return s - 2.0 * std::abs((x * rho * x * rho).trace());
}

}  // namespace

int main() {
  const std::vector<double> p101 = parse_grid("0:1:101").values();

  criterion(1, "Werner TW threshold", 1.0, [&] {
    const WernerStudy w = run_werner_study(2, p101);
    const double closed = 0.25 - (5 * 0.36 + 2 * 0.6 + 1) / 16;
    const double err = std::abs(w.thresholds.tw - 0.6);
    return Outcome{err <= 1e-9 && std::abs(closed) < 1e-15,
                   "threshold " + fmt("%.12f", w.thresholds.tw) + ", |err| " + fmt("%.1e", err)};
  });

  criterion(2, "Werner HZ threshold", 1.0, [&] {
    const WernerStudy w = run_werner_study(1, p101);
    if (!w.thresholds.hz) return Outcome{false, "HZ never fires"};
    const double err = std::abs(*w.thresholds.hz - (std::sqrt(5.0) - 1.0) / 2.0);
    return Outcome{err <= 1e-9, "threshold " + fmt("%.12f", *w.thresholds.hz) + ", |err| " + fmt("%.1e", err)};
  });

  criterion(3, "Werner PPT threshold", 1.0, [&] {
    const WernerStudy w = run_werner_study(1, p101);
    const double err = std::abs(w.thresholds.ppt - 1.0 / 3.0);
    return Outcome{err <= 1e-6, "threshold " + fmt("%.12f", w.thresholds.ppt) + ", |err| " + fmt("%.1e", err)};
  });

  criterion(4, "Bell detection", 10.0, [&] {
    const LocalOperator sa = on_a(pauli_lower()), sb = on_b(pauli_lower());
    const PureState b1 = bell(1), b2 = bell(2);
    const double tw = witness_product(sa, sb, b2);
    const double ph = witness_phase(sa, sb, b1).value;
    const double e1 = std::abs(tw - oracle_product(b2.amplitudes()));
    const double e2 = std::abs(ph - oracle_phase(b1.amplitudes()));
    const bool ok = e1 <= 1e-12 && e2 <= 1e-12 && std::abs(tw + 0.25) <= 1e-12 && std::abs(ph + 0.5) <= 1e-12;
    return Outcome{ok, "B2 product " + fmt("%.15f", tw) + ", B1 phase " + fmt("%.15f", ph)};
  });

  criterion(5, "TMSV closed form", 5.0, [&] {
    double worst = 0.0;
    for (const double r : {0.25, 0.5, 1.0}) {
      const PureState psi = tmsv(r);
      const int N = psi.truncation().cutoff_a;
      const double lam2 = std::tanh(r) * std::tanh(r);
      const double want = -lam2 / ((1 - lam2) * (1 - lam2));
      const double got = witness_product(on_a(boson_annihilation(N)), on_b(boson_annihilation(N)), psi);
      worst = std::max(worst, std::abs(got - want));
    }
    return Outcome{worst <= 1e-6, "max |err| " + fmt("%.1e", worst)};
  });

  criterion(6, "region inclusion", 120.0, [&] {
    const std::vector<RegionRecord> recs = run_region_sweep(default_config(Experiment::region));
    int hz_only = 0, twe_only = 0, ppt_missing = 0, hz_count = 0, twe_count = 0, tw_count = 0;
    for (const RegionRecord& r : recs) {
      hz_count += r.verdict_hz;
      tw_count += r.verdict_tw;
      const bool twe = r.twe_valid && r.verdict_twe;
      twe_count += twe;
      if (r.verdict_hz && !r.verdict_tw) ++hz_only;
      if (twe && !r.verdict_tw) ++twe_only;
      if (r.p >= 0.05 - 1e-12 && !(r.negativity > 0.0)) ++ppt_missing;
    }
    const bool ok = recs.size() == 441 && hz_only == 0 && twe_only == 0 && ppt_missing == 0;
    return Outcome{ok, std::to_string(recs.size()) + " points; TW " + std::to_string(tw_count) + ", HZ " +
                           std::to_string(hz_count) + ", valid TWE " + std::to_string(twe_count) +
                           "; violations HZ " + std::to_string(hz_only) + ", TWE " + std::to_string(twe_only) +
                           ", negativity " + std::to_string(ppt_missing)};
  });

  criterion(7, "cross-Kerr structure", 120.0, [&] {
    const double alpha = 3.0, beta = 3.0, two_pi = 2.0 * std::numbers::pi;
    std::string detail;
    bool ok = true;
    auto note = [&](bool cond, const std::string& what) {
      if (!cond) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + what;
      }
    };
    for (const double t : {0.0, two_pi}) {
      const PureState psi = cross_kerr_evolve(alpha, beta, t);
      const KerrWitness k = kerr_witness(psi);
      note(std::abs(k.value) <= 1e-8 * std::abs(k.s_term), "TW at t=" + fmt("%.4f", t) + " is " + fmt("%.3e", k.value));
      const double s = entanglement_entropy(psi);
      note(s <= 1e-9, "entropy at t=" + fmt("%.4f", t) + " is " + fmt("%.3e", s));
    }
    for (int k = 3; k <= 19; ++k) {
      const double t = 0.05 * k;
      const KerrWitness w = kerr_witness(cross_kerr_evolve(alpha, beta, t));
      note(w.entangled, "TW not negative at t=" + fmt("%.2f", t) + " (" + fmt("%.3e", w.value) + ")");
    }
    const PureState at_pi = cross_kerr_evolve(alpha, beta, std::numbers::pi);
    const KerrWitness w_pi = kerr_witness(at_pi);
    note(w_pi.entangled, "TW not negative at t=pi (" + fmt("%.3e", w_pi.value) + ", tolerance " +
                             fmt("%.1e", verdict_tolerance(w_pi.s_term)) + ")");
    const double s_pi = entanglement_entropy(at_pi);
    note(s_pi > 0.1, "entropy at t=pi is " + fmt("%.3f", s_pi));
    const double m_early = dgcz_crosskerr(cross_kerr_evolve(alpha, beta, 0.01), alpha, beta, 0.01).margin;
    const double m_late = dgcz_crosskerr(cross_kerr_evolve(alpha, beta, 1.0), alpha, beta, 1.0).margin;
    note(m_early < 0.0, "DGCZ margin at t=0.01 is " + fmt("%.3e", m_early));
    note(m_late >= 0.0, "DGCZ margin at t=1 is " + fmt("%.3e", m_late));
    if (ok) detail = "DGCZ margins " + fmt("%.3f", m_early) + " / " + fmt("%.3f", m_late) + ", entropy(pi) " +
                     fmt("%.3f", s_pi);
    return Outcome{ok, detail};
  });

  criterion(8, "detection-time scaling", 600.0, [&] {
    const ScalingStudy s = run_scaling_sweep(default_config(Experiment::scaling));
    const bool tw_ok = std::abs(s.tw_slope + 1.0) <= 0.15;
    const bool dg_ok = s.dgcz_slope && *s.dgcz_slope <= -1.8;
    std::string halves;
    for (std::size_t i = 0; i < s.records.size(); ++i)
      for (std::size_t j = 0; j < s.records.size(); ++j)
        if (s.records[j].alpha == 2.0 * s.records[i].alpha) {
          halves += ", t(" + fmt("%g", s.records[j].alpha) + ")/t(" + fmt("%g", s.records[i].alpha) + ") " +
                    fmt("%.3f", s.records[j].t_tw_min / s.records[i].t_tw_min);
        }
    return Outcome{tw_ok && dg_ok, "TW slope " + fmt("%.4f", s.tw_slope) + ", DGCZ slope " +
                                       (s.dgcz_slope ? fmt("%.4f", *s.dgcz_slope) : std::string("none")) + halves};
  });

  criterion(9, "property suites", 60.0, [&] {
    const SelftestReport r = run_selftest(20240607);
    std::string detail;
    for (const PropertyCheck& c : r.checks) {
      if (!detail.empty()) detail += ", ";
      detail += c.name + " " + std::to_string(c.trials - c.failures) + "/" + std::to_string(c.trials);
    }
    return Outcome{r.passed(), detail};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
