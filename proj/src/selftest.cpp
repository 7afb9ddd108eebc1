#include "qent/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "qent/criteria.hpp"
#include "qent/diagnostics.hpp"

namespace qent {

namespace {

using Rng = std::mt19937_64;

ComplexMatrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

ComplexMatrix random_density(Index d, Rng& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return (rho + rho.adjoint()) / 2.0;
}

ComplexVector random_unit(Index d, Rng& rng) {
  ComplexVector v = ginibre(d, 1, rng);
  return v / v.norm();
}

ComplexMatrix random_hermitian(Index d, Rng& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  return (g + g.adjoint()) / 2.0;
}

int uniform_int(int lo, int hi, Rng& rng) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform(double lo, double hi, Rng& rng) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

MixedState random_mixed(Rng& rng) {
  const Index da = uniform_int(2, 4, rng);
  const Index db = uniform_int(2, 4, rng);
  return MixedState(random_density(da * db, rng), BipartiteSpace(da, db));
}

MixedState random_separable(Rng& rng) {
  const Index da = uniform_int(2, 4, rng);
  const Index db = uniform_int(2, 4, rng);
  const int terms = uniform_int(1, 4, rng);
  std::vector<double> w(static_cast<std::size_t>(terms));
  double total = 0.0;
  for (double& x : w) total += (x = uniform(0.05, 1.0, rng));
  ComplexMatrix rho = ComplexMatrix::Zero(da * db, da * db);
  for (const double x : w) rho += (x / total) * kron(random_density(da, rng), random_density(db, rng));
  return MixedState((rho + rho.adjoint()) / 2.0, BipartiteSpace(da, db));
}

struct Tally {
  PropertyCheck check;

  Tally(std::string name) { check.name = std::move(name); }

  // `violation` > 0 counts as a failure.
  void record(double violation) {
    ++check.trials;
    if (!(violation <= 0.0)) {
      ++check.failures;
      check.worst = std::max(check.worst, std::isnan(violation) ? INFINITY : violation);
    }
  }
};

WitnessSpec random_spec(const BipartiteSpace& space, Rng& rng) {
  auto flag = [&] { return uniform_int(0, 1, rng) == 1; };
  return WitnessSpec{{ginibre(space.dim_a(), space.dim_a(), rng), Side::a},
                     {ginibre(space.dim_a(), space.dim_a(), rng), Side::a},
                     {ginibre(space.dim_b(), space.dim_b(), rng), Side::b},
                     {ginibre(space.dim_b(), space.dim_b(), rng), Side::b},
                     {flag(), flag(), flag(), flag()},
                     WitnessVariant::product_form,
                     std::nullopt};
}

}  // namespace

bool SelftestReport::passed() const {
  for (const PropertyCheck& c : checks)
    if (c.failures) return false;
  return !checks.empty();
}

std::string SelftestReport::to_text() const {
  std::string out;
  char line[256];
  for (const PropertyCheck& c : checks) {
    std::snprintf(line, sizeof line, "%s %s trials=%d failures=%d worst=%.3e\n", c.failures ? "FAIL" : "PASS",
                  c.name.c_str(), c.trials, c.failures, c.worst);
    out += line;
  }
  return out;
}

SelftestReport run_selftest(std::uint64_t seed) {
  Rng rng(seed);
  SelftestReport report;

  {
    Tally sound("separable_states_pass_witness");
    Tally conj("trace_brackets_conjugate");
    for (int trial = 0; trial < 500; ++trial) {
      const MixedState rho = random_separable(rng);
      WitnessSpec spec = random_spec(rho.space(), rng);
      for (const WitnessVariant v : {WitnessVariant::product_form, WitnessVariant::joint_form}) {
        spec.variant = v;
        const WitnessResult r = evaluate_general(spec, rho);
        sound.record(-r.value - 1e-9 * std::max(1.0, std::abs(r.s_term)));
        const TraceBrackets tb = trace_brackets(spec, rho);
        conj.record(std::abs(tb.second - std::conj(tb.first)) - 1e-10 * std::max(1.0, std::abs(tb.first)));
      }
    }
    report.checks.push_back(sound.check);
    report.checks.push_back(conj.check);
  }

  {
    Tally bound("spectral_estimator_lower_bound");
    for (int trial = 0; trial < 200; ++trial) {
      const MixedState rho = random_mixed(rng);
      const Index d = rho.space().dim_total();
      const ComplexMatrix g = ginibre(d, d, rng);
      const ComplexMatrix x = (g * g.adjoint() + (g * g.adjoint()).adjoint()) / 2.0;
      const double exact = (x * rho.rho() * rho.rho()).trace().real();
      bound.record(estimator_spectral(x, rho).value - exact - 1e-9 * std::max(1.0, std::abs(exact)));
    }
    report.checks.push_back(bound.check);

    Tally equal("spectral_estimator_exact_cases");
    for (int trial = 0; trial < 20; ++trial) {
      const Index da = uniform_int(2, 4, rng);
      const Index db = uniform_int(2, 4, rng);
      const Index d = da * db;
      const BipartiteSpace space(da, db);
      const ComplexMatrix g = ginibre(d, d, rng);
      const ComplexMatrix x = (g * g.adjoint() + (g * g.adjoint()).adjoint()) / 2.0;
      const MixedState flat(ComplexMatrix::Identity(d, d) / static_cast<double>(d), space);
      const double flat_exact = x.trace().real() / static_cast<double>(d * d);
      equal.record(std::abs(estimator_spectral(x, flat).value - flat_exact) - 1e-9 * std::max(1.0, flat_exact));
      const HermitianEigensystem eig = eigh(x);
      const ComplexVector v = eig.eigenvectors.col(uniform_int(0, static_cast<int>(d) - 1, rng));
      const MixedState proj(v * v.adjoint(), space);
      const double proj_exact = v.dot(x * v).real();
      equal.record(std::abs(estimator_spectral(x, proj).value - proj_exact) - 1e-9 * std::max(1.0, proj_exact));
    }
    report.checks.push_back(equal.check);
  }

  {
    Tally identity("two_component_meanfield_gap");
    const double weights[] = {0.3, 0.5, 0.7, 0.9};
    for (int trial = 0; trial < 100; ++trial) {
      const Index da = uniform_int(2, 4, rng);
      const Index db = uniform_int(2, 4, rng);
      const Index d = da * db;
      const ComplexVector psi0 = random_unit(d, rng);
      ComplexVector psi1 = random_unit(d, rng);
      psi1 -= psi0 * psi0.dot(psi1);
      psi1 /= psi1.norm();
      const double p = weights[trial % 4];
      const double q = 1.0 - p;
      const ComplexMatrix x = random_hermitian(d, rng);
      const MixedState rho(p * psi0 * psi0.adjoint() + q * psi1 * psi1.adjoint(), BipartiteSpace(da, db));
      const double exact = (x * rho.rho() * rho.rho()).trace().real();
      const double x0 = psi0.dot(x * psi0).real();
      const double x1 = psi1.dot(x * psi1).real();
      const double gap = exact - estimator_meanfield(x, rho);
      identity.record(std::abs(gap - p * q * (p - q) * (x0 - x1)) - 1e-10 * std::max(1.0, x.norm()));
    }
    report.checks.push_back(identity.check);
  }

  {
    Tally basis("purity_from_observable_basis");
    for (int trial = 0; trial < 100; ++trial) {
      const Index d = uniform_int(2, 4, rng);
      ComplexMatrix state_rho = random_density(d, rng);
      if (uniform_int(0, 1, rng) == 1) {
        const ComplexVector v = random_unit(d, rng);
        state_rho = v * v.adjoint();
      }
      const MixedState state(state_rho, BipartiteSpace(d, 1));
      const double exact = purity(state);
      const PurityFromBasis got = purity_from_basis(state, hermitian_operator_basis(d));
      basis.record(std::max(std::abs(got.via_expectations - exact), std::abs(got.via_variances - exact)) - 1e-9);
    }
    report.checks.push_back(basis.check);
  }

  {
    Tally hz("hz_silent_for_hermitian_a");
    for (int trial = 0; trial < 100; ++trial) {
      const MixedState rho = random_mixed(rng);
      const LocalOperator a{random_hermitian(rho.space().dim_a(), rng), Side::a};
      const LocalOperator b{ginibre(rho.space().dim_b(), rho.space().dim_b(), rng), Side::b};
      const HzResult r = hz_test(a, b, rho);
      hz.record((r.entangled_1 || r.entangled_2) ? std::max(r.form1_margin, r.form2_margin) : 0.0);
    }
    report.checks.push_back(hz.check);
  }

  {
    Tally dgcz("crosskerr_variance_closed_form_optimum");
    for (int trial = 0; trial < 10; ++trial) {
      const double alpha = uniform(0.5, 2.0, rng);
      const double beta = uniform(0.5, 2.0, rng);
      const double t = uniform(0.01, 1.0, rng);
      const PureState psi = cross_kerr_evolve(alpha, beta, t);
      const DgczResult best = dgcz_crosskerr(psi, alpha, beta, t);
      const double span_a = 2.0 / (t * alpha);
      const double span_b = 2.0 / (t * beta);
      double grid_best = INFINITY;
      for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) {
          const double tau = -span_a + 2.0 * span_a * i / 40.0;
          const double tau_prime = -span_b + 2.0 * span_b * j / 40.0;
          grid_best = std::min(grid_best, dgcz_crosskerr_at(psi, alpha, beta, t, tau, tau_prime).margin);
        }
      dgcz.record(best.margin - grid_best - 1e-9);
    }
    report.checks.push_back(dgcz.check);
  }

  return report;
}

}  // namespace qent
