#include "qent/criteria.hpp"

#include <array>
#include <cassert>
#include <limits>
#include <numbers>
#include <string>

namespace qent {

namespace {

struct Factor {
  const LocalOperator* op;
  bool dagger;
  bool present;
};

// Ordered product of lifted local operators. Lifted a- and b-side operators
// commute, so only the order within each side is kept.
struct LiftedProduct {
  std::optional<ComplexMatrix> a;
  std::optional<ComplexMatrix> b;
};

LiftedProduct build_product(std::initializer_list<Factor> factors) {
  LiftedProduct out;
  for (const Factor& f : factors) {
    if (!f.present) continue;
    ComplexMatrix m = f.dagger ? ComplexMatrix(f.op->matrix.adjoint()) : f.op->matrix;
    auto& slot = f.op->side == Side::a ? out.a : out.b;
    slot = slot ? ComplexMatrix(*slot * m) : std::move(m);
  }
  return out;
}

LiftedProduct local_product(const ComplexMatrix* a, const ComplexMatrix* b) {
  LiftedProduct out;
  if (a) out.a = *a;
  if (b) out.b = *b;
  return out;
}

template <class M>
M apply_product(const LiftedProduct& x, const BipartiteSpace& space, M m) {
  if (x.b) m = apply_local(*x.b, Side::b, space, m);
  if (x.a) m = apply_local(*x.a, Side::a, space, m);
  return m;
}

// Tr(m1 m2), walked in tiles so both operands are read cache-locally.
Complex trace_of_product(const ComplexMatrix& m1, const ComplexMatrix& m2) {
  constexpr Index tile = 32;
  const Index n = m1.rows();
  Complex sum(0.0, 0.0);
  for (Index j0 = 0; j0 < n; j0 += tile) {
    const Index nj = std::min(tile, n - j0);
    for (Index i0 = 0; i0 < n; i0 += tile) {
      const Index ni = std::min(tile, n - i0);
      sum += (m1.block(i0, j0, ni, nj).array() * m2.block(j0, i0, nj, ni).transpose().array()).sum();
    }
  }
  return sum;
}

Complex expectation(const LiftedProduct& x, StateRef state) {
  const BipartiteSpace& space = state.space();
  if (state.is_pure()) {
    const ComplexVector& psi = state.pure().amplitudes();
    return psi.dot(apply_product(x, space, psi));
  }
  return local_expectation(state.mixed().rho(), space, x.a ? &*x.a : nullptr, x.b ? &*x.b : nullptr);
}

// Tr(X rho Y rho).
Complex bracket(const LiftedProduct& x, const LiftedProduct& y, StateRef state, std::size_t cap) {
  if (state.is_pure()) return expectation(x, state) * expectation(y, state);
  const ComplexMatrix& rho = state.mixed().rho();
  check_memory(rho.rows(), rho.cols(), cap, "trace bracket", 4);
  const BipartiteSpace& space = state.space();
  return trace_of_product(apply_product(x, space, rho), apply_product(y, space, rho));
}

void require_operator(const LocalOperator& op, Side side, const BipartiteSpace& space, const char* name) {
  if (op.side != side) {
    fail(ErrorCode::invalid_argument, std::string(name) + " must act on subsystem " + (side == Side::a ? "a" : "b"));
  }
  require_square(op.matrix, name);
  if (op.dim() != space.dim(side)) {
    fail(ErrorCode::dimension_mismatch, std::string(name) + " dimension " + std::to_string(op.dim()) +
                                            " does not match the state's subsystem dimension " +
                                            std::to_string(space.dim(side)));
  }
}

void require_spec(const WitnessSpec& spec, const BipartiteSpace& space) {
  require_operator(spec.a1, Side::a, space, "A1");
  require_operator(spec.a2, Side::a, space, "A2");
  require_operator(spec.b1, Side::b, space, "B1");
  require_operator(spec.b2, Side::b, space, "B2");
}

struct BracketOperators {
  LiftedProduct x, y;    // first bracket Tr(X rho Y rho)
  LiftedProduct x2, y2;  // second bracket
};

BracketOperators bracket_operators(const WitnessSpec& s) {
  const auto& f = s.sigma;
  const LocalOperator* A1 = &s.a1;
  const LocalOperator* A2 = &s.a2;
  const LocalOperator* B1 = &s.b1;
  const LocalOperator* B2 = &s.b2;
  BracketOperators out;
  if (s.variant == WitnessVariant::product_form) {
    out.x = build_product({{A1, true, f.a1}, {A2, false, f.a2}, {B2, true, !f.b2}, {B1, false, !f.b1}});
    out.y = build_product({{A2, true, !f.a2}, {A1, false, !f.a1}, {B1, true, f.b1}, {B2, false, f.b2}});
    out.x2 = build_product({{A2, true, f.a2}, {A1, false, f.a1}, {B1, true, !f.b1}, {B2, false, !f.b2}});
    out.y2 = build_product({{A1, true, !f.a1}, {A2, false, !f.a2}, {B2, true, f.b2}, {B1, false, f.b1}});
  } else {
    out.x = build_product({{A1, true, f.a1}, {A2, false, f.a2}, {B1, true, f.b1}, {B2, false, f.b2}});
    out.y = build_product({{A2, true, !f.a2}, {A1, false, !f.a1}, {B2, true, !f.b2}, {B1, false, !f.b1}});
    out.x2 = build_product({{A2, true, f.a2}, {A1, false, f.a1}, {B2, true, f.b2}, {B1, false, f.b1}});
    out.y2 = build_product({{A1, true, !f.a1}, {A2, false, !f.a2}, {B1, true, !f.b1}, {B2, false, !f.b2}});
  }
  return out;
}

double s_term_of(const WitnessSpec& s, StateRef state) {
  const ComplexMatrix na1 = number_of(s.a1.matrix);
  const ComplexMatrix na2 = number_of(s.a2.matrix);
  const ComplexMatrix nb1 = number_of(s.b1.matrix);
  const ComplexMatrix nb2 = number_of(s.b2.matrix);
  if (s.variant == WitnessVariant::product_form) {
    const double ea1 = expectation(local_product(&na1, nullptr), state).real();
    const double ea2 = expectation(local_product(&na2, nullptr), state).real();
    const double eb1 = expectation(local_product(nullptr, &nb1), state).real();
    const double eb2 = expectation(local_product(nullptr, &nb2), state).real();
    return ea1 * eb1 + ea2 * eb2;
  }
  return expectation(local_product(&na1, &nb1), state).real() +
         expectation(local_product(&na2, &nb2), state).real();
}

WitnessResult finish(double s_term, Complex c, std::optional<double> phase) {
  WitnessResult r;
  r.s_term = s_term;
  r.trace_term = c;
  r.phi_used = phase ? *phase : (std::abs(c) > 0.0 ? -std::arg(c) : 0.0);
  r.value = s_term - 2.0 * (std::polar(1.0, r.phi_used) * c).real();
  r.entangled = r.value < -verdict_tolerance(s_term);
  return r;
}

}  // namespace

WitnessResult evaluate_general(const WitnessSpec& spec, StateRef state, std::size_t memory_cap) {
  require_spec(spec, state.space());
  const BracketOperators ops = bracket_operators(spec);
  const Complex c = bracket(ops.x, ops.y, state, memory_cap);
#ifndef NDEBUG
  const Complex c2 = bracket(ops.x2, ops.y2, state, memory_cap);
  assert(std::abs(c2 - std::conj(c)) <= 1e-10 * std::max(1.0, std::abs(c)));
#endif
  return finish(s_term_of(spec, state), c, spec.phase);
}

TraceBrackets trace_brackets(const WitnessSpec& spec, StateRef state, std::size_t memory_cap) {
  require_spec(spec, state.space());
  const BracketOperators ops = bracket_operators(spec);
  return {bracket(ops.x, ops.y, state, memory_cap), bracket(ops.x2, ops.y2, state, memory_cap)};
}

double witness_product(const LocalOperator& a, const LocalOperator& b, StateRef state, std::size_t memory_cap) {
  require_operator(a, Side::a, state.space(), "A");
  require_operator(b, Side::b, state.space(), "B");
  const ComplexMatrix na = number_of(a.matrix);
  const ComplexMatrix nb = number_of(b.matrix);
  const double ea = expectation(local_product(&na, nullptr), state).real();
  const double eb = expectation(local_product(nullptr, &nb), state).real();
  const LiftedProduct joint = local_product(&na, &nb);
  double correlated = 0.0;
  if (state.is_pure()) {
    correlated = expectation(joint, state).real();
  } else {
    const ComplexMatrix& rho = state.mixed().rho();
    check_memory(rho.rows(), rho.cols(), memory_cap, "witness_product", 3);
    correlated = trace_of_product(apply_product(joint, state.space(), rho), rho).real();
  }
  return ea * eb - correlated;
}

double number_product(const LocalOperator& a, const LocalOperator& b, StateRef state) {
  require_operator(a, Side::a, state.space(), "A");
  require_operator(b, Side::b, state.space(), "B");
  const ComplexMatrix na = number_of(a.matrix);
  const ComplexMatrix nb = number_of(b.matrix);
  return expectation(local_product(&na, nullptr), state).real() *
         expectation(local_product(nullptr, &nb), state).real();
}

WitnessResult witness_phase(const LocalOperator& a, const LocalOperator& b, StateRef state,
                            std::optional<double> phase, std::size_t memory_cap) {
  require_operator(a, Side::a, state.space(), "A");
  require_operator(b, Side::b, state.space(), "B");
  const ComplexMatrix na = number_of(a.matrix);
  const ComplexMatrix nb = number_of(b.matrix);
  const double s_term = 2.0 * expectation(local_product(&na, &nb), state).real();
  const ComplexMatrix a_dag = a.matrix.adjoint();
  const LiftedProduct hop = local_product(&a_dag, &b.matrix);
  const Complex c = bracket(hop, hop, state, memory_cap);
  return finish(s_term, c, phase);
}

HzResult hz_test(const LocalOperator& a, const LocalOperator& b, StateRef state) {
  require_operator(a, Side::a, state.space(), "A");
  require_operator(b, Side::b, state.space(), "B");
  const ComplexMatrix na = number_of(a.matrix);
  const ComplexMatrix nb = number_of(b.matrix);
  const ComplexMatrix b_dag = b.matrix.adjoint();
  const double ea = expectation(local_product(&na, nullptr), state).real();
  const double eb = expectation(local_product(nullptr, &nb), state).real();
  const double eab = expectation(local_product(&na, &nb), state).real();
  const double ab = std::norm(expectation(local_product(&a.matrix, &b.matrix), state));
  const double ab_dag = std::norm(expectation(local_product(&a.matrix, &b_dag), state));
  HzResult r;
  r.form1_margin = ab - ea * eb;
  r.form2_margin = ab_dag - eab;
  r.entangled_1 = r.form1_margin > verdict_tolerance(ea * eb);
  r.entangled_2 = r.form2_margin > verdict_tolerance(eab);
  return r;
}

namespace {

// Moments of one half of the cross-Kerr criterion:
// d(p_here + u n_there)^2 - |u| |<x_there>|.
struct DgczHalf {
  double var_p = 0.0;
  double cov = 0.0;
  double var_n = 0.0;
  double abs_x = 0.0;

  double variance(double u) const { return var_p + 2.0 * u * cov + u * u * var_n; }
  double rhs(double u) const { return std::abs(u) * abs_x; }
  double margin(double u) const { return variance(u) - rhs(u); }

  // Quadratic in u on each sign branch.
  double optimal_u(bool free) const {
    if (!free || var_n <= 1e-14) return 0.0;
    const std::array<double, 3> candidates{0.0, std::max(0.0, (abs_x - 2.0 * cov) / (2.0 * var_n)),
                                           std::min(0.0, -(2.0 * cov + abs_x) / (2.0 * var_n))};
    double best = candidates[0];
    for (double u : candidates)
      if (margin(u) < margin(best)) best = u;
    return best;
  }
};

struct DgczMoments {
  DgczHalf first;   // p_a with n_b, <x_b>
  DgczHalf second;  // p_b with n_a, <x_a>
};

DgczMoments dgcz_moments(const PureState& state) {
  const BipartiteSpace& space = state.space();
  if (space.dim_a() < 2 || space.dim_b() < 2) {
    fail(ErrorCode::invalid_argument, "dgcz_crosskerr: requires a Fock (x) Fock space");
  }
  const ComplexVector& psi = state.amplitudes();
  auto half = [&](Side here) {
    const Side there = here == Side::a ? Side::b : Side::a;
    const int cut_here = static_cast<int>(space.dim(here)) - 1;
    const int cut_there = static_cast<int>(space.dim(there)) - 1;
    const ComplexMatrix p = momentum(cut_here);
    const ComplexMatrix n = number_of(boson_annihilation(cut_there));
    const ComplexMatrix x = position(cut_there);
    auto ev = [&](const ComplexMatrix& op, Side side, const ComplexVector& v) {
      return psi.dot(apply_local(op, side, space, v)).real();
    };
    const ComplexVector p_psi = apply_local(p, here, space, psi);
    const ComplexVector n_psi = apply_local(n, there, space, psi);
    const double ep = psi.dot(p_psi).real();
    const double en = psi.dot(n_psi).real();
    DgczHalf h;
    h.var_p = p_psi.squaredNorm() - ep * ep;
    h.var_n = n_psi.squaredNorm() - en * en;
    h.cov = ev(p, here, n_psi) - ep * en;
    h.abs_x = std::abs(ev(x, there, psi));
    return h;
  };
  return {half(Side::a), half(Side::b)};
}

DgczResult dgcz_result(const DgczMoments& m, double u, double v, double k_a, double k_b) {
  DgczResult r;
  r.tau = k_a != 0.0 ? u / k_a : 0.0;
  r.tau_prime = k_b != 0.0 ? v / k_b : 0.0;
  r.lhs = m.first.variance(u) + m.second.variance(v);
  r.rhs = m.first.rhs(u) + m.second.rhs(v);
  r.margin = r.lhs - r.rhs;
  r.entangled = r.margin < -verdict_tolerance(r.lhs);
  return r;
}

}  // namespace

DgczResult dgcz_crosskerr(const PureState& state, double alpha, double beta, double t) {
  const DgczMoments m = dgcz_moments(state);
  const double k_a = t * alpha;  // tau multiplies t alpha n_b
  const double k_b = t * beta;
  const double u = m.first.optimal_u(k_a != 0.0);
  const double v = m.second.optimal_u(k_b != 0.0);
  return dgcz_result(m, u, v, k_a, k_b);
}

DgczResult dgcz_crosskerr_at(const PureState& state, double alpha, double beta, double t, double tau,
                             double tau_prime) {
  const DgczMoments m = dgcz_moments(state);
  DgczResult r = dgcz_result(m, tau * t * alpha, tau_prime * t * beta, t * alpha, t * beta);
  r.tau = tau;
  r.tau_prime = tau_prime;
  return r;
}

KerrWitness kerr_witness(const PureState& state, int theta_points) {
  if (theta_points < 1) fail(ErrorCode::invalid_argument, "kerr_witness: theta_points must be >= 1");
  const BipartiteSpace& space = state.space();
  const int cut_a = static_cast<int>(space.dim_a()) - 1;
  const int cut_b = static_cast<int>(space.dim_b()) - 1;
  const LocalOperator b = on_b(boson_annihilation(cut_b));
  KerrWitness best;
  best.value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < theta_points; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / theta_points;
    const LocalOperator a = on_a(quadrature(theta, cut_a));
    const double value = witness_product(a, b, state);
    if (value < best.value) {
      best.value = value;
      best.theta = theta;
    }
  }
  const ComplexMatrix na = number_of(quadrature(best.theta, cut_a));
  const ComplexMatrix nb = number_of(b.matrix);
  best.s_term = expectation(local_product(&na, nullptr), state).real() *
                expectation(local_product(nullptr, &nb), state).real();
  best.entangled = best.value < -verdict_tolerance(best.s_term);
  return best;
}

}  // namespace qent
