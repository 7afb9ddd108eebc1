#include "qent/qent.h"

#include <cstring>
#include <new>
#include <string>
#include <variant>

#include "qent/bench.hpp"
#include "qent/criteria.hpp"
#include "qent/diagnostics.hpp"
#include "qent/selftest.hpp"
#include "qent/witness_config.hpp"

struct qent_state {
  std::variant<qent::PureState, qent::MixedState> value;

  qent::StateRef ref() const {
    return std::visit([](const auto& s) { return qent::StateRef(s); }, value);
  }
};

struct qent_operator {
  qent::LocalOperator value;
};

struct qent_sweep_config {
  qent::SweepConfig value;
};

struct qent_sweep_result {
  std::string csv;
  std::string summary;
};

namespace {

thread_local std::string last_error;

qent_status status_of(qent::ErrorCode code) {
  switch (code) {
    case qent::ErrorCode::invalid_argument: return QENT_INVALID_ARGUMENT;
    case qent::ErrorCode::dimension_mismatch: return QENT_DIMENSION_MISMATCH;
    case qent::ErrorCode::not_hermitian: return QENT_NOT_HERMITIAN;
    case qent::ErrorCode::truncation: return QENT_TRUNCATION;
    case qent::ErrorCode::memory_cap: return QENT_MEMORY_CAP;
    case qent::ErrorCode::numerical: return QENT_NUMERICAL;
    case qent::ErrorCode::io: return QENT_IO;
  }
  return QENT_INTERNAL;
}

template <class F>
qent_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return QENT_OK;
  } catch (const qent::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QENT_MEMORY_CAP;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QENT_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) qent::fail(qent::ErrorCode::invalid_argument, std::string(what) + " is null");
}

qent::TruncationPolicy policy(int cutoff, double tail_tol) {
  qent::TruncationPolicy out;
  if (cutoff > 0) out.cutoff = cutoff;
  if (tail_tol > 0.0) out.tail_tolerance = tail_tol;
  return out;
}

qent::Side side_of(int side) {
  if (side != 0 && side != 1) qent::fail(qent::ErrorCode::invalid_argument, "side must be 0 (a) or 1 (b)");
  return side == 0 ? qent::Side::a : qent::Side::b;
}

qent::ComplexMatrix read_matrix(const double* data, qent::Index rows, qent::Index cols) {
  qent::ComplexMatrix m(rows, cols);
  for (qent::Index i = 0; i < rows; ++i)
    for (qent::Index j = 0; j < cols; ++j) {
      const double* z = data + 2 * (i * cols + j);
      m(i, j) = qent::Complex(z[0], z[1]);
    }
  return m;
}

template <class S>
void emit(S&& state, qent_state** out) {
  require(out, "out");
  *out = new qent_state{std::forward<S>(state)};
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void fill(const qent::WitnessResult& r, qent_witness_result* out) {
  out->s_term = r.s_term;
  out->trace_re = r.trace_term.real();
  out->trace_im = r.trace_term.imag();
  out->phi = r.phi_used;
  out->value = r.value;
  out->entangled = r.entangled ? 1 : 0;
}

const qent::PureState& pure_of(const qent_state* state) {
  require(state, "state");
  if (!std::holds_alternative<qent::PureState>(state->value)) {
    qent::fail(qent::ErrorCode::invalid_argument, "this operation needs a pure state");
  }
  return std::get<qent::PureState>(state->value);
}

}  // namespace

extern "C" {

const char* qent_status_string(qent_status status) {
  switch (status) {
    case QENT_OK: return "ok";
    case QENT_INVALID_ARGUMENT: return "invalid argument";
    case QENT_DIMENSION_MISMATCH: return "dimension mismatch";
    case QENT_NOT_HERMITIAN: return "not hermitian";
    case QENT_TRUNCATION: return "truncation tolerance not met";
    case QENT_MEMORY_CAP: return "memory cap exceeded";
    case QENT_NUMERICAL: return "numerical failure";
    case QENT_IO: return "i/o error";
    case QENT_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* qent_last_error_message(void) { return last_error.c_str(); }

qent_status qent_state_bell(int which, qent_state** out) {
  return guarded([&] { emit(qent::bell(which), out); });
}

qent_status qent_state_werner(int which, double p, qent_state** out) {
  return guarded([&] { emit(qent::werner(which, p), out); });
}

qent_status qent_state_tmsv(double r, int cutoff, double tail_tol, qent_state** out) {
  return guarded([&] { emit(qent::tmsv(r, policy(cutoff, tail_tol)), out); });
}

qent_status qent_state_squeezed_thermal(double p, double r, int cutoff, double tail_tol, qent_state** out) {
  return guarded([&] { emit(qent::squeezed_thermal(p, r, policy(cutoff, tail_tol)), out); });
}

qent_status qent_state_cross_kerr(double alpha, double beta, double t, int cutoff, double tail_tol,
                                  qent_state** out) {
  return guarded([&] { emit(qent::cross_kerr_evolve(alpha, beta, t, policy(cutoff, tail_tol)), out); });
}

qent_status qent_state_from_density(const double* rho, int dim_a, int dim_b, qent_state** out) {
  return guarded([&] {
    require(rho, "rho");
    const qent::BipartiteSpace space(dim_a, dim_b);
    emit(qent::MixedState(read_matrix(rho, space.dim_total(), space.dim_total()), space), out);
  });
}

qent_status qent_state_from_amplitudes(const double* psi, int dim_a, int dim_b, qent_state** out) {
  return guarded([&] {
    require(psi, "psi");
    const qent::BipartiteSpace space(dim_a, dim_b);
    emit(qent::PureState(read_matrix(psi, space.dim_total(), 1), space), out);
  });
}

void qent_state_free(qent_state* state) { delete state; }

qent_status qent_state_dims(const qent_state* state, int* dim_a, int* dim_b) {
  return guarded([&] {
    require(state, "state");
    const qent::BipartiteSpace& s = state->ref().space();
    if (dim_a) *dim_a = static_cast<int>(s.dim_a());
    if (dim_b) *dim_b = static_cast<int>(s.dim_b());
  });
}

qent_status qent_state_is_pure(const qent_state* state, int* pure) {
  return guarded([&] {
    require(state, "state");
    require(pure, "pure");
    *pure = state->ref().is_pure() ? 1 : 0;
  });
}

qent_status qent_state_truncation(const qent_state* state, int* cutoff_a, int* cutoff_b,
                                  double* discarded_weight) {
  return guarded([&] {
    require(state, "state");
    const qent::TruncationReport& t = state->ref().truncation();
    if (cutoff_a) *cutoff_a = t.cutoff_a;
    if (cutoff_b) *cutoff_b = t.cutoff_b;
    if (discarded_weight) *discarded_weight = t.discarded_weight;
  });
}

qent_status qent_operator_named(const char* name, int side, int dim, qent_operator** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    if (dim < 1) qent::fail(qent::ErrorCode::invalid_argument, "dim must be positive");
    *out = new qent_operator{qent::named_operator(name, side_of(side), dim)};
  });
}

qent_status qent_operator_from_matrix(const double* matrix, int dim, int side, qent_operator** out) {
  return guarded([&] {
    require(matrix, "matrix");
    require(out, "out");
    if (dim < 1) qent::fail(qent::ErrorCode::invalid_argument, "dim must be positive");
    qent::ComplexMatrix m = read_matrix(matrix, dim, dim);
    qent::require_finite(m, "operator");
    *out = new qent_operator{{std::move(m), side_of(side)}};
  });
}

void qent_operator_free(qent_operator* op) { delete op; }

qent_status qent_evaluate_general(const qent_witness_spec* spec, const qent_state* state,
                                  qent_witness_result* out) {
  return guarded([&] {
    require(spec, "spec");
    require(state, "state");
    require(out, "out");
    for (const qent_operator* op : {spec->a1, spec->a2, spec->b1, spec->b2}) require(op, "operator");
    for (const int s : {spec->sigma_a1, spec->sigma_a2, spec->sigma_b1, spec->sigma_b2}) {
      if (s != 0 && s != 1) qent::fail(qent::ErrorCode::invalid_argument, "sigma flags must be 0 or 1");
    }
    const qent::WitnessSpec w{spec->a1->value,
                              spec->a2->value,
                              spec->b1->value,
                              spec->b2->value,
                              {spec->sigma_a1 == 1, spec->sigma_a2 == 1, spec->sigma_b1 == 1, spec->sigma_b2 == 1},
                              spec->joint_form ? qent::WitnessVariant::joint_form
                                               : qent::WitnessVariant::product_form,
                              spec->optimal_phase ? std::nullopt : std::optional<double>(spec->phase)};
    fill(qent::evaluate_general(w, state->ref()), out);
  });
}

qent_status qent_witness_product(const qent_operator* a, const qent_operator* b, const qent_state* state,
                                 double* value) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(state, "state");
    require(value, "value");
    *value = qent::witness_product(a->value, b->value, state->ref());
  });
}

qent_status qent_witness_phase(const qent_operator* a, const qent_operator* b, const qent_state* state,
                               int optimal_phase, double phase, qent_witness_result* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(state, "state");
    require(out, "out");
    fill(qent::witness_phase(a->value, b->value, state->ref(),
                             optimal_phase ? std::nullopt : std::optional<double>(phase)),
         out);
  });
}

qent_status qent_hz(const qent_operator* a, const qent_operator* b, const qent_state* state,
                    qent_hz_result* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(state, "state");
    require(out, "out");
    const qent::HzResult r = qent::hz_test(a->value, b->value, state->ref());
    *out = {r.form1_margin, r.form2_margin, r.entangled_1 ? 1 : 0, r.entangled_2 ? 1 : 0};
  });
}

qent_status qent_dgcz(const qent_state* state, double alpha, double beta, double t, qent_dgcz_result* out) {
  return guarded([&] {
    require(out, "out");
    const qent::DgczResult r = qent::dgcz_crosskerr(pure_of(state), alpha, beta, t);
    *out = {r.lhs, r.rhs, r.tau, r.tau_prime, r.margin, r.entangled ? 1 : 0};
  });
}

qent_status qent_purity(const qent_state* state, double* out) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    *out = qent::purity(state->ref());
  });
}

qent_status qent_negativity(const qent_state* state, double* out) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    *out = qent::negativity(state->ref());
  });
}

qent_status qent_entropy(const qent_state* state, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = qent::entanglement_entropy(pure_of(state));
  });
}

qent_status qent_estimated_witness(const qent_operator* a, const qent_operator* b, const qent_state* state,
                                   int kind, double* value, int* unconditional) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(state, "state");
    require(value, "value");
    if (kind != 0 && kind != 1) qent::fail(qent::ErrorCode::invalid_argument, "kind must be 0 or 1");
    const qent::EstimatedWitness r = qent::estimated_witness(
        a->value, b->value, state->ref(), kind == 0 ? qent::EstimatorKind::spectral : qent::EstimatorKind::meanfield);
    *value = r.value;
    if (unconditional) *unconditional = r.unconditional ? 1 : 0;
  });
}

qent_status qent_sweep_config_new(const char* experiment, qent_sweep_config** out) {
  return guarded([&] {
    require(experiment, "experiment");
    require(out, "out");
    *out = new qent_sweep_config{qent::default_config(qent::parse_experiment(experiment))};
  });
}

void qent_sweep_config_free(qent_sweep_config* config) { delete config; }

qent_status qent_sweep_config_set_grid(qent_sweep_config* config, const char* name, const char* spec) {
  return guarded([&] {
    require(config, "config");
    require(name, "name");
    require(spec, "spec");
    config->value.grids[name] = qent::parse_grid(spec);
  });
}

qent_status qent_sweep_config_set_cutoff(qent_sweep_config* config, int cutoff) {
  return guarded([&] {
    require(config, "config");
    config->value.cutoff = cutoff > 0 ? std::optional<int>(cutoff) : std::nullopt;
  });
}

qent_status qent_sweep_config_set_tail_tolerance(qent_sweep_config* config, double tol) {
  return guarded([&] {
    require(config, "config");
    config->value.tail_tolerance = tol;
  });
}

qent_status qent_sweep_config_set_theta_points(qent_sweep_config* config, int points) {
  return guarded([&] {
    require(config, "config");
    config->value.theta_points = points;
  });
}

qent_status qent_sweep_config_set_threads(qent_sweep_config* config, int threads) {
  return guarded([&] {
    require(config, "config");
    config->value.threads = threads;
  });
}

qent_status qent_sweep_config_set_alpha(qent_sweep_config* config, double alpha) {
  return guarded([&] {
    require(config, "config");
    config->value.alpha = alpha;
  });
}

qent_status qent_sweep_config_set_beta(qent_sweep_config* config, double beta) {
  return guarded([&] {
    require(config, "config");
    config->value.beta = beta;
  });
}

qent_status qent_sweep_config_set_family(qent_sweep_config* config, int family) {
  return guarded([&] {
    require(config, "config");
    config->value.werner_family = family;
  });
}

qent_status qent_sweep_config_set_alpha_list(qent_sweep_config* config, const double* alphas, size_t count) {
  return guarded([&] {
    require(config, "config");
    require(alphas, "alphas");
    config->value.alpha_list.assign(alphas, alphas + count);
  });
}

qent_status qent_sweep_run(const qent_sweep_config* config, qent_sweep_result** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    qent::SweepOutput r = qent::run_sweep(config->value);
    *out = new qent_sweep_result{std::move(r.csv), std::move(r.summary)};
  });
}

const char* qent_sweep_result_csv(const qent_sweep_result* result) { return result ? result->csv.c_str() : ""; }

const char* qent_sweep_result_summary(const qent_sweep_result* result) {
  return result ? result->summary.c_str() : "";
}

void qent_sweep_result_free(qent_sweep_result* result) { delete result; }

qent_status qent_run_witness_config(const char* path, double tail_tol, char** csv_out) {
  return guarded([&] {
    require(path, "path");
    require(csv_out, "csv_out");
    const qent::WitnessJobResult job = qent::run_witness_config(
        qent::load_witness_config(path), tail_tol > 0.0 ? tail_tol : qent::kDefaultTailTolerance);
    *csv_out = copy_string(qent::to_csv(job));
  });
}

qent_status qent_selftest(uint64_t seed, char** report_out, int* passed) {
  return guarded([&] {
    require(report_out, "report_out");
    require(passed, "passed");
    const qent::SelftestReport report = qent::run_selftest(seed);
    *report_out = copy_string(report.to_text());
    *passed = report.passed() ? 1 : 0;
  });
}

void qent_string_free(char* s) { delete[] s; }

}  // extern "C"
