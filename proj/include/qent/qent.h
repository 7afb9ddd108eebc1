#ifndef QENT_QENT_H
#define QENT_QENT_H

/* C interface to the qent library. Every call returns a qent_status; on
 * failure qent_last_error_message() describes the error for the calling
 * thread. Objects are opaque handles released with their _free call.
 * Composite indices are i_a * dim_b + i_b; matrices are row-major arrays of
 * interleaved (re, im) pairs. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef QENT_BUILDING_LIBRARY
#    define QENT_API __declspec(dllexport)
#  else
#    define QENT_API __declspec(dllimport)
#  endif
#else
#  define QENT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qent_status {
  QENT_OK = 0,
  QENT_INVALID_ARGUMENT = 1,
  QENT_DIMENSION_MISMATCH = 2,
  QENT_NOT_HERMITIAN = 3,
  QENT_TRUNCATION = 4,
  QENT_MEMORY_CAP = 5,
  QENT_NUMERICAL = 6,
  QENT_IO = 7,
  QENT_INTERNAL = 8
} qent_status;

QENT_API const char* qent_status_string(qent_status status);
QENT_API const char* qent_last_error_message(void);

/* States. cutoff <= 0 selects the smallest cutoff meeting tail_tol;
 * tail_tol <= 0 selects 1e-10. */
typedef struct qent_state qent_state;

QENT_API qent_status qent_state_bell(int which, qent_state** out);
QENT_API qent_status qent_state_werner(int which, double p, qent_state** out);
QENT_API qent_status qent_state_tmsv(double r, int cutoff, double tail_tol, qent_state** out);
QENT_API qent_status qent_state_squeezed_thermal(double p, double r, int cutoff, double tail_tol, qent_state** out);
QENT_API qent_status qent_state_cross_kerr(double alpha, double beta, double t, int cutoff, double tail_tol,
                                           qent_state** out);
/* rho: (dim_a*dim_b)^2 complex entries. */
QENT_API qent_status qent_state_from_density(const double* rho, int dim_a, int dim_b, qent_state** out);
/* psi: dim_a*dim_b complex entries. */
QENT_API qent_status qent_state_from_amplitudes(const double* psi, int dim_a, int dim_b, qent_state** out);
QENT_API void qent_state_free(qent_state* state);
QENT_API qent_status qent_state_dims(const qent_state* state, int* dim_a, int* dim_b);
QENT_API qent_status qent_state_is_pure(const qent_state* state, int* pure);
QENT_API qent_status qent_state_truncation(const qent_state* state, int* cutoff_a, int* cutoff_b,
                                           double* discarded_weight);

/* Local operators. side: 0 = subsystem a, 1 = subsystem b. */
typedef struct qent_operator qent_operator;

/* name: sigma_minus sigma_plus a adag n x p identity quadrature:<theta> */
QENT_API qent_status qent_operator_named(const char* name, int side, int dim, qent_operator** out);
QENT_API qent_status qent_operator_from_matrix(const double* matrix, int dim, int side, qent_operator** out);
QENT_API void qent_operator_free(qent_operator* op);

typedef struct qent_witness_spec {
  const qent_operator* a1;
  const qent_operator* a2;
  const qent_operator* b1;
  const qent_operator* b2;
  int sigma_a1, sigma_a2, sigma_b1, sigma_b2; /* 0 or 1 */
  int joint_form;                             /* 0: product form, 1: joint form */
  int optimal_phase;                          /* nonzero: ignore phase */
  double phase;
} qent_witness_spec;

typedef struct qent_witness_result {
  double s_term;
  double trace_re;
  double trace_im;
  double phi;
  double value;
  int entangled;
} qent_witness_result;

QENT_API qent_status qent_evaluate_general(const qent_witness_spec* spec, const qent_state* state,
                                           qent_witness_result* out);
QENT_API qent_status qent_witness_product(const qent_operator* a, const qent_operator* b, const qent_state* state,
                                          double* value);
QENT_API qent_status qent_witness_phase(const qent_operator* a, const qent_operator* b, const qent_state* state,
                                        int optimal_phase, double phase, qent_witness_result* out);

typedef struct qent_hz_result {
  double form1_margin;
  double form2_margin;
  int entangled_1;
  int entangled_2;
} qent_hz_result;

QENT_API qent_status qent_hz(const qent_operator* a, const qent_operator* b, const qent_state* state,
                             qent_hz_result* out);

typedef struct qent_dgcz_result {
  double lhs;
  double rhs;
  double tau;
  double tau_prime;
  double margin;
  int entangled;
} qent_dgcz_result;

/* state must be pure. */
QENT_API qent_status qent_dgcz(const qent_state* state, double alpha, double beta, double t,
                               qent_dgcz_result* out);

QENT_API qent_status qent_purity(const qent_state* state, double* out);
QENT_API qent_status qent_negativity(const qent_state* state, double* out);
/* state must be pure; bits. */
QENT_API qent_status qent_entropy(const qent_state* state, double* out);
/* kind: 0 spectral, 1 meanfield. */
QENT_API qent_status qent_estimated_witness(const qent_operator* a, const qent_operator* b,
                                            const qent_state* state, int kind, double* value,
                                            int* unconditional);

/* Sweeps. experiment: bell werner region kerr scaling. */
typedef struct qent_sweep_config qent_sweep_config;
typedef struct qent_sweep_result qent_sweep_result;

QENT_API qent_status qent_sweep_config_new(const char* experiment, qent_sweep_config** out);
QENT_API void qent_sweep_config_free(qent_sweep_config* config);
/* spec: "start:stop:count" */
QENT_API qent_status qent_sweep_config_set_grid(qent_sweep_config* config, const char* name, const char* spec);
/* cutoff <= 0: auto */
QENT_API qent_status qent_sweep_config_set_cutoff(qent_sweep_config* config, int cutoff);
QENT_API qent_status qent_sweep_config_set_tail_tolerance(qent_sweep_config* config, double tol);
QENT_API qent_status qent_sweep_config_set_theta_points(qent_sweep_config* config, int points);
QENT_API qent_status qent_sweep_config_set_threads(qent_sweep_config* config, int threads);
QENT_API qent_status qent_sweep_config_set_alpha(qent_sweep_config* config, double alpha);
QENT_API qent_status qent_sweep_config_set_beta(qent_sweep_config* config, double beta);
QENT_API qent_status qent_sweep_config_set_family(qent_sweep_config* config, int family);
QENT_API qent_status qent_sweep_config_set_alpha_list(qent_sweep_config* config, const double* alphas,
                                                      size_t count);

QENT_API qent_status qent_sweep_run(const qent_sweep_config* config, qent_sweep_result** out);
QENT_API const char* qent_sweep_result_csv(const qent_sweep_result* result);
/* "key=value" lines; empty for experiments without a summary. */
QENT_API const char* qent_sweep_result_summary(const qent_sweep_result* result);
QENT_API void qent_sweep_result_free(qent_sweep_result* result);

/* Evaluates a key-value witness description; *csv_out is released with
 * qent_string_free. tail_tol <= 0 selects 1e-10. */
QENT_API qent_status qent_run_witness_config(const char* path, double tail_tol, char** csv_out);
/* *report_out lists one line per property; *passed is 1 when all hold. */
QENT_API qent_status qent_selftest(uint64_t seed, char** report_out, int* passed);
QENT_API void qent_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
