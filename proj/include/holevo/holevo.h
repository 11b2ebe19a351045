/* C interface to the holevo library. Objects are opaque handles owned by
 * the caller and released with the matching *_free function. Every
 * function returning hl_status leaves a message for hl_last_error() on
 * failure; the message is per thread. Strings returned through char**
 * are released with hl_string_free. */
#ifndef HOLEVO_HOLEVO_H
#define HOLEVO_HOLEVO_H

#include <stddef.h>
#include <stdint.h>

#if defined(HOLEVO_BUILDING_LIBRARY)
#define HOLEVO_API __attribute__((visibility("default")))
#else
#define HOLEVO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hl_status {
  HL_OK = 0,
  HL_ERR_INVALID_OPERAND = 1,
  HL_ERR_DIMENSION_MISMATCH = 2,
  HL_ERR_INVALID_ARGUMENT = 3,
  HL_ERR_INFEASIBLE = 4,
  HL_ERR_DEGENERATE_TRANSPORT = 5,
  HL_ERR_UNSUPPORTED = 6,
  HL_ERR_PARSE = 7,
  HL_ERR_NULL_POINTER = 8,
  HL_ERR_INTERNAL = 99
} hl_status;

typedef struct hl_channel hl_channel;
typedef struct hl_state hl_state;
typedef struct hl_constraint hl_constraint;
typedef struct hl_result hl_result;

typedef struct hl_options {
  double tol;
  int max_iter;
  uint64_t seed;
  int multistart;
  int qubit_grid;
  int decomposition_starts;
} hl_options;

typedef enum hl_format_kind { HL_FORMAT_JSON = 0, HL_FORMAT_CSV = 1 } hl_format_kind;

typedef struct hl_format {
  hl_format_kind kind;
  int bits;   /* nonzero: entropic numbers in bits */
  int timing; /* nonzero: include wall-clock fields */
} hl_format;

HOLEVO_API const char* hl_version(void);
HOLEVO_API const char* hl_last_error(void);
HOLEVO_API const char* hl_status_string(hl_status status);
HOLEVO_API void hl_string_free(char* s);
HOLEVO_API void hl_options_default(hl_options* opts);
HOLEVO_API void hl_format_default(hl_format* fmt);

/* Channels. Matrices cross the boundary as interleaved (re, im) pairs in
 * row-major order. */
HOLEVO_API hl_status hl_channel_from_json(const char* json, hl_channel** out);
HOLEVO_API hl_status hl_channel_noiseless(int d, hl_channel** out);
HOLEVO_API hl_status hl_channel_depolarizing(int d, double p, hl_channel** out);
HOLEVO_API hl_status hl_channel_example2(int n, double q, int big_n, hl_channel** out);
HOLEVO_API hl_status hl_channel_compose(const hl_channel* outer, const hl_channel* inner, hl_channel** out);
HOLEVO_API hl_status hl_channel_tensor(const hl_channel* a, const hl_channel* b, hl_channel** out);
HOLEVO_API hl_status hl_channel_truncate(const hl_channel* phi, int n, hl_channel** out);
HOLEVO_API int hl_channel_d_in(const hl_channel* phi);
HOLEVO_API int hl_channel_d_out(const hl_channel* phi);
HOLEVO_API hl_status hl_channel_apply(const hl_channel* phi, const double* rho, double* out);
HOLEVO_API hl_status hl_channel_to_json(const hl_channel* phi, char** out);
HOLEVO_API void hl_channel_free(hl_channel* phi);

/* States. */
HOLEVO_API hl_status hl_state_from_json(const char* json, hl_state** out);
HOLEVO_API hl_status hl_state_from_matrix(int d, const double* entries, hl_state** out);
HOLEVO_API hl_status hl_state_maximally_mixed(int d, hl_state** out);
HOLEVO_API int hl_state_dim(const hl_state* rho);
HOLEVO_API hl_status hl_entropy(const hl_state* rho, double* out);
/* *finite is set to 0 and *out left untouched when the value is +inf. */
HOLEVO_API hl_status hl_relative_entropy(const hl_state* a, const hl_state* b, double* out, int* finite);
HOLEVO_API void hl_state_free(hl_state* rho);

/* Constraint sets. */
HOLEVO_API hl_status hl_constraint_from_json(const char* json, hl_constraint** out);
HOLEVO_API hl_status hl_constraint_unconstrained(hl_constraint** out);
HOLEVO_API hl_status hl_constraint_singleton(const hl_state* rho, hl_constraint** out);
HOLEVO_API hl_status hl_constraint_expectation(int d, const double* observable, double bound, hl_constraint** out);
HOLEVO_API void hl_constraint_free(hl_constraint* c);

/* χ-capacity. opts may be NULL for defaults. */
HOLEVO_API hl_status hl_capacity(const hl_channel* phi, const hl_constraint* c, const hl_options* opts,
                                 hl_result** out);
HOLEVO_API double hl_result_value(const hl_result* r);
HOLEVO_API double hl_result_lower(const hl_result* r);
HOLEVO_API double hl_result_upper(const hl_result* r);
HOLEVO_API double hl_result_gap(const hl_result* r);
HOLEVO_API int hl_result_converged(const hl_result* r);
HOLEVO_API int hl_result_certified(const hl_result* r);
HOLEVO_API int hl_result_iterations(const hl_result* r);
HOLEVO_API double hl_result_wall_time(const hl_result* r);
/* Output state Φ(ρ̄) of the witness, d_out × d_out interleaved. */
HOLEVO_API hl_status hl_result_omega(const hl_result* r, double* out);
HOLEVO_API hl_status hl_result_format(const hl_result* r, const hl_format* fmt, char** out);
HOLEVO_API void hl_result_free(hl_result* r);

/* Qubit-input oracle bracket. */
HOLEVO_API hl_status hl_brute_force(const hl_channel* phi, const hl_constraint* c, int resolution, double* lower,
                                    double* upper);

/* χ-function and convex closure of the output entropy at rho. *value is
 * in nats; *report (optional) holds the formatted result. */
HOLEVO_API hl_status hl_chi_function(const hl_channel* phi, const hl_state* rho, const hl_options* opts,
                                     const hl_format* fmt, double* value, char** report);
HOLEVO_API hl_status hl_hhat(const hl_channel* phi, const hl_state* rho, const hl_options* opts,
                             const hl_format* fmt, double* value, char** report);

/* Additivity instance. *converged is nonzero when all three solves met
 * the tolerance. */
HOLEVO_API hl_status hl_additivity(const hl_channel* phi, const hl_constraint* a, const hl_channel* psi,
                                   const hl_constraint* b, const hl_options* opts, const hl_format* fmt,
                                   double* gap, int* converged, char** report);

/* Classical-family discontinuity table for the given n values. *converged as
 * above. */
HOLEVO_API hl_status hl_discontinuity(const int* n_values, size_t count, double c_target, const hl_options* opts,
                                      const hl_format* fmt, int* converged, char** report);

/* Invariant suites; *all_passed is nonzero when every case passed. */
HOLEVO_API hl_status hl_verify(const char* suite, uint64_t seed, int cases, const hl_format* fmt,
                               int* all_passed, char** report);

#ifdef __cplusplus
}
#endif

#endif
