#ifndef FLEVY_FLEVY_H
#define FLEVY_FLEVY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FLEVY_API __declspec(dllexport)
#elif defined(__GNUC__)
#define FLEVY_API __attribute__((visibility("default")))
#else
#define FLEVY_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum flevy_status {
  FLEVY_OK = 0,
  FLEVY_INVALID_PARAMETER = 1,
  FLEVY_UNSUPPORTED = 2,
  FLEVY_INSUFFICIENT_COVERAGE = 3,
  FLEVY_PRECONDITION_VIOLATION = 4,
  FLEVY_PARSE_ERROR = 5,
  FLEVY_IO_ERROR = 6,
  FLEVY_INTERNAL_ERROR = 7
} flevy_status;

typedef enum flevy_kernel {
  FLEVY_NON_ANTICIPATIVE = 0,
  FLEVY_WELL_BALANCED = 1,
  FLEVY_TAIL_PART = 2,
  FLEVY_RIEMANN_LIOUVILLE = 3
} flevy_kernel;

typedef struct flevy_model flevy_model;
typedef struct flevy_config flevy_config;
typedef struct flevy_path flevy_path;

FLEVY_API const char* flevy_version(void);
/* Message of the last failed call on this thread; "" after success. */
FLEVY_API const char* flevy_last_error(void);
FLEVY_API const char* flevy_status_string(flevy_status s);
/* Caps worker threads; 0 removes the cap. FLEVY_THREADS applies as well. */
FLEVY_API void flevy_set_threads(unsigned n);
/* Frees strings returned through char** outputs. */
FLEVY_API void flevy_string_free(char* s);

/* Models: {"sigma": .., "gamma": .., "mean_zero": .., "jumps": [{"type": ..}, ..]} */
FLEVY_API flevy_status flevy_model_from_json(const char* json, flevy_model** out);
FLEVY_API flevy_status flevy_model_to_json(const flevy_model* m, char** out);
FLEVY_API void flevy_model_free(flevy_model* m);
FLEVY_API flevy_status flevy_model_moments(const flevy_model* m, double* mean, double* variance);
FLEVY_API flevy_status flevy_tail_mass(const flevy_model* m, double x, double* out);
/* +inf when the integral diverges. */
FLEVY_API flevy_status flevy_abs_moment(const flevy_model* m, double p, double lo, double hi, double* out);
/* Increments of the driver on [r_min, t_max] with step h; n_out = cell count. */
FLEVY_API flevy_status flevy_sample_increments(const flevy_model* m, double r_min, double t_max, double h,
                                               uint64_t seed, double* out, size_t capacity, size_t* n_out);

/* Finite-variation criterion: *finite is 1 or 0, moment may be +inf. */
FLEVY_API flevy_status flevy_fv_criterion(const flevy_model* m, double d, int* finite, double* moment);
FLEVY_API flevy_status flevy_criterion_json(const flevy_model* m, double d, char** out);
FLEVY_API flevy_status flevy_stable_threshold(double d, double* out);

FLEVY_API flevy_status flevy_kernel_weight(flevy_kernel kind, double d, double t, double s, double* out);
FLEVY_API flevy_status flevy_truncation_radius(double d, double t_max, double second_moment, double tol,
                                               double* out);
/* One path of the chosen process on the grid nodes 0, h, .., t_max. */
FLEVY_API flevy_status flevy_synthesize(const flevy_model* m, flevy_kernel kind, double d, double t_max,
                                        double h, double tol, uint64_t seed, flevy_path** out);
FLEVY_API size_t flevy_path_length(const flevy_path* p);
FLEVY_API flevy_status flevy_path_data(const flevy_path* p, double* times, double* values, size_t capacity);
FLEVY_API flevy_status flevy_path_truncation_error(const flevy_path* p, double* out);
FLEVY_API void flevy_path_free(flevy_path* p);

/* values holds the 2^depth + 1 dyadic nodes. */
FLEVY_API flevy_status flevy_dyadic_tv(const double* values, size_t n, int depth, double* out);
/* estimate is +inf, stderr 0, when the criterion fails. */
FLEVY_API flevy_status flevy_expected_tv(const flevy_model* m, double d, double a, double b, size_t draws,
                                         uint64_t seed, double* estimate, double* std_error);

FLEVY_API flevy_status flevy_mean_abs_bound(const flevy_model* m, double eps, double* out);
FLEVY_API flevy_status flevy_nu_rt_tail(const flevy_model* m, double r, double t, double d, double u, double* out);
FLEVY_API flevy_status flevy_bound_c2(const flevy_model* m, double d, double r, double a, double* lhs, double* rhs);
FLEVY_API flevy_status flevy_bound_c3(const flevy_model* m, double d, double r, double a, double* lhs, double* rhs);
FLEVY_API flevy_status flevy_fd_tv_bound(const flevy_model* m, double d, double b, double* out);

/* Run configuration; keys missing from the JSON take their defaults. */
FLEVY_API flevy_status flevy_config_from_json(const char* json, flevy_config** out);
FLEVY_API flevy_status flevy_config_to_json(const flevy_config* c, char** out);
FLEVY_API void flevy_config_free(flevy_config* c);
/* command: simulate | check | tv | bounds | verify. exit_code follows the CLI
   contract (0 pass, 1 criterion failure, 2 usage, 3 infinite variation); the
   human-readable report goes to *report when it is not NULL. */
FLEVY_API flevy_status flevy_run_command(const char* command, const flevy_config* c, int* exit_code,
                                         char** report);

#ifdef __cplusplus
}
#endif

#endif
