#ifndef FLEXHULL_FLEXHULL_H
#define FLEXHULL_FLEXHULL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FH_API __declspec(dllexport)
#else
#define FH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fh_status {
  FH_OK = 0,
  FH_ERR_INVALID_ARGUMENT = 1,
  FH_ERR_CONFIG = 2,
  FH_ERR_SOLVER = 3,
  FH_ERR_DISCRETE_DOMAIN = 4,
  FH_ERR_BETA_OUTSIDE_DOMAIN = 5,
  FH_ERR_DEGREE_MISMATCH = 6,
  FH_ERR_PROTOTYPE_MISMATCH = 7,
  FH_ERR_IO = 8,
  FH_ERR_INTERNAL = 9
} fh_status;

typedef struct fh_domain fh_domain;
typedef struct fh_prototype fh_prototype;
typedef struct fh_report fh_report;

/* A homothet alpha * F0 + beta; the prototype travels separately. */
typedef struct fh_homothet {
  double alpha;
  double beta[2];
} fh_homothet;

typedef struct fh_fit_options {
  int certificate_degree; /* 0 = automatic */
  int max_basis_degree;
  double bisection_tol;
  double epsilon_step;
  int max_outer_iters;
  double binding_slack;
  uint64_t seed;
  int has_beta_init;
  double beta_init[2];
} fh_fit_options;

/* Message for the last failing call on this thread; "" after success. */
FH_API const char* fh_last_error(void);
FH_API const char* fh_status_name(fh_status status);
FH_API const char* fh_version(void);

FH_API void fh_fit_options_default(fh_fit_options* opts);

FH_API fh_status fh_domain_battery(double p_max, double s, fh_domain** out);
FH_API fh_status fh_domain_pv(double p_max, double s, fh_domain** out);
FH_API fh_status fh_domain_wind(double p_max, double p0, double q0, double s1, double s2, double rotor_coupling,
                                fh_domain** out);
FH_API fh_status fh_domain_ac(double p_max, double gamma, fh_domain** out);
/* DER JSON: {"type": ..., "params": {...}}. */
FH_API fh_status fh_domain_from_json(const char* json, fh_domain** out);
FH_API void fh_domain_free(fh_domain* d);
FH_API fh_status fh_domain_contains(const fh_domain* d, double p, double q, double tol, int* out);
FH_API fh_status fh_domain_is_discrete(const fh_domain* d, int* out);
/* box = {p_min, p_max, q_min, q_max} */
FH_API fh_status fh_domain_bounding_box(const fh_domain* d, double box[4]);

FH_API fh_status fh_prototype_regular(int n_edges, double rotation, fh_prototype** out);
/* normals: n rows of (a_p, a_q), row-major. */
FH_API fh_status fh_prototype_custom(const double* normals, const double* offsets, size_t n, fh_prototype** out);
FH_API void fh_prototype_free(fh_prototype* proto);
FH_API fh_status fh_prototype_edge_count(const fh_prototype* proto, size_t* out);
/* vertices: capacity 2 * edge_count doubles, CCW (p, q) pairs. */
FH_API fh_status fh_prototype_vertices(const fh_prototype* proto, double* vertices, size_t capacity);

FH_API fh_status fh_fit_outer(const fh_domain* d, const fh_prototype* proto, const fh_fit_options* opts,
                              fh_homothet* out);
FH_API fh_status fh_check_inner(const fh_domain* d, const fh_prototype* proto, const fh_homothet* h,
                                const fh_fit_options* opts, int* certified);
FH_API fh_status fh_fit_inner(const fh_domain* d, const fh_prototype* proto, const fh_fit_options* opts,
                              fh_report** out);
FH_API void fh_report_free(fh_report* r);
FH_API fh_status fh_report_homothet(const fh_report* r, fh_homothet* out);
FH_API fh_status fh_report_iterations(const fh_report* r, int* out);
FH_API fh_status fh_report_monotonic(const fh_report* r, int* out);
/* Copies up to capacity entries; *count receives the full length. */
FH_API fh_status fh_report_alpha_trace(const fh_report* r, double* values, size_t capacity, size_t* count);
FH_API fh_status fh_report_binding_edges(const fh_report* r, int* edges, size_t capacity, size_t* count);

/* All homothets are over the same prototype. */
FH_API fh_status fh_aggregate(const fh_homothet* hs, size_t n, fh_homothet* out);
FH_API fh_status fh_distance_metric(const fh_prototype* proto, const fh_homothet* outer, const fh_homothet* inner,
                                    double* out);
FH_API fh_status fh_area_metric(const fh_prototype* proto, const fh_homothet* outer, const fh_homothet* inner,
                                double* out);

typedef struct fh_run_options {
  const char* command; /* fit | aggregate | oracle | emit-plots */
  const char* config_path;
  const char* out_dir; /* NULL: config "outputs" */
  int jobs;
  int has_seed;
  uint64_t seed;
  size_t der_index; /* fit only */
} fh_run_options;

/* Batch run; returns the process exit code (0 ok, 1 config, 2 solver). */
FH_API int fh_run(const fh_run_options* opts);

#ifdef __cplusplus
}
#endif

#endif
