/*
 * proxsplit: proximal operators and splitting solvers behind a C interface.
 *
 * Conventions
 *   - Every fallible call returns a ps_status; PS_OK is zero. On failure a message for
 *     the calling thread is available from ps_last_error() until the next failing call.
 *   - Arrays are caller-owned, contiguous doubles. Matrices and images are row-major.
 *   - Output arrays must not alias inputs unless stated.
 *   - Handles (ps_linop, ps_function, ps_result) are opaque and released with the
 *     matching *_destroy function. Destroying NULL is a no-op.
 *   - Handles are immutable after creation and may be shared between threads, provided
 *     the user callbacks they wrap are themselves thread-safe.
 */
#ifndef PROXSPLIT_PROXSPLIT_H_
#define PROXSPLIT_PROXSPLIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PROXSPLIT_BUILDING)
#define PS_API __declspec(dllexport)
#else
#define PS_API __declspec(dllimport)
#endif
#else
#define PS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ps_status {
    PS_OK = 0,
    PS_ERR_INVALID_ARGUMENT = 1,
    /* closed-form composed prox requested for an operator that is not a tight frame */
    PS_ERR_UNSUPPORTED_OPERATOR = 2,
    /* function lacks the gradient / prox / L-prox / Lipschitz constant a solver needs */
    PS_ERR_MISSING_CAPABILITY = 3,
    PS_ERR_IO = 4,
    PS_ERR_INTERNAL = 5
} ps_status;

PS_API const char* ps_last_error(void);
PS_API const char* ps_status_string(ps_status status);
PS_API const char* ps_version(void);

/* ---------------------------------------------------------------- linear operators */

typedef struct ps_linop ps_linop;

/* Applies the map to `in` and writes the result to `out`. */
typedef void (*ps_apply_fn)(const double* in, double* out, void* user);

/* forward: R^in_dim -> R^out_dim. nu <= 0 means "unknown"; tight != 0 asserts
 * forward(adjoint(y)) = nu y and requires nu > 0. */
PS_API ps_status ps_linop_create(size_t in_dim, size_t out_dim, ps_apply_fn forward,
                                 ps_apply_fn adjoint, void* user, double nu, int tight,
                                 ps_linop** out);
PS_API ps_status ps_linop_identity(size_t n, ps_linop** out);
PS_API ps_status ps_linop_scaled_identity(size_t n, double scale, ps_linop** out);
/* 0/1 diagonal operator; keep[i] != 0 marks an observed coordinate. */
PS_API ps_status ps_linop_mask(const unsigned char* keep, size_t n, ps_linop** out);
PS_API void ps_linop_destroy(ps_linop* op);
PS_API ps_status ps_linop_apply(const ps_linop* op, const double* x, double* out);
PS_API ps_status ps_linop_apply_adjoint(const ps_linop* op, const double* y, double* out);
/* Max over `trials` seeded random pairs of |<Ax,y> - <x,A^T y>| / (|x| |y|). */
PS_API ps_status ps_linop_check_adjoint(const ps_linop* op, size_t trials, uint64_t seed,
                                        double* discrepancy);

/* ------------------------------------------------------------ proximity operators */

/* Soft threshold; psi may be NULL, otherwise a tight frame or mask of size m x n. */
PS_API ps_status ps_prox_l1(const double* x, size_t n, double tau, const ps_linop* psi,
                            double* out);
/* prox of tau |A v - y|^2; y has length n when a is NULL, a's output size otherwise. */
PS_API ps_status ps_prox_l2_sq(const double* x, size_t n, double tau, const double* y,
                               const ps_linop* a, double* out);
PS_API ps_status ps_prox_linf(const double* x, size_t n, double tau, double* out);
/* group_of[i] in 0..G-1 names the group of coordinate i; every label must be used. */
PS_API ps_status ps_prox_l12(const double* x, size_t n, double tau, const size_t* group_of,
                             double* out);
PS_API ps_status ps_prox_l1inf(const double* x, size_t n, double tau, const size_t* group_of,
                               double* out);

typedef struct ps_tv_params {
    int maxit;       /* default 200 */
    double tol;      /* relative dual change, default 1e-4 */
    int verbosity;   /* 0 silent, 1 summary, 2 per iteration */
} ps_tv_params;

PS_API void ps_tv_params_default(ps_tv_params* params);
/* params may be NULL for defaults. */
PS_API ps_status ps_prox_tv(const double* img, size_t rows, size_t cols, double tau,
                            const ps_tv_params* params, double* out);
PS_API ps_status ps_tv_norm(const double* img, size_t rows, size_t cols, double* value);
PS_API ps_status ps_prox_nuclear(const double* mat, size_t rows, size_t cols, double tau,
                                 double* out);

/* -------------------------------------------------------------------- projections */

PS_API ps_status ps_proj_b1(const double* x, size_t n, double epsilon, double* out);
/* Projection onto {v : |A v - y| <= epsilon}; a may be NULL (identity). */
PS_API ps_status ps_proj_b2(const double* x, size_t n, double epsilon, const double* y,
                            const ps_linop* a, double* out);

/* ---------------------------------------------------------------- function objects */

typedef struct ps_function ps_function;

/* Return +INFINITY outside the domain. */
typedef double (*ps_eval_fn)(const double* x, size_t n, void* user);
typedef void (*ps_grad_fn)(const double* x, size_t n, double* out, void* user);
/* argmin_y 1/2 |x - y|^2 + tau f(y). For prox_composed: argmin_x tau f(x) + 1/2 |Lx - z|^2
 * where z has length m (L's output size) and out has length n. */
typedef void (*ps_prox_fn)(const double* x, size_t n, double tau, double* out, void* user);

typedef struct ps_function_callbacks {
    ps_eval_fn eval;          /* required */
    ps_grad_fn grad;          /* optional */
    ps_prox_fn prox;          /* optional */
    ps_prox_fn prox_composed; /* optional; used by ps_admm */
    size_t composed_input_dim; /* length of z passed to prox_composed (0: same as n) */
    double lipschitz;         /* gradient Lipschitz constant, <= 0 when unknown */
} ps_function_callbacks;

PS_API ps_status ps_function_create(size_t n, const ps_function_callbacks* callbacks,
                                    void* user, ps_function** out);
PS_API ps_status ps_function_l1(size_t n, double weight, ps_function** out);
PS_API ps_status ps_function_linf(size_t n, double weight, ps_function** out);
/* weight |A x - y|^2; a may be NULL. Carries a gradient, a Lipschitz constant and, for
 * tight or mask operators, a prox. */
PS_API ps_status ps_function_l2_sq(size_t n, double weight, const double* y, size_t m,
                                   const ps_linop* a, ps_function** out);
PS_API ps_status ps_function_tv(size_t rows, size_t cols, double weight,
                                const ps_tv_params* params, ps_function** out);
PS_API ps_status ps_function_nuclear(size_t rows, size_t cols, double weight, ps_function** out);
/* Indicator of {|x|_1 <= epsilon}. */
PS_API ps_status ps_function_ball_b1(size_t n, double epsilon, ps_function** out);
/* Indicator of {|A x - y|_2 <= epsilon}; a may be NULL, y has length m. */
PS_API ps_status ps_function_ball_b2(size_t n, double epsilon, const double* y, size_t m,
                                     const ps_linop* a, ps_function** out);
PS_API void ps_function_destroy(ps_function* f);

PS_API size_t ps_function_dimension(const ps_function* f);
PS_API ps_status ps_function_eval(const ps_function* f, const double* x, double* value);
PS_API ps_status ps_function_grad(const ps_function* f, const double* x, double* out);
PS_API ps_status ps_function_prox(const ps_function* f, const double* x, double tau, double* out);

/* ------------------------------------------------------------------------ solvers */

typedef enum ps_method { PS_METHOD_ISTA = 0, PS_METHOD_FISTA = 1 } ps_method;
typedef enum ps_stop_reason { PS_STOP_TOLERANCE = 0, PS_STOP_MAX_ITERATIONS = 1 } ps_stop_reason;

typedef struct ps_params {
    double gamma;   /* default 1 */
    double lambda;  /* default 1 */
    double tol;     /* default 1e-4 */
    int maxit;      /* default 200 */
    int verbosity;  /* 0 silent, 1 summary, 2 per iteration */
    ps_method method; /* forward-backward only, default FISTA */
} ps_params;

PS_API void ps_params_default(ps_params* params);

typedef struct ps_result ps_result;

/* NULL params means defaults. */
PS_API ps_status ps_forward_backward(const double* x0, size_t n, const ps_function* f1,
                                     const ps_function* f2, const ps_params* params,
                                     ps_result** out);
PS_API ps_status ps_douglas_rachford(const double* x0, size_t n, const ps_function* f1,
                                     const ps_function* f2, const ps_params* params,
                                     ps_result** out);
/* min f1(x) + f2(L x); l NULL means identity. f2 lives on L's output space. */
PS_API ps_status ps_admm(const double* x0, size_t n, const ps_function* f1,
                         const ps_function* f2, const ps_linop* l, const ps_params* params,
                         ps_result** out);
/* min sum_k f_k(x), k >= 2. */
PS_API ps_status ps_solve_sum(const double* x0, size_t n, const ps_function* const* functions,
                              size_t count, const ps_params* params, ps_result** out);

PS_API void ps_result_destroy(ps_result* r);
PS_API size_t ps_result_dimension(const ps_result* r);
PS_API void ps_result_solution(const ps_result* r, double* out);
PS_API size_t ps_result_iterations(const ps_result* r);
/* Writes ps_result_iterations() objective values. */
PS_API void ps_result_trace(const ps_result* r, double* out);
PS_API ps_stop_reason ps_result_stop_reason(const ps_result* r);
/* Douglas-Rachford y iterate / ADMM split variable; 0 length when not applicable. */
PS_API size_t ps_result_auxiliary_dimension(const ps_result* r);
PS_API void ps_result_auxiliary(const ps_result* r, double* out);

/* ----------------------------------------------------------------- inpainting demo */

typedef struct ps_demo_config {
    size_t rows;     /* default 64 */
    size_t cols;     /* default 64 */
    double p;        /* keep probability, default 0.5 */
    double sigma;    /* noise std, default 20/255 */
    double lambda;   /* default 10 */
    int maxit;       /* default 100 */
    double tol;      /* default 1e-5 */
    uint64_t seed;   /* default 1 */
    int verbosity;   /* default 0 */
} ps_demo_config;

typedef struct ps_demo_summary {
    double epsilon;
    size_t mask_kept;
    double constraint_norm_p1_dr;
    double snr_observed;
    double snr_p1_dr;
    double snr_p2_fb;
    double snr_p2_dr;
    size_t iterations_p1_dr;
    size_t iterations_p2_fb;
    size_t iterations_p2_dr;
    ps_stop_reason stop_p1_dr;
    ps_stop_reason stop_p2_fb;
    ps_stop_reason stop_p2_dr;
} ps_demo_summary;

PS_API void ps_demo_config_default(ps_demo_config* cfg);
/* Runs the three restorations and writes the PGM/CSV/summary files into outdir (created
 * if missing). summary may be NULL. */
PS_API ps_status ps_demo_inpaint(const ps_demo_config* cfg, const char* outdir,
                                 ps_demo_summary* summary);

/* ------------------------------------------------------------------------ selftest */

typedef void (*ps_report_fn)(const char* name, int passed, const char* detail, double seconds,
                             void* user);

/* Runs the oracle suites, reporting each as it completes. Returns the number of failed
 * suites (0 on success) or -1 on an internal error. */
PS_API int ps_selftest_run(ps_report_fn report, void* user);

#ifdef __cplusplus
}
#endif

#endif /* PROXSPLIT_PROXSPLIT_H_ */
