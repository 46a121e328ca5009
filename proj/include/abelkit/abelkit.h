/* C interface to abelkit.
 *
 * Every call returns an abk_status. On failure the calling thread's last
 * error is set; read it with abk_last_error_message() or, as a JSON object
 * {"code", "message", ...details}, with abk_last_error_json(). Strings
 * handed out through char** parameters are owned by the caller and released
 * with abk_string_free(). Handles are released with their *_free function;
 * passing NULL to any *_free is a no-op. */
#ifndef ABELKIT_H
#define ABELKIT_H

#include <stddef.h>

#if defined(_WIN32)
#define ABK_API __declspec(dllexport)
#else
#define ABK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum abk_status {
  ABK_OK = 0,
  ABK_INVALID_INPUT = 1,
  ABK_SINGULARITY = 2,
  ABK_PRECONDITION = 3,
  ABK_BLOW_UP = 4,
  ABK_QUADRATURE = 5,
  ABK_OUT_OF_RANGE = 6,
  ABK_INTERNAL_CONSISTENCY = 7,
  ABK_PARSE = 8,
  ABK_IO = 9,
  ABK_INTERNAL = 99
} abk_status;

typedef enum abk_format { ABK_CSV = 0, ABK_JSON = 1 } abk_format;

ABK_API const char* abk_version(void);
/* Lower-case name such as "parse" or "blow_up". */
ABK_API const char* abk_status_name(abk_status status);
/* Valid until the next failing call on the same thread. */
ABK_API const char* abk_last_error_message(void);
ABK_API const char* abk_last_error_json(void);
ABK_API void abk_string_free(char* s);

/* --- named parameters bound into expressions ---------------------------- */

typedef struct abk_params abk_params;

ABK_API abk_params* abk_params_new(void);
ABK_API void abk_params_free(abk_params* p);
ABK_API abk_status abk_params_set(abk_params* p, const char* name, double value);

/* --- coefficient expressions in x ---------------------------------------- */

typedef struct abk_expr abk_expr;

/* params may be NULL. Unknown identifiers are parse errors. */
ABK_API abk_status abk_expr_parse(const char* text, const abk_params* params, abk_expr** out);
ABK_API void abk_expr_free(abk_expr* e);
/* derivative may be NULL. */
ABK_API abk_status abk_expr_eval(const abk_expr* e, double x, double* value, double* derivative);
ABK_API abk_status abk_expr_unparse(const abk_expr* e, char** out);

/* --- Abel equations of the first kind ------------------------------------- */

typedef struct abk_equation abk_equation;

/* dy/dx = f0 + f1 y + f2 y^2 + f3 y^3 on (x_min, x_max). The expressions
 * are copied. */
ABK_API abk_status abk_equation_new(const abk_expr* f0, const abk_expr* f1, const abk_expr* f2,
                                    const abk_expr* f3, double x_min, double x_max,
                                    abk_equation** out);
/* The rational-coefficient equation with parameters (a, b). */
ABK_API abk_status abk_equation_vein(double a, double b, double x_min, double x_max,
                                     abk_equation** out);
ABK_API void abk_equation_free(abk_equation* eq);
ABK_API abk_status abk_equation_rhs(const abk_equation* eq, double x, double y, double* out);
/* Max |dy/dx - rhs| of sampled data (n >= 5, xs strictly increasing). */
ABK_API abk_status abk_equation_residual(const abk_equation* eq, const double* xs,
                                         const double* ys, size_t n, double* out);

/* Normal-form invariant, Appell invariant and integrating-factor report. */
ABK_API abk_status abk_analyze(const abk_equation* eq, size_t samples, int unit_normalize,
                               char** json);

/* --- constant coefficients ------------------------------------------------ */

typedef struct abk_solve_const_options {
  double A[4];
  double x0;
  double y0;
  double x_min;
  double x_max;
  size_t samples;
} abk_solve_const_options;

ABK_API void abk_solve_const_options_init(abk_solve_const_options* opt);
ABK_API abk_status abk_solve_const(const abk_solve_const_options* opt, abk_format format,
                                   char** curve, char** summary_json);

/* --- third-order hyperbolic functions -------------------------------------- */

ABK_API abk_status abk_phi_table(double x_min, double x_max, size_t samples, abk_format format,
                                 char** out);

/* --- the rational-coefficient equation and its explicit solutions ---------- */

typedef struct abk_vein_solve_options {
  double a;
  double b;
  double c;
  int family;    /* 1, 2 or 3 */
  long branch;   /* -1: branch with the longest usable window */
  double s_min;
  double s_max;
  int has_window; /* else the branch's default window */
  double x_min;
  double x_max;
  double step;    /* sample spacing when samples == 0 */
  size_t samples;
  double tol;
} abk_vein_solve_options;

ABK_API void abk_vein_solve_options_init(abk_vein_solve_options* opt);
ABK_API abk_status abk_vein_solve(const abk_vein_solve_options* opt, abk_format format,
                                  char** curve, char** summary_json);
/* all_passed may be NULL. */
ABK_API abk_status abk_vein_check(double a, double b, double c, double s_min, double s_max,
                                  double tol, char** json, int* all_passed);

/* --- oscillator phase portraits ------------------------------------------- */

typedef struct abk_portrait_options {
  double a;
  double b;
  int has_x_window;
  double x_min;
  double x_max;
  int has_v_window;
  double v_min;
  double v_max;
  size_t grid_x;
  size_t grid_v;
  double zeta_max; /* 0: one linear period */
  size_t samples_per_direction;
  size_t curve_samples;
  unsigned threads; /* 0: hardware concurrency */
} abk_portrait_options;

ABK_API void abk_portrait_options_init(abk_portrait_options* opt);
ABK_API abk_status abk_oscillator_portrait(const abk_portrait_options* opt, abk_format format,
                                           char** trajectories, char** isoclines,
                                           char** coefficients, char** fixed_points_json);

/* --- acceptance suite ----------------------------------------------------- */

/* {"criteria": [{"id", "name", "passed", "detail"}...], "all_passed"}. */
ABK_API abk_status abk_verify(unsigned threads, char** json, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
