#ifndef UNCPDF_H
#define UNCPDF_H

/*
 * C interface to the uncertainty-PDF library.
 *
 * Every function returns a status code; on failure a message is available
 * from unc_last_error() on the calling thread. Objects are opaque handles
 * released with the matching *_free function. Strings returned through
 * char** outputs are owned by the caller and released with unc_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#    define UNC_API __declspec(dllexport)
#else
#    define UNC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum unc_status
{
    UNC_OK = 0,
    UNC_ERR_NOT_HERMITIAN = 1,
    UNC_ERR_DIM_MISMATCH = 2,
    UNC_ERR_DIM_TOO_SMALL = 3,
    UNC_ERR_DEGENERATE_SPECTRUM = 4,
    UNC_ERR_SINGULAR_GRAM = 5,
    UNC_ERR_NON_MONOTONE_EDGES = 6,
    UNC_ERR_WRONG_VARIANT = 7,
    UNC_ERR_NON_QUBIT = 8,
    UNC_ERR_UNSUPPORTED_DIMENSION = 9,
    UNC_ERR_INVALID_ARGUMENT = 10,
    UNC_ERR_PARSE = 11,
    UNC_ERR_IO = 12,
    UNC_ERR_INTERNAL = 13
} unc_status;

typedef struct unc_observable unc_observable;
typedef struct unc_pdf unc_pdf;
typedef struct unc_joint unc_joint;
typedef struct unc_figure unc_figure;

typedef enum unc_pdf_kind
{
    UNC_PDF_EXPECTATION = 0,
    UNC_PDF_UNCERTAINTY = 1
} unc_pdf_kind;

typedef enum unc_joint_kind
{
    /* qubit pairs and triples */
    UNC_JOINT_EXPECTATIONS = 0,
    UNC_JOINT_UNCERTAINTIES = 1,
    /* single observable of dimension 3 or 4 */
    UNC_JOINT_EXP_EXP2 = 2,
    UNC_JOINT_EXP_STD = 3
} unc_joint_kind;

typedef enum unc_objective
{
    UNC_SUM_OF_VARIANCES = 0,
    UNC_SUM_OF_STDDEVS = 1,
    UNC_WEIGHTED = 2
} unc_objective;

typedef enum unc_statistic
{
    UNC_STAT_EXPECTATION = 0,
    UNC_STAT_STDDEV = 1
} unc_statistic;

/* Errors and memory */
UNC_API const char* unc_last_error(void);
UNC_API const char* unc_status_name(unc_status status);
UNC_API const char* unc_version(void);
UNC_API void unc_string_free(char* str);

/* Observables */
UNC_API unc_status unc_observable_from_spectrum(const double* values,
                                                size_t n,
                                                unc_observable** out);
UNC_API unc_status unc_observable_from_qubit(double a0,
                                             double ax,
                                             double ay,
                                             double az,
                                             unc_observable** out);
/* Row-major d x d real and imaginary parts; im may be NULL */
UNC_API unc_status unc_observable_from_matrix(const double* re,
                                              const double* im,
                                              size_t d,
                                              unc_observable** out);
UNC_API unc_status unc_observable_from_json(const char* json,
                                            unc_observable** out);
UNC_API unc_status unc_observable_read_file(const char* path,
                                            unc_observable** out);
UNC_API unc_status unc_observable_to_json(const unc_observable* obs,
                                          char** out);
UNC_API unc_status unc_observable_dim(const unc_observable* obs, int* out);
/* Sorted eigenvalues; count receives the dimension */
UNC_API unc_status unc_observable_spectrum(const unc_observable* obs,
                                           double* buf,
                                           size_t capacity,
                                           size_t* count);
UNC_API unc_status unc_max_variance(const unc_observable* obs, double* out);
UNC_API void unc_observable_free(unc_observable* obs);

/* One-dimensional densities */
UNC_API unc_status unc_pdf_create(unc_pdf_kind kind,
                                  const unc_observable* obs,
                                  unc_pdf** out);
UNC_API unc_status unc_pdf_eval(const unc_pdf* pdf,
                                double x,
                                double* value,
                                int* singular);
UNC_API unc_status unc_pdf_cdf(const unc_pdf* pdf, double x, double* out);
UNC_API unc_status unc_pdf_total_mass(const unc_pdf* pdf, double* out);
UNC_API unc_status unc_pdf_support(const unc_pdf* pdf, double* lo, double* hi);
UNC_API unc_status unc_pdf_breakpoints(const unc_pdf* pdf,
                                       double* buf,
                                       size_t capacity,
                                       size_t* count);
/* grid "lo:hi:n"; NULL spans the support with 201 points */
UNC_API unc_status unc_pdf_grid_csv(const unc_pdf* pdf,
                                    const char* grid,
                                    char** out);
UNC_API void unc_pdf_free(unc_pdf* pdf);

/* Joint distributions */
UNC_API unc_status unc_joint_create(unc_joint_kind kind,
                                    const unc_observable* const* obs,
                                    size_t n_obs,
                                    unc_joint** out);
/* "density", "line_singular" or "surface_singular"; static storage */
UNC_API unc_status unc_joint_variant(const unc_joint* joint, const char** out);
UNC_API unc_status unc_joint_eval(const unc_joint* joint,
                                  double u,
                                  double v,
                                  double* out);
UNC_API unc_status unc_joint_total_mass(const unc_joint* joint, double* out);
/* grid "lo:hi:n,lo:hi:n"; NULL spans the support with 101 x 101 points */
UNC_API unc_status unc_joint_grid_csv(const unc_joint* joint,
                                      const char* grid,
                                      char** out);
/* JSON description of a singular variant; profile_ref may be NULL */
UNC_API unc_status unc_joint_describe(const unc_joint* joint,
                                      const char* profile_ref,
                                      char** out);
/* Profile of a line distribution; grid may be NULL */
UNC_API unc_status unc_joint_profile_csv(const unc_joint* joint,
                                         const char* grid,
                                         char** out);
UNC_API void unc_joint_free(unc_joint* joint);

/* Regions */
/*
 * One observable: point is (<A>, Delta A) against the support.
 * Two or three qubit observables: point is the uncertainty tuple.
 */
UNC_API unc_status unc_region_contains(const unc_observable* const* obs,
                                       size_t n_obs,
                                       const double* point,
                                       double tol,
                                       int* inside);
/* Upper corner (max - min) / 2 per observable; lower corner is 0 */
UNC_API unc_status unc_region_supercube(const unc_observable* const* obs,
                                        size_t n_obs,
                                        double* upper);
/* Boundary polylines of the (<A>, Delta A) support, CSV "curve,r,x" */
UNC_API unc_status unc_region_support_csv(const unc_observable* obs,
                                          size_t points_per_arc,
                                          char** out);
/*
 * JSON {minimum, argmin, witness_bloch | witness_amplitudes, method, ...}.
 * weights (n_obs entries) and exponent are read only for UNC_WEIGHTED.
 * Qubit inputs are minimized globally, others by Haar-seeded restarts.
 */
UNC_API unc_status unc_minimize(unc_objective objective,
                                const double* weights,
                                int exponent,
                                const unc_observable* const* obs,
                                size_t n_obs,
                                uint64_t seed,
                                char** out);

/* Sampling: one column per observable, CSV with 12 significant digits */
UNC_API unc_status unc_sample_csv(const unc_observable* const* obs,
                                  size_t n_obs,
                                  unc_statistic statistic,
                                  uint64_t seed,
                                  size_t n_samples,
                                  int n_workers,
                                  char** out);

/* Monte Carlo verification; n_samples 0 keeps each entry's default,
 * n_workers 0 uses the default worker count. */
UNC_API unc_status unc_verify_suite(const char* suite,
                                    uint64_t seed,
                                    size_t n_samples,
                                    int n_workers,
                                    char** json,
                                    int* all_passed);

/* Figure data */
UNC_API unc_status unc_figure_create(const char* which, unc_figure** out);
UNC_API size_t unc_figure_count(const unc_figure* fig);
UNC_API const char* unc_figure_name(const unc_figure* fig, size_t i);
UNC_API const char* unc_figure_content(const unc_figure* fig, size_t i);
UNC_API void unc_figure_free(unc_figure* fig);

#ifdef __cplusplus
}
#endif

#endif
