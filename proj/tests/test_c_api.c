#include <math.h>
#include <stdio.h>
#include <string.h>

#include "uncpdf/uncpdf.h"

static int failures = 0;

#define EXPECT(cond)                                                      \
    do                                                                    \
    {                                                                     \
        if (!(cond))                                                      \
        {                                                                 \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                   \
        }                                                                 \
    } while (0)

static void observables(void)
{
    const double spec[] = {9, 1, 3};
    unc_observable* obs = NULL;
    EXPECT(unc_observable_from_spectrum(spec, 3, &obs) == UNC_OK);
    int dim = 0;
    EXPECT(unc_observable_dim(obs, &dim) == UNC_OK && dim == 3);
    double sorted[3];
    size_t count = 0;
    EXPECT(unc_observable_spectrum(obs, sorted, 3, &count) == UNC_OK);
    EXPECT(count == 3 && sorted[0] == 1 && sorted[2] == 9);
    double mv = 0;
    EXPECT(unc_max_variance(obs, &mv) == UNC_OK && fabs(mv - 16) < 1e-12);

    char* json = NULL;
    EXPECT(unc_observable_to_json(obs, &json) == UNC_OK);
    unc_observable* again = NULL;
    EXPECT(unc_observable_from_json(json, &again) == UNC_OK);
    char* json2 = NULL;
    EXPECT(unc_observable_to_json(again, &json2) == UNC_OK);
    EXPECT(strcmp(json, json2) == 0);
    unc_string_free(json);
    unc_string_free(json2);
    unc_observable_free(again);
    unc_observable_free(obs);

    /* Status codes and thread-local messages */
    const double re[] = {1, 2, 0, 1};
    EXPECT(unc_observable_from_matrix(re, NULL, 2, &obs) == UNC_ERR_NOT_HERMITIAN);
    EXPECT(strlen(unc_last_error()) > 0);
    EXPECT(unc_observable_from_json("{", &obs) == UNC_ERR_PARSE);
    EXPECT(unc_observable_from_json(NULL, &obs) == UNC_ERR_INVALID_ARGUMENT);
    EXPECT(unc_observable_read_file("/nonexistent.json", &obs) == UNC_ERR_IO);
    EXPECT(strcmp(unc_status_name(UNC_ERR_WRONG_VARIANT), "WrongVariant") == 0);
}

static void densities(void)
{
    const double spec[] = {1, 3, 9, 27};
    unc_observable* obs = NULL;
    unc_observable_from_spectrum(spec, 4, &obs);
    unc_pdf* pdf = NULL;
    EXPECT(unc_pdf_create(UNC_PDF_UNCERTAINTY, obs, &pdf) == UNC_OK);
    double lo = 0, hi = 0, mass = 0;
    EXPECT(unc_pdf_support(pdf, &lo, &hi) == UNC_OK && lo == 0 && hi == 13);
    EXPECT(unc_pdf_total_mass(pdf, &mass) == UNC_OK && fabs(mass - 1) < 1e-9);
    double breaks[8];
    size_t n = 0;
    EXPECT(unc_pdf_breakpoints(pdf, breaks, 8, &n) == UNC_OK && n == 6);
    EXPECT(breaks[0] == 1 && breaks[2] == 4 && breaks[5] == 13);
    char* csv = NULL;
    EXPECT(unc_pdf_grid_csv(pdf, "0:13:650", &csv) == UNC_OK);
    size_t lines = 0;
    for (const char* p = csv; *p; ++p)
        lines += (*p == '\n');
    EXPECT(lines == 651);
    unc_string_free(csv);
    EXPECT(unc_pdf_grid_csv(pdf, "0:13", &csv) == UNC_ERR_PARSE);
    unc_pdf_free(pdf);

    const double five[] = {1, 2, 3, 4, 5};
    unc_observable* big = NULL;
    unc_observable_from_spectrum(five, 5, &big);
    EXPECT(unc_pdf_create(UNC_PDF_UNCERTAINTY, big, &pdf)
           == UNC_ERR_UNSUPPORTED_DIMENSION);
    EXPECT(unc_pdf_create(UNC_PDF_EXPECTATION, big, &pdf) == UNC_OK);
    double v = 0;
    int singular = 0;
    EXPECT(unc_pdf_eval(pdf, 3, &v, &singular) == UNC_OK && v > 0 && !singular);
    unc_pdf_free(pdf);
    unc_observable_free(big);

    unc_joint* joint = NULL;
    const unc_observable* one[] = {obs};
    EXPECT(unc_joint_create(UNC_JOINT_EXP_EXP2, one, 1, &joint) == UNC_OK);
    const char* variant = NULL;
    EXPECT(unc_joint_variant(joint, &variant) == UNC_OK);
    EXPECT(strcmp(variant, "density") == 0);
    EXPECT(unc_joint_describe(joint, NULL, &csv) == UNC_OK);
    unc_string_free(csv);
    EXPECT(unc_joint_profile_csv(joint, NULL, &csv) == UNC_ERR_WRONG_VARIANT);
    unc_joint_free(joint);
    unc_observable_free(obs);
}

static void qubits(void)
{
    unc_observable *x = NULL, *y = NULL, *z = NULL, *z2 = NULL;
    unc_observable_from_qubit(0, 1, 0, 0, &x);
    unc_observable_from_qubit(0, 0, 1, 0, &y);
    unc_observable_from_qubit(0, 0, 0, 1, &z);
    unc_observable_from_qubit(0, 0, 0, 2, &z2);

    const unc_observable* xz[] = {x, z};
    unc_joint* joint = NULL;
    EXPECT(unc_joint_create(UNC_JOINT_UNCERTAINTIES, xz, 2, &joint) == UNC_OK);
    double f = 0;
    EXPECT(unc_joint_eval(joint, 0.9, 0.9, &f) == UNC_OK);
    EXPECT(fabs(f - 3.44683) < 1e-4);
    unc_joint_free(joint);

    const unc_observable* coll[] = {z, z2};
    EXPECT(unc_joint_create(UNC_JOINT_UNCERTAINTIES, coll, 2, &joint) == UNC_OK);
    const char* variant = NULL;
    unc_joint_variant(joint, &variant);
    EXPECT(strcmp(variant, "line_singular") == 0);
    EXPECT(unc_joint_eval(joint, 0.5, 1, &f) == UNC_ERR_WRONG_VARIANT);
    char* text = NULL;
    EXPECT(unc_joint_profile_csv(joint, "0:1:11", &text) == UNC_OK);
    EXPECT(strncmp(text, "x,f\n", 4) == 0);
    unc_string_free(text);
    unc_joint_free(joint);

    const unc_observable* xyz[] = {x, y, z};
    EXPECT(unc_joint_create(UNC_JOINT_EXPECTATIONS, xyz, 3, &joint) == UNC_OK);
    unc_joint_variant(joint, &variant);
    EXPECT(strcmp(variant, "surface_singular") == 0);
    unc_joint_free(joint);

    int inside = -1;
    const double in_pt[] = {1, 0.2};
    const double out_pt[] = {0.5, 0.5};
    EXPECT(unc_region_contains(xz, 2, in_pt, 1e-9, &inside) == UNC_OK && inside == 1);
    EXPECT(unc_region_contains(xz, 2, out_pt, 1e-9, &inside) == UNC_OK && inside == 0);
    double upper[2];
    EXPECT(unc_region_supercube(xz, 2, upper) == UNC_OK && upper[0] == 1);

    char* json = NULL;
    EXPECT(unc_minimize(UNC_SUM_OF_VARIANCES, NULL, 2, xz, 2, 42, &json) == UNC_OK);
    EXPECT(strstr(json, "\"witness_bloch\"") != NULL);
    unc_string_free(json);
    const double w[] = {1};
    EXPECT(unc_minimize(UNC_WEIGHTED, w, 2, xz, 1, 42, &json) == UNC_OK);
    unc_string_free(json);

    EXPECT(unc_sample_csv(xz, 2, UNC_STAT_STDDEV, 42, 10, 2, &json) == UNC_OK);
    EXPECT(strncmp(json, "std1,std2\n", 10) == 0);
    unc_string_free(json);

    unc_observable_free(x);
    unc_observable_free(y);
    unc_observable_free(z);
    unc_observable_free(z2);
}

static void suites_and_figures(void)
{
    char* json = NULL;
    int ok = 0;
    EXPECT(unc_verify_suite("singular/pauli_triple", 42, 2000, 0, &json, &ok) == UNC_OK);
    EXPECT(ok == 1);
    unc_string_free(json);
    EXPECT(unc_verify_suite("negative/singular/pauli_triple", 42, 2000, 0, &json, &ok)
           == UNC_OK);
    EXPECT(ok == 0);
    unc_string_free(json);
    EXPECT(unc_verify_suite("bogus", 42, 0, 0, &json, &ok) == UNC_ERR_INVALID_ARGUMENT);

    unc_figure* fig = NULL;
    EXPECT(unc_figure_create("fig2b", &fig) == UNC_OK);
    EXPECT(unc_figure_count(fig) == 2);
    EXPECT(strcmp(unc_figure_name(fig, 1), "fig2b_breakpoints.csv") == 0);
    EXPECT(strcmp(unc_figure_content(fig, 1), "x\n1\n3\n4\n9\n12\n13\n") == 0);
    EXPECT(unc_figure_name(fig, 2) == NULL);
    unc_figure_free(fig);
    EXPECT(unc_figure_create("fig9", &fig) == UNC_ERR_INVALID_ARGUMENT);
}

int main(void)
{
    observables();
    densities();
    qubits();
    suites_and_figures();
    if (failures)
    {
        fprintf(stderr, "%d failure(s)\n", failures);
        return 1;
    }
    printf("c api: all checks passed\n");
    return 0;
}
