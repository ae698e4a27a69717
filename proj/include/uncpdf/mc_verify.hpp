#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "haar.hpp"
#include "pdf_analytic.hpp"

namespace uncpdf
{
//---------------------------------------------------------------------------//
/*!
 * Outcome of one Monte Carlo comparison.
 *
 * A report with children passes only if its own value is below threshold and
 * every child passes.
 */
struct VerificationReport
{
    enum class Metric
    {
        ks,
        l1,
        tv,
        max_slack,
    };

    std::string test_name;
    std::size_t n_samples{0};
    Metric metric{Metric::ks};
    double value{0};
    double threshold{0};
    bool passed{false};
    std::uint64_t seed{0};
    double runtime_seconds{0};
    std::vector<VerificationReport> children;

    std::string to_json(int indent = 2) const;
};

char const* to_string(VerificationReport::Metric metric);

//! JSON array of reports
std::string reports_to_json(std::vector<VerificationReport> const& reports,
                            int indent = 2);

//---------------------------------------------------------------------------//
/*!
 * Random variable drawn for a comparison: statistics of observables in a
 * Haar-random state of their common dimension.
 */
struct Probe
{
    std::vector<HermitianObservable> observables;
    std::vector<SampleColumn> columns;

    //! <A> of each observable in order
    static Probe expectations(std::vector<HermitianObservable> obs);
    //! Delta A of each observable in order
    static Probe uncertainties(std::vector<HermitianObservable> obs);
    //! (<A>, <A^2>)
    static Probe exp_exp2(HermitianObservable const& obs);
    //! (<A>, Delta A)
    static Probe exp_std(HermitianObservable const& obs);

    int dim() const;
};

struct VerifyOptions
{
    std::uint64_t seed{42};
    std::size_t n_samples{1'000'000};
    int n_workers{SamplerConfig::default_workers()};
    std::size_t bins{100};
    //! Replaces the default threshold of the top-level metric
    std::optional<double> threshold;
};

//! 3 / sqrt(n)
double default_ks_threshold(std::size_t n);
//! 0.02 at n = 4e6 with 100 bins per axis, scaled by bins / sqrt(n)
double default_tv_threshold(std::size_t n, std::size_t bins);
inline constexpr double default_slack_threshold = 1e-9;

//! Exact one-sample KS distance against the analytic CDF
VerificationReport verify_pdf_1d(std::string name,
                                 Pdf1D const& pdf,
                                 Probe const& probe,
                                 VerifyOptions const& opts);

//! KS distance of already drawn samples
double ks_distance(Pdf1D const& pdf, std::vector<double> samples,
                   int n_workers = 1);

/*!
 * Total variation between binned samples and analytic bin masses.
 *
 * Bins span the density's u/v ranges. A child report counts samples farther
 * than one bin from any bin with analytic mass; it passes only when there
 * are none.
 */
VerificationReport verify_joint_2d(std::string name,
                                   Density2D const& density,
                                   Probe const& probe,
                                   VerifyOptions const& opts);

//! Analytic mass of every bin, row-major over (u, v)
std::vector<double> bin_masses(Density2D const& density,
                               std::vector<double> const& u_edges,
                               std::vector<double> const& v_edges,
                               int n_workers = 1);

/*!
 * Constraint slack of singular distributions: |omega - 1| on a surface,
 * linear-constraint residual on a line. A child report checks the density
 * along the constraint (the free-coordinate profile of a line, the uniform
 * first marginal of a surface).
 */
VerificationReport verify_singular(std::string name,
                                   JointDistribution const& dist,
                                   Probe const& probe,
                                   VerifyOptions const& opts);

//---------------------------------------------------------------------------//
// CANONICAL SUITE
//---------------------------------------------------------------------------//

struct SuiteEntry
{
    std::string name;
    std::size_t default_samples;
    std::function<VerificationReport(VerifyOptions const&)> run;
};

//! Positive checks; with impostors=true every analytic object is replaced
//! by its support-doubled version and names gain a "negative/" prefix
std::vector<SuiteEntry> canonical_suite(bool impostors = false);

/*!
 * Run a named suite: "default", "negative", or a single entry name.
 *
 * n_samples overrides every entry's own sample count. Throws
 * InvalidArgument for unknown names.
 */
std::vector<VerificationReport>
run_suite(std::string const& name,
          std::uint64_t seed = 42,
          std::optional<std::size_t> n_samples = std::nullopt,
          int n_workers = SamplerConfig::default_workers());

}  // namespace uncpdf
