#include "uncpdf/mc_verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

#include "parallel.hpp"

namespace uncpdf
{
namespace
{
using detail::run_workers;
using Clock = std::chrono::steady_clock;

constexpr std::size_t ks_block = 4096;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

nlohmann::ordered_json report_json(VerificationReport const& r)
{
    nlohmann::ordered_json j;
    j["test_name"] = r.test_name;
    j["n_samples"] = r.n_samples;
    j["metric"] = to_string(r.metric);
    j["value"] = r.value;
    j["threshold"] = r.threshold;
    j["passed"] = r.passed;
    j["seed"] = r.seed;
    j["runtime_seconds"] = r.runtime_seconds;
    if (!r.children.empty())
    {
        j["children"] = nlohmann::ordered_json::array();
        for (auto const& c : r.children)
            j["children"].push_back(report_json(c));
    }
    return j;
}

void settle(VerificationReport& r)
{
    r.passed = r.value < r.threshold;
    for (auto const& c : r.children)
        r.passed = r.passed && c.passed;
}

SampleTable draw(Probe const& probe, VerifyOptions const& opts)
{
    if (probe.observables.empty() || probe.columns.empty())
        fail(ErrorCode::invalid_argument, "probe has no observables");
    SamplerConfig cfg;
    cfg.seed = opts.seed;
    cfg.dim = probe.dim();
    cfg.n_samples = opts.n_samples;
    cfg.n_workers = opts.n_workers;
    return sample_statistics(probe.observables, cfg, probe.columns);
}

void require_columns(Probe const& probe, std::size_t n)
{
    if (probe.columns.size() != n)
    {
        fail(ErrorCode::dim_mismatch,
             "probe must have " + std::to_string(n) + " columns");
    }
}

//! Mass of pdf on [a, b], split wherever the density may be singular
double piecewise_mass(Pdf1D const& pdf,
                      std::vector<double> const& cuts,
                      double a,
                      double b)
{
    auto it = std::upper_bound(cuts.begin(), cuts.end(), a);
    double lo = a;
    double total = 0;
    auto f = [&pdf](double x) { return pdf(x); };
    for (; it != cuts.end() && *it < b; ++it)
    {
        total += integrate_endpoint_singular(f, lo, *it, 1e-14, 200);
        lo = *it;
    }
    return total + integrate_endpoint_singular(f, lo, b, 1e-14, 200);
}

VerificationReport ks_report(std::string name,
                             Pdf1D const& pdf,
                             std::vector<double> samples,
                             VerifyOptions const& opts,
                             std::optional<double> threshold)
{
    auto const start = Clock::now();
    VerificationReport r;
    r.test_name = std::move(name);
    r.n_samples = samples.size();
    r.metric = VerificationReport::Metric::ks;
    r.seed = opts.seed;
    r.threshold = threshold.value_or(default_ks_threshold(samples.size()));
    r.value = ks_distance(pdf, std::move(samples), opts.n_workers);
    r.runtime_seconds = seconds_since(start);
    settle(r);
    return r;
}

VerificationReport tv_report(std::string name,
                             Density2D const& density,
                             std::vector<double> const& us,
                             std::vector<double> const& vs,
                             VerifyOptions const& opts,
                             std::optional<double> threshold)
{
    auto const start = Clock::now();
    std::size_t const nb = opts.bins;
    if (nb < 2)
        fail(ErrorCode::invalid_argument, "need at least 2 bins per axis");
    auto const u_edges
        = uniform_edges(density.u_range.lo, density.u_range.hi, nb);
    auto const v_edges
        = uniform_edges(density.v_range.lo, density.v_range.hi, nb);
    auto const masses = bin_masses(density, u_edges, v_edges, opts.n_workers);

    // Counts on the bin grid plus a one-bin halo on every side
    std::size_t const np = nb + 2;
    std::vector<std::uint64_t> counts(np * np, 0);
    std::uint64_t far = 0;
    double const du = density.u_range.width() / static_cast<double>(nb);
    double const dv = density.v_range.width() / static_cast<double>(nb);
    auto index = [nb](double x, double lo, double hi, double w) {
        if (x == hi)
            return static_cast<std::ptrdiff_t>(nb) - 1;
        return static_cast<std::ptrdiff_t>(std::floor((x - lo) / w));
    };
    auto const last = static_cast<std::ptrdiff_t>(nb);
    for (std::size_t i = 0; i < us.size(); ++i)
    {
        auto const iu = index(us[i], density.u_range.lo, density.u_range.hi, du);
        auto const iv = index(vs[i], density.v_range.lo, density.v_range.hi, dv);
        if (iu < -1 || iu > last || iv < -1 || iv > last)
        {
            ++far;
            continue;
        }
        ++counts[static_cast<std::size_t>(iu + 1) * np
                 + static_cast<std::size_t>(iv + 1)];
    }

    auto mass_at = [&](std::ptrdiff_t iu, std::ptrdiff_t iv) {
        if (iu < 0 || iu >= last || iv < 0 || iv >= last)
            return 0.0;
        return masses[static_cast<std::size_t>(iu) * nb
                      + static_cast<std::size_t>(iv)];
    };
    double const n = static_cast<double>(us.size());
    double diff = static_cast<double>(far) / n;
    std::uint64_t stray = far;
    for (std::ptrdiff_t iu = -1; iu <= last; ++iu)
    {
        for (std::ptrdiff_t iv = -1; iv <= last; ++iv)
        {
            auto const c = counts[static_cast<std::size_t>(iu + 1) * np
                                  + static_cast<std::size_t>(iv + 1)];
            diff += std::abs(static_cast<double>(c) / n - mass_at(iu, iv));
            if (c == 0)
                continue;
            bool near = false;
            for (int a = -1; a <= 1 && !near; ++a)
            {
                for (int b = -1; b <= 1 && !near; ++b)
                    near = mass_at(iu + a, iv + b) > 0;
            }
            if (!near)
                stray += c;
        }
    }

    VerificationReport support;
    support.test_name = name + "/support";
    support.n_samples = us.size();
    support.metric = VerificationReport::Metric::l1;
    support.value = static_cast<double>(stray) / n;
    support.threshold = 1 / n;
    support.seed = opts.seed;
    settle(support);

    VerificationReport r;
    r.test_name = std::move(name);
    r.n_samples = us.size();
    r.metric = VerificationReport::Metric::tv;
    r.value = 0.5 * diff;
    r.threshold = threshold.value_or(default_tv_threshold(us.size(), nb));
    r.seed = opts.seed;
    r.children.push_back(std::move(support));
    r.runtime_seconds = seconds_since(start);
    settle(r);
    return r;
}

HermitianObservable diag(std::vector<double> const& values)
{
    return HermitianObservable::diagonal(values);
}

}  // namespace

//---------------------------------------------------------------------------//
// REPORTS
//---------------------------------------------------------------------------//
char const* to_string(VerificationReport::Metric metric)
{
    switch (metric)
    {
        case VerificationReport::Metric::ks:
            return "ks";
        case VerificationReport::Metric::l1:
            return "l1";
        case VerificationReport::Metric::tv:
            return "tv";
        case VerificationReport::Metric::max_slack:
            return "max_slack";
    }
    return "unknown";
}

std::string VerificationReport::to_json(int indent) const
{
    return report_json(*this).dump(indent);
}

std::string reports_to_json(std::vector<VerificationReport> const& reports,
                            int indent)
{
    auto arr = nlohmann::ordered_json::array();
    for (auto const& r : reports)
        arr.push_back(report_json(r));
    return arr.dump(indent);
}

//---------------------------------------------------------------------------//
// PROBES
//---------------------------------------------------------------------------//
Probe Probe::expectations(std::vector<HermitianObservable> obs)
{
    Probe p{std::move(obs), {}};
    for (std::size_t i = 0; i < p.observables.size(); ++i)
        p.columns.push_back({i, Statistic::expectation});
    return p;
}

Probe Probe::uncertainties(std::vector<HermitianObservable> obs)
{
    Probe p{std::move(obs), {}};
    for (std::size_t i = 0; i < p.observables.size(); ++i)
        p.columns.push_back({i, Statistic::std_dev});
    return p;
}

Probe Probe::exp_exp2(HermitianObservable const& obs)
{
    CMatrix const sq = obs.matrix() * obs.matrix();
    HermitianObservable const a2(CMatrix(0.5 * (sq + sq.adjoint())));
    return {{obs, a2}, {{0, Statistic::expectation}, {1, Statistic::expectation}}};
}

Probe Probe::exp_std(HermitianObservable const& obs)
{
    return {{obs}, {{0, Statistic::expectation}, {0, Statistic::std_dev}}};
}

int Probe::dim() const
{
    return observables.empty() ? 0 : observables.front().dim();
}

//---------------------------------------------------------------------------//
// METRICS
//---------------------------------------------------------------------------//
double default_ks_threshold(std::size_t n)
{
    return 3 / std::sqrt(static_cast<double>(n));
}

double default_tv_threshold(std::size_t n, std::size_t bins)
{
    return 0.02 * std::sqrt(4e6 / static_cast<double>(n))
           * (static_cast<double>(bins) / 100);
}

double ks_distance(Pdf1D const& pdf, std::vector<double> samples, int n_workers)
{
    if (samples.empty())
        fail(ErrorCode::invalid_argument, "no samples");
    std::sort(samples.begin(), samples.end());
    std::vector<double> cuts{pdf.support().lo};
    for (double b : pdf.breakpoints())
        cuts.push_back(b);
    for (double s : pdf.singular_points())
        cuts.push_back(s);
    cuts.push_back(pdf.support().hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::size_t const n = samples.size();
    double const inv_n = 1 / static_cast<double>(n);
    std::size_t const blocks = (n + ks_block - 1) / ks_block;
    std::vector<double> block_max(blocks, 0);
    int const workers = std::max(1, n_workers);
    run_workers(workers, [&](int w) {
        for (std::size_t b = static_cast<std::size_t>(w); b < blocks;
             b += static_cast<std::size_t>(workers))
        {
            std::size_t const begin = b * ks_block;
            std::size_t const end = std::min(n, begin + ks_block);
            double cdf = pdf.cdf(samples[begin]);
            double worst = 0;
            for (std::size_t i = begin; i < end; ++i)
            {
                if (i > begin && samples[i] > samples[i - 1])
                    cdf += piecewise_mass(pdf, cuts, samples[i - 1], samples[i]);
                double const above = static_cast<double>(i + 1) * inv_n - cdf;
                double const below = cdf - static_cast<double>(i) * inv_n;
                worst = std::max({worst, above, below});
            }
            block_max[b] = worst;
        }
    });
    return *std::max_element(block_max.begin(), block_max.end());
}

std::vector<double> bin_masses(Density2D const& density,
                               std::vector<double> const& u_edges,
                               std::vector<double> const& v_edges,
                               int n_workers)
{
    std::size_t const nu = u_edges.size() - 1;
    std::size_t const nv = v_edges.size() - 1;
    std::vector<double> out(nu * nv, 0);
    int const workers = std::max(1, n_workers);
    run_workers(workers, [&](int w) {
        for (std::size_t i = static_cast<std::size_t>(w); i < nu;
             i += static_cast<std::size_t>(workers))
        {
            for (std::size_t j = 0; j < nv; ++j)
            {
                out[i * nv + j] = density.mass(u_edges[i], u_edges[i + 1],
                                               v_edges[j], v_edges[j + 1], 1e-8);
            }
        }
    });
    return out;
}

//---------------------------------------------------------------------------//
// VERIFICATIONS
//---------------------------------------------------------------------------//
VerificationReport verify_pdf_1d(std::string name,
                                 Pdf1D const& pdf,
                                 Probe const& probe,
                                 VerifyOptions const& opts)
{
    auto const start = Clock::now();
    require_columns(probe, 1);
    auto const table = draw(probe, opts);
    auto r = ks_report(std::move(name), pdf, table.column(0), opts,
                       opts.threshold);
    r.runtime_seconds = seconds_since(start);
    return r;
}

VerificationReport verify_joint_2d(std::string name,
                                   Density2D const& density,
                                   Probe const& probe,
                                   VerifyOptions const& opts)
{
    auto const start = Clock::now();
    require_columns(probe, 2);
    auto const table = draw(probe, opts);
    auto r = tv_report(std::move(name), density, table.column(0),
                       table.column(1), opts, opts.threshold);
    r.runtime_seconds = seconds_since(start);
    return r;
}

VerificationReport verify_singular(std::string name,
                                   JointDistribution const& dist,
                                   Probe const& probe,
                                   VerifyOptions const& opts)
{
    auto const start = Clock::now();
    if (std::holds_alternative<Density2D>(dist))
    {
        fail(ErrorCode::wrong_variant,
             "verify_singular needs a line or surface distribution");
    }
    auto const table = draw(probe, opts);
    std::size_t const n = table.rows();

    VerificationReport r;
    r.test_name = name;
    r.n_samples = n;
    r.metric = VerificationReport::Metric::max_slack;
    r.threshold = opts.threshold.value_or(default_slack_threshold);
    r.seed = opts.seed;

    std::vector<double> point(table.cols);
    auto row = [&](std::size_t i) {
        for (std::size_t c = 0; c < table.cols; ++c)
            point[c] = table(i, c);
        return std::span<double const>(point);
    };

    if (auto const* surf = std::get_if<SurfaceSingular>(&dist))
    {
        require_columns(probe, 3);
        for (std::size_t i = 0; i < n; ++i)
            r.value = std::max(r.value, std::abs(surf->omega(row(i)) - 1));
        // <A> = a0 + a.u is uniform over [a0 - |a|, a0 + |a|]
        double const c = surf->center[0];
        double const h = std::sqrt(surf->gram(0, 0));
        Pdf1D const uniform(
            "r", [h](double) { return 1 / (2 * h); }, {c - h, c + h}, {});
        r.children.push_back(ks_report(name + "/marginal", uniform,
                                       table.column(0), opts, std::nullopt));
    }
    else
    {
        auto const& line = std::get<LineSingular>(dist);
        if (line.center.size() != table.cols)
            fail(ErrorCode::dim_mismatch, "probe and distribution disagree");
        for (std::size_t i = 0; i < n; ++i)
            r.value = std::max(r.value, line.max_slack(row(i)));
        auto const& free = line.free_coordinates;
        if (auto const* pdf = std::get_if<Pdf1D>(&line.profile))
        {
            r.children.push_back(ks_report(name + "/profile", *pdf,
                                           table.column(free.at(0)), opts,
                                           std::nullopt));
        }
        else
        {
            r.children.push_back(tv_report(
                name + "/profile", std::get<Density2D>(line.profile),
                table.column(free.at(0)), table.column(free.at(1)), opts,
                std::nullopt));
        }
    }
    r.runtime_seconds = seconds_since(start);
    settle(r);
    return r;
}

//---------------------------------------------------------------------------//
// CANONICAL SUITE
//---------------------------------------------------------------------------//
std::vector<SuiteEntry> canonical_suite(bool impostors)
{
    double const kappa = impostors ? 2.0 : 1.0;
    std::string const prefix = impostors ? "negative/" : "";
    auto pdf = [kappa](Pdf1D p) { return kappa == 1 ? p : p.scaled(kappa); };
    auto joint = [kappa](Density2D d) {
        return kappa == 1 ? d : d.scaled(kappa);
    };
    auto sing = [kappa](JointDistribution d) {
        return kappa == 1 ? d : scaled(d, kappa);
    };

    QubitObservable const qa{0, Vec3(0.3, 0.4, 1.2)};
    QubitObservable const qx{0, Vec3(1, 0, 0)};
    std::vector<double> const s3{1, 3, 9};
    std::vector<double> const s4{1, 3, 9, 27};

    std::vector<SuiteEntry> out;
    auto ks = [&](std::string name, auto make_pdf, Probe probe) {
        out.push_back({prefix + name, 1'000'000,
                       [=, name = prefix + name](VerifyOptions const& o) {
                           return verify_pdf_1d(name, pdf(make_pdf()), probe, o);
                       }});
    };
    auto tv = [&](std::string name, auto make_density, Probe probe) {
        out.push_back({prefix + name, 4'000'000,
                       [=, name = prefix + name](VerifyOptions const& o) {
                           return verify_joint_2d(name, joint(make_density()),
                                                  probe, o);
                       }});
    };
    auto sg = [&](std::string name, auto make_dist, Probe probe) {
        out.push_back({prefix + name, 100'000,
                       [=, name = prefix + name](VerifyOptions const& o) {
                           return verify_singular(name, sing(make_dist()),
                                                  probe, o);
                       }});
    };

    ks("ks/qubit_uncertainty", [=] { return pdf_uncertainty_qubit(qa); },
       Probe::uncertainties({qa.to_hermitian()}));
    ks("ks/qubit_uncertainty_x", [=] { return pdf_uncertainty_qubit(qx); },
       Probe::uncertainties({qx.to_hermitian()}));
    ks("ks/qutrit_uncertainty",
       [=] { return pdf_uncertainty_qutrit(Spectrum(s3)); },
       Probe::uncertainties({diag(s3)}));
    ks("ks/d4_uncertainty", [=] { return pdf_uncertainty_d4(Spectrum(s4)); },
       Probe::uncertainties({diag(s4)}));
    ks("ks/qubit_expectation", [=] { return pdf_expectation(qa.spectrum()); },
       Probe::expectations({qa.to_hermitian()}));
    ks("ks/d4_expectation", [=] { return pdf_expectation(Spectrum(s4)); },
       Probe::expectations({diag(s4)}));

    tv("tv/qubit_pair_uncertainties",
       [] { return joint_uncertainties_qubit2(pauli_x(), pauli_z()); },
       Probe::uncertainties({pauli_x().to_hermitian(), pauli_z().to_hermitian()}));
    tv("tv/qutrit_exp_std", [=] { return joint_exp_std_qutrit(Spectrum(s3)); },
       Probe::exp_std(diag(s3)));
    tv("tv/qutrit_exp_exp2",
       [=] { return joint_exp_exp2_qutrit(Spectrum(s3)); },
       Probe::exp_exp2(diag(s3)));

    sg("singular/pauli_triple",
       [] { return joint_expectations_qubit3(pauli_x(), pauli_y(), pauli_z()); },
       Probe::expectations({pauli_x().to_hermitian(), pauli_y().to_hermitian(),
                            pauli_z().to_hermitian()}));
    QubitObservable const two_z{0, Vec3(0, 0, 2)};
    sg("singular/collinear_pair",
       [=] { return joint_expectations_qubit2(pauli_z(), two_z); },
       Probe::expectations({pauli_z().to_hermitian(), two_z.to_hermitian()}));
    return out;
}

std::vector<VerificationReport> run_suite(std::string const& name,
                                          std::uint64_t seed,
                                          std::optional<std::size_t> n_samples,
                                          int n_workers)
{
    std::vector<SuiteEntry> entries;
    if (name == "default")
    {
        entries = canonical_suite(false);
    }
    else if (name == "negative")
    {
        entries = canonical_suite(true);
    }
    else
    {
        for (bool imp : {false, true})
        {
            for (auto& e : canonical_suite(imp))
            {
                if (e.name == name)
                    entries.push_back(std::move(e));
            }
        }
        if (entries.empty())
            fail(ErrorCode::invalid_argument, "unknown suite: " + name);
    }

    std::vector<VerificationReport> out;
    for (auto const& e : entries)
    {
        VerifyOptions opts;
        opts.seed = seed;
        opts.n_samples = n_samples.value_or(e.default_samples);
        opts.n_workers = n_workers;
        out.push_back(e.run(opts));
    }
    return out;
}

}  // namespace uncpdf
