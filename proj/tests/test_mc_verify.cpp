#include <doctest.h>

#include <json.hpp>

#include "uncpdf/mc_verify.hpp"

using namespace uncpdf;

TEST_CASE("ks distance")
{
    Pdf1D const uniform("r", [](double) { return 1.0; }, {0, 1}, {});
    std::size_t const n = 1000;
    std::vector<double> quantiles;
    for (std::size_t i = 0; i < n; ++i)
        quantiles.push_back((static_cast<double>(i) + 0.5) / n);
    CHECK(ks_distance(uniform, quantiles) == doctest::Approx(0.5 / n));
    // Worker count only changes the schedule
    CHECK(ks_distance(uniform, quantiles, 3) == ks_distance(uniform, quantiles));

    std::vector<double> shifted(n, 0.25);
    CHECK(ks_distance(uniform, shifted) == doctest::Approx(0.75));

    // Singular density at exact quantiles; direct cdf calls lose ~1e-8 next
    // to the divergence, the incremental sum does not
    auto const pdf = pdf_uncertainty_qubit(pauli_x());
    std::vector<double> xs;
    for (int i = 0; i < 9000; ++i)
        xs.push_back(std::sqrt(1 - std::pow((i + 0.5) / 9000, 2)));
    double direct = 0;
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
    {
        double const f = pdf.cdf(sorted[i]);
        direct = std::max({direct, (i + 1.0) / 9000 - f, f - i / 9000.0});
    }
    CHECK(std::abs(ks_distance(pdf, xs) - 0.5 / 9000) < 1e-9);
    CHECK(std::abs(direct - 0.5 / 9000) < 1e-7);
}

TEST_CASE("bin masses")
{
    auto const d = joint_exp_std_qutrit(Spectrum({1, 3, 9}));
    auto const u = uniform_edges(d.u_range.lo, d.u_range.hi, 20);
    auto const v = uniform_edges(d.v_range.lo, d.v_range.hi, 20);
    auto const m = bin_masses(d, u, v, 2);
    double total = 0;
    for (double x : m)
    {
        CHECK(x >= 0);
        total += x;
    }
    CHECK(total == doctest::Approx(1).epsilon(1e-6));
    CHECK(m == bin_masses(d, u, v, 1));
}

TEST_CASE("pdf verification")
{
    VerifyOptions opts;
    opts.n_samples = 20000;
    auto const probe = Probe::uncertainties({pauli_x().to_hermitian()});
    auto const pdf = pdf_uncertainty_qubit(pauli_x());
    auto const r = verify_pdf_1d("qubit", pdf, probe, opts);
    CHECK(r.passed);
    CHECK(r.threshold == doctest::Approx(3 / std::sqrt(20000.0)));
    CHECK(r.n_samples == 20000);
    auto const again = verify_pdf_1d("qubit", pdf, probe, opts);
    CHECK(again.value == r.value);

    auto const bad = verify_pdf_1d("qubit", pdf.scaled(2), probe, opts);
    CHECK_FALSE(bad.passed);

    opts.threshold = 1e-9;
    CHECK_FALSE(verify_pdf_1d("qubit", pdf, probe, opts).passed);

    auto const two = Probe::uncertainties(
        {pauli_x().to_hermitian(), pauli_z().to_hermitian()});
    CHECK_THROWS_AS(verify_pdf_1d("two", pdf, two, opts), Error);
}

TEST_CASE("joint verification")
{
    VerifyOptions opts;
    opts.n_samples = 100000;
    opts.bins = 40;
    auto const d = joint_uncertainties_qubit2(pauli_x(), pauli_z());
    auto const probe = Probe::uncertainties(
        {pauli_x().to_hermitian(), pauli_z().to_hermitian()});
    auto const r = verify_joint_2d("pair", d, probe, opts);
    CHECK(r.passed);
    REQUIRE(r.children.size() == 1);
    CHECK(r.children[0].value == 0);

    auto const bad = verify_joint_2d("pair", d.scaled(2), probe, opts);
    CHECK_FALSE(bad.passed);
    CHECK_FALSE(bad.children[0].passed);

    // Samples of a different pair miss the analytic support
    auto const other = Probe::uncertainties(
        {pauli_x().to_hermitian(), pauli_x().to_hermitian()});
    CHECK_FALSE(verify_joint_2d("pair", d, other, opts).passed);
}

TEST_CASE("singular verification")
{
    VerifyOptions opts;
    opts.n_samples = 20000;
    auto const triple = Probe::expectations(
        {pauli_x().to_hermitian(), pauli_y().to_hermitian(),
         pauli_z().to_hermitian()});
    auto const surf = joint_expectations_qubit3(pauli_x(), pauli_y(), pauli_z());
    auto const r = verify_singular("triple", surf, triple, opts);
    CHECK(r.passed);
    CHECK(r.value < 1e-10);
    CHECK_FALSE(verify_singular("triple", scaled(surf, 2), triple, opts).passed);

    QubitObservable const two_z{0, Vec3(0, 0, 2)};
    auto const line = joint_expectations_qubit2(pauli_z(), two_z);
    auto const pair = Probe::expectations(
        {pauli_z().to_hermitian(), two_z.to_hermitian()});
    auto const lr = verify_singular("line", line, pair, opts);
    CHECK(lr.passed);
    CHECK(lr.value < 1e-10);
    CHECK_FALSE(verify_singular("line", scaled(line, 2), pair, opts).passed);

    // Nudged off the plane the triple is rank 3 and takes the surface route
    QubitObservable const a{0, Vec3(1, 0, 0)};
    QubitObservable const b{0, Vec3(0, 1, 0)};
    QubitObservable const c{0, Vec3(1, 1, 1e-3)};
    auto const nudged = joint_expectations_qubit3(a, b, c);
    CHECK(std::holds_alternative<SurfaceSingular>(nudged));
    auto const nr = verify_singular(
        "nudged", nudged,
        Probe::expectations(
            {a.to_hermitian(), b.to_hermitian(), c.to_hermitian()}),
        opts);
    CHECK(nr.passed);

    auto const dense = joint_expectations_qubit2(pauli_x(), pauli_z());
    try
    {
        verify_singular("dense", dense, pair, opts);
        FAIL("expected WrongVariant");
    }
    catch (Error const& e)
    {
        CHECK(e.code() == ErrorCode::wrong_variant);
    }
}

TEST_CASE("reports and suites")
{
    VerificationReport r;
    r.test_name = "x";
    r.metric = VerificationReport::Metric::tv;
    r.value = 0.01;
    r.threshold = 0.02;
    r.passed = true;
    r.children.push_back(r);
    auto const j = nlohmann::json::parse(r.to_json());
    CHECK(j["metric"] == "tv");
    CHECK(j["children"].size() == 1);
    auto const arr = nlohmann::json::parse(reports_to_json({r, r}));
    CHECK(arr.size() == 2);

    auto const names = canonical_suite();
    CHECK(names.size() == canonical_suite(true).size());
    CHECK_THROWS_AS(run_suite("no_such_suite"), Error);
    auto const one = run_suite("singular/pauli_triple", 42, 5000);
    REQUIRE(one.size() == 1);
    CHECK(one[0].passed);
    auto const neg = run_suite("negative/singular/pauli_triple", 42, 5000);
    CHECK_FALSE(neg[0].passed);
}
