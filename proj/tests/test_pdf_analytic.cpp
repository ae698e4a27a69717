#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "uncpdf/pdf_analytic.hpp"

using namespace uncpdf;

namespace
{
std::vector<double> random_spectrum(std::mt19937_64& rng, int d)
{
    std::uniform_real_distribution<double> u(-3, 3);
    std::vector<double> v;
    while (static_cast<int>(v.size()) < d)
    {
        double const x = u(rng);
        bool const far = std::all_of(v.begin(), v.end(), [x](double y) {
            return std::abs(x - y) > 0.2;
        });
        if (far)
            v.push_back(x);
    }
    std::sort(v.begin(), v.end());
    return v;
}

//! Every r where a chord (a_j - r)(r - a_i) = x^2 crosses, plus eigenvalues
std::vector<double> r_cuts(std::vector<double> const& a, double x)
{
    std::vector<double> cuts(a.begin(), a.end());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        for (std::size_t j = i + 1; j < a.size(); ++j)
        {
            if (auto roots = quad_roots(a[i], a[j], x))
            {
                cuts.push_back(roots->first);
                cuts.push_back(roots->second);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

double oracle_uncertainty_marginal(std::vector<double> const& a, double x)
{
    auto g = [&](double r) {
        return 2 * x * oracle::simplex_fiber_density(a, r, r * r + x * x);
    };
    return integrate_pieces(g, r_cuts(a, x), 1e-11);
}

double marginal_over_r(Density2D const& rx, std::vector<double> const& a,
                       double x)
{
    auto g = [&](double r) { return rx(r, x); };
    return integrate_pieces(g, r_cuts(a, x), 1e-11);
}
}  // namespace

TEST_CASE("quad roots")
{
    auto r = quad_roots(-1, 1, 0);
    REQUIRE(r);
    CHECK(r->first == doctest::Approx(-1));
    CHECK(r->second == doctest::Approx(1));
    r = quad_roots(-1, 1, 1);
    REQUIRE(r);
    CHECK(r->first == doctest::Approx(0));
    CHECK(r->second == doctest::Approx(0));
    r = quad_roots(0, 2, 0.6);
    REQUIRE(r);
    CHECK(r->first == doctest::Approx(0.2));
    CHECK(r->second == doctest::Approx(1.8));
    CHECK_FALSE(quad_roots(0, 2, 1.01));
}

TEST_CASE("expectation density against the B-spline recursion")
{
    std::mt19937_64 rng(11);
    for (int d = 2; d <= 6; ++d)
    {
        for (int trial = 0; trial < 5; ++trial)
        {
            auto const a = random_spectrum(rng, d);
            auto const pdf = pdf_expectation(Spectrum(a));
            CHECK(pdf.support().lo == a.front());
            CHECK(pdf.support().hi == a.back());
            CHECK(pdf.total_mass() == doctest::Approx(1).epsilon(1e-8));
            std::uniform_real_distribution<double> u(a.front(), a.back());
            for (int k = 0; k < 50; ++k)
            {
                double const r = u(rng);
                CHECK(pdf(r)
                      == doctest::Approx(oracle::bspline(a, r)).epsilon(1e-9));
            }
            CHECK(pdf(a.front() - 0.1) == 0);
            CHECK(pdf(a.back() + 0.1) == 0);
        }
    }

    CHECK(pdf_expectation(Spectrum({1, 3, 9}))(3) == doctest::Approx(0.25));
    auto const box = pdf_expectation(Spectrum({0, 1}));
    CHECK(box(0.3) == doctest::Approx(1));
    CHECK(box(0.9) == doctest::Approx(1));
}

TEST_CASE("shift covariance of expectation density")
{
    std::mt19937_64 rng(5);
    for (int d = 2; d <= 4; ++d)
    {
        auto a = random_spectrum(rng, d);
        double const c = 1.7;
        auto b = a;
        for (auto& v : b)
            v += c;
        auto const fa = pdf_expectation(Spectrum(a));
        auto const fb = pdf_expectation(Spectrum(b));
        for (double t : {0.1, 0.37, 0.5, 0.81})
        {
            double const r = a.front() + t * (a.back() - a.front());
            CHECK(fb(r + c) == doctest::Approx(fa(r)).epsilon(1e-9));
        }
    }
}

TEST_CASE("qubit uncertainty density")
{
    QubitObservable const q{0, Vec3(1, 0, 0)};
    auto const pdf = pdf_uncertainty_qubit(q);
    CHECK(pdf(0) == 0);
    CHECK(pdf(1 / std::sqrt(2.0)) == doctest::Approx(1));
    auto const top = pdf.eval(1);
    CHECK(top.singular);
    CHECK(std::isinf(top.value));
    CHECK(pdf.total_mass() == doctest::Approx(1).epsilon(1e-9));

    QubitObservable const g{0.5, Vec3(0.3, 0.4, 1.2)};
    auto const pg = pdf_uncertainty_qubit(g);
    for (double t : {0.05, 0.3, 0.6, 0.9, 0.999, 0.999999})
    {
        double const x = t * 1.3;
        // Rounding in sqrt(|a| - x) limits accuracy next to the divergence
        CHECK(pg.cdf(x)
              == doctest::Approx(oracle::qubit_uncertainty_cdf(1.3, x))
                     .epsilon(1e-7));
    }

    QubitObservable const zero{1, Vec3::Zero()};
    CHECK_THROWS_AS(pdf_uncertainty_qubit(zero), Error);
}

TEST_CASE("scale covariance of uncertainty densities")
{
    double const kappa = 2.5;
    for (auto const& a : std::vector<std::vector<double>>{{-1, 1},
                                                          {1, 3, 9},
                                                          {1, 3, 9, 27}})
    {
        auto b = a;
        for (auto& v : b)
            v *= kappa;
        auto const fa = pdf_uncertainty(Spectrum(a));
        auto const fb = pdf_uncertainty(Spectrum(b));
        for (double t : {0.1, 0.33, 0.52, 0.77, 0.95})
        {
            double const x = t * fa.support().hi;
            CHECK(fb(kappa * x) == doctest::Approx(fa(x) / kappa).epsilon(1e-9));
        }
        // Shift leaves uncertainties unchanged
        auto c = a;
        for (auto& v : c)
            v -= 4.2;
        auto const fc = pdf_uncertainty(Spectrum(c));
        for (double t : {0.2, 0.6})
        {
            double const x = t * fa.support().hi;
            CHECK(fc(x) == doctest::Approx(fa(x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("qubit pair expectations")
{
    auto dist = joint_expectations_qubit2(pauli_x(), pauli_z());
    REQUIRE(std::holds_alternative<Density2D>(dist));
    auto const& d = std::get<Density2D>(dist);
    CHECK(d(0.5, 0.5) == doctest::Approx(0.22508).epsilon(1e-4));
    CHECK(d(2, 0) == 0);
    CHECK(d.total_mass() == doctest::Approx(1).epsilon(1e-6));

    CHECK(omega2(pauli_x(), pauli_z(), 0, 0) == 0);
    CHECK(omega2(pauli_x(), pauli_z(), 1, 0) == doctest::Approx(1));

    QubitObservable const a{0.3, Vec3(0.2, -0.7, 0.4)};
    QubitObservable const b{-1.1, Vec3(0.9, 0.1, -0.5)};
    auto const gen = std::get<Density2D>(joint_expectations_qubit2(a, b));
    CHECK(gen.total_mass() == doctest::Approx(1).epsilon(1e-6));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 200; ++k)
    {
        double const dr = u(rng) * a.norm();
        double const ds = u(rng) * b.norm();
        double const expect
            = oracle::sphere_projection_density(a.a, b.a, dr, ds);
        CHECK(gen(a.a0 + dr, b.a0 + ds)
              == doctest::Approx(expect).epsilon(1e-10));
    }

    QubitObservable const twice{0, Vec3(0, 0, 2)};
    auto line = joint_expectations_qubit2(pauli_z(), twice);
    REQUIRE(std::holds_alternative<LineSingular>(line));
    auto const& ls = std::get<LineSingular>(line);
    REQUIRE(ls.constraints.size() == 1);
    CHECK(ls.constraints[0].terms[0].second == doctest::Approx(2));
    std::array<double, 2> on{0.3, 0.6};
    std::array<double, 2> off{0.3, 0.7};
    CHECK(ls.max_slack(on) < 1e-15);
    CHECK(ls.max_slack(off) == doctest::Approx(0.1));
}

TEST_CASE("qubit pair uncertainties")
{
    auto const d = joint_uncertainties_qubit2(pauli_x(), pauli_z());
    CHECK(d(0.6, 0.7) == 0);
    // sqrt(x^2 + y^2 - 1) form for orthogonal unit Bloch vectors
    double const x = 0.9;
    double const y = 0.9;
    double const closed = 2 * x * y * 2
                          / (2 * std::numbers::pi * std::sqrt(x * x + y * y - 1)
                             * std::sqrt((1 - x * x) * (1 - y * y)));
    CHECK(d(x, y) == doctest::Approx(closed).epsilon(1e-12));
    CHECK(d(x, y) == doctest::Approx(3.4468).epsilon(1e-4));
    CHECK(d(x, y)
          == doctest::Approx(oracle::uncertainty_pair_density(
                                 Vec3::UnitX(), Vec3::UnitZ(), x, y))
                 .epsilon(1e-12));
    CHECK(d.total_mass() == doctest::Approx(1).epsilon(1e-5));

    QubitObservable const a{0.3, Vec3(0.2, -0.7, 0.4)};
    QubitObservable const b{-1.1, Vec3(0.9, 0.1, -0.5)};
    auto const gen = joint_uncertainties_qubit2(a, b);
    CHECK(gen.total_mass() == doctest::Approx(1).epsilon(1e-5));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 200; ++k)
    {
        double const px = u(rng) * a.norm();
        double const py = u(rng) * b.norm();
        CHECK(gen(px, py)
              == doctest::Approx(oracle::uncertainty_pair_density(a.a, b.a,
                                                                  px, py))
                     .epsilon(1e-10));
    }

    // Marginal over y recovers the single-qubit density
    auto const single = pdf_uncertainty_qubit(a);
    for (double t : {0.2, 0.5, 0.8})
    {
        double const px = t * a.norm();
        double m = 0;
        for (auto const& piece : gen.v_pieces(px))
        {
            m += integrate_endpoint_singular(
                [&](double py) { return gen(px, py); }, piece.lo, piece.hi,
                1e-11);
        }
        CHECK(m == doctest::Approx(single(px)).epsilon(1e-4));
    }

    QubitObservable const twice{0, Vec3(0, 0, -2)};
    CHECK_THROWS_AS(joint_uncertainties_qubit2(pauli_z(), twice), Error);
    auto rel = uncertainty_relation_qubit2(pauli_z(), twice);
    REQUIRE(std::holds_alternative<UncertaintyCurve>(rel));
    CHECK(std::get<UncertaintyCurve>(rel).slope == doctest::Approx(2));
}

TEST_CASE("qubit triples")
{
    auto dist = joint_expectations_qubit3(pauli_x(), pauli_y(), pauli_z());
    REQUIRE(std::holds_alternative<SurfaceSingular>(dist));
    auto const& surf = std::get<SurfaceSingular>(dist);
    CHECK(surf.weight() == doctest::Approx(1 / (4 * std::numbers::pi)));

    QubitObservable const a{0, Vec3(1, 0.2, 0)};
    QubitObservable const b{1, Vec3(0, 1, 0.3)};
    QubitObservable const sum{0.5, a.a + b.a};
    auto plane = joint_expectations_qubit3(a, b, sum);
    REQUIRE(std::holds_alternative<LineSingular>(plane));
    auto const& pl = std::get<LineSingular>(plane);
    REQUIRE(pl.constraints.size() == 1);
    CHECK(pl.constraints[0].dependent == 2);
    CHECK(pl.constraints[0].terms[0].second == doctest::Approx(1));
    CHECK(pl.constraints[0].terms[1].second == doctest::Approx(1));
    CHECK(std::holds_alternative<Density2D>(pl.profile));

    QubitObservable const b2{0, 2 * a.a};
    QubitObservable const c3{0, 3 * a.a};
    auto rank1 = joint_expectations_qubit3(a, b2, c3);
    auto const& l1 = std::get<LineSingular>(rank1);
    REQUIRE(l1.constraints.size() == 2);
    CHECK(l1.constraints[0].terms[0].second == doctest::Approx(2));
    CHECK(l1.constraints[1].terms[0].second == doctest::Approx(3));
    CHECK(std::holds_alternative<Pdf1D>(l1.profile));

    // A nudged off-plane triple is classified as full rank
    QubitObservable const nudged{0.5, a.a + b.a + Vec3(0, 0, 1e-3)};
    CHECK(std::holds_alternative<SurfaceSingular>(
        joint_expectations_qubit3(a, b, nudged)));

    auto const us = uncertainty_surface_qubit3(pauli_x(), pauli_y(), pauli_z());
    CHECK(us.contains(1, 1, 0));
    CHECK_FALSE(us.contains(0, 0, 0));
    CHECK_THROWS_AS(uncertainty_surface_qubit3(a, b, sum), Error);
}

TEST_CASE("uncertainty surface weight integrates to one")
{
    // For the Pauli triple the support is x^2 + y^2 + z^2 = 2 inside the
    // unit cube; all four sign branches coincide and |grad omega| = sqrt(2).
    auto const us = uncertainty_surface_qubit3(pauli_x(), pauli_y(), pauli_z());
    auto inner = [&](double x) {
        double const lo = std::sqrt(1 - x * x);
        return integrate_endpoint_singular(
            [&](double y) {
                double const z2 = 2 - x * x - y * y;
                if (z2 <= 0 || z2 >= 1)
                    return 0.0;
                double const z = std::sqrt(z2);
                double const ds = std::sqrt(2.0) / z;
                return 4 * us.weight(x, y, z) / std::sqrt(2.0) * ds;
            },
            lo, 1, 1e-10);
    };
    double const total = integrate_endpoint_singular(inner, 0, 1, 1e-8);
    CHECK(total == doctest::Approx(1).epsilon(1e-4));
}

TEST_CASE("qutrit densities")
{
    std::vector<double> const a{1, 3, 9};
    Spectrum const spec(a);
    auto const rs = joint_exp_exp2_qutrit(spec);
    CHECK(rs(3, 9 + 1e-9) == doctest::Approx(1.0 / 48));
    CHECK(rs(3, 9 - 1e-6) == 0);
    CHECK(rs(5, 40) == doctest::Approx(1.0 / 48));
    CHECK(rs(5, 30) == 0);
    CHECK(rs.total_mass() == doctest::Approx(1).epsilon(1e-6));

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 3; ++trial)
    {
        auto const b = random_spectrum(rng, 3);
        auto const d = joint_exp_exp2_qutrit(Spectrum(b));
        std::uniform_real_distribution<double> ur(b.front(), b.back());
        double const smax = std::max(b.front() * b.front(), b.back() * b.back());
        std::uniform_real_distribution<double> us(0, smax);
        for (int k = 0; k < 500; ++k)
        {
            double const r = ur(rng);
            double const s = us(rng);
            CHECK(d(r, s)
                  == doctest::Approx(oracle::simplex_fiber_density(b, r, s))
                         .epsilon(1e-9));
        }
    }

    auto const rx = joint_exp_std_qutrit(spec);
    CHECK(rx.total_mass() == doctest::Approx(1).epsilon(1e-6));
    CHECK(rx.contains(3, 0.1, 1e-9));

    auto const dx = pdf_uncertainty_qutrit(spec);
    CHECK(dx(2) == doctest::Approx(0.204672).epsilon(1e-6));
    CHECK(dx(4.5) == 0);
    CHECK(dx.total_mass() == doctest::Approx(1).epsilon(1e-8));
    CHECK(dx.breakpoints() == std::vector<double>{1, 3, 4});
    for (int k = 1; k < 20; ++k)
    {
        double const x = 4.0 * k / 20;
        CHECK(dx(x) == doctest::Approx(marginal_over_r(rx, a, x)).epsilon(1e-4));
        CHECK(dx(x)
              == doctest::Approx(oracle_uncertainty_marginal(a, x)).epsilon(1e-6));
    }
}

TEST_CASE("four-level densities")
{
    std::vector<double> const a{1, 3, 9, 27};
    Spectrum const spec(a);
    QuartCellMap const cells(spec);
    CHECK(cells.pivot() == doctest::Approx(3.6));
    CHECK(cells.vandermonde() == doctest::Approx(1078272));

    auto const rs = joint_exp_exp2_d4(spec);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ur(1, 27);
    std::uniform_real_distribution<double> us(1, 729);
    int inside = 0;
    for (int k = 0; k < 3000; ++k)
    {
        double const r = ur(rng);
        double const s = us(rng);
        double const expect = oracle::simplex_fiber_density(a, r, s);
        if (expect > 0)
            ++inside;
        CHECK(rs(r, s) == doctest::Approx(expect).epsilon(1e-9).scale(1e-6));
    }
    CHECK(inside > 100);
    CHECK(rs.total_mass() == doctest::Approx(1).epsilon(1e-5));

    // g is continuous across every interior cell boundary
    std::uniform_real_distribution<double> u01(0, 1);
    for (int k = 0; k < 1000; ++k)
    {
        double const r = 1 + 26 * u01(rng);
        for (auto [i, j] : {std::pair{1, 3}, std::pair{2, 4}})
        {
            double const s = cells.phi(i, j, r);
            if (cells.cell(r, s) == 0)
                continue;
            double const h = 1e-9 * s;
            CHECK(std::abs(cells.g(r, s + h) - cells.g(r, s - h)) < 1e-5);
        }
    }

    auto const rx = joint_exp_std_d4(spec);
    CHECK(rx.total_mass() == doctest::Approx(1).epsilon(1e-5));

    auto const dx = pdf_uncertainty_d4(spec);
    CHECK(dx.breakpoints() == std::vector<double>{1, 3, 4, 9, 12, 13});
    CHECK(dx.total_mass() == doctest::Approx(1).epsilon(1e-8));
    CHECK(dx(13) == 0);
    CHECK(dx(14) == 0);
    for (double x : {12.1, 12.5, 12.9})
    {
        double const e14 = std::pow(13 * 13 - x * x, 1.5);
        CHECK(dx(x) == doctest::Approx(x * e14 / 11232).epsilon(1e-12));
    }
    for (double x : {0.1, 0.5, 0.9})
    {
        auto e3 = [x](double h) { return std::pow(h * h - x * x, 1.5); };
        double const expect = x
                              * (9 * e3(1) + 13 * e3(3) - 12 * e3(4) + e3(9)
                                 - 4 * e3(12) + 3 * e3(13))
                              / 33696;
        CHECK(dx(x) == doctest::Approx(expect).epsilon(1e-12));
    }
    for (int k = 1; k < 20; ++k)
    {
        double const x = 13.0 * k / 20;
        CHECK(dx(x) == doctest::Approx(marginal_over_r(rx, a, x)).epsilon(1e-4));
        CHECK(dx(x)
              == doctest::Approx(oracle_uncertainty_marginal(a, x)).epsilon(1e-6));
    }
}

TEST_CASE("support regions")
{
    auto const region = support_regions(Spectrum({1, 3, 9}));
    CHECK(region.contains_rx(3, 0.1));
    CHECK(region.contains_rs(3, 9));
    CHECK_FALSE(region.contains_rs(3, 8.9));
    CHECK_FALSE(region.contains_rx(0.5, 0.1));
    CHECK(region.contains_rx(5, region.upper_x(5)));
    CHECK_FALSE(region.contains_rx(5, region.upper_x(5) + 1e-3));

    auto const two = support_regions(Spectrum({-1, 1}));
    CHECK(two.contains_rx(0.2, two.upper_x(0.2)));
    CHECK_FALSE(two.contains_rx(0.2, two.upper_x(0.2) - 1e-3));

    auto const arcs = region.boundary_rx(50);
    REQUIRE(arcs.size() == 3);
    for (auto const& arc : arcs)
    {
        for (auto const& p : arc.points)
            CHECK(region.contains_rx(p[0], p[1], 1e-9));
    }

    CHECK_THROWS_AS(support_regions(Spectrum({1, 1, 2})), Error);
    CHECK_THROWS_AS(pdf_uncertainty(Spectrum({1, 2, 3, 4, 5})), Error);
}
