#include <doctest.h>

#include <cmath>
#include <random>

#include "uncpdf/haar.hpp"
#include "uncpdf/regions.hpp"

using namespace uncpdf;

namespace
{
QubitObservable random_qubit(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    return {g(rng), Vec3(g(rng), g(rng), g(rng))};
}

//! Objective at every point of a dense theta-phi grid on the Bloch sphere
double grid_minimum(Objective const& obj,
                    std::span<QubitObservable const> obs,
                    int n_theta, int n_phi)
{
    double best = 1e300;
    std::vector<double> sd(obs.size());
    for (int i = 0; i <= n_theta; ++i)
    {
        double const th = std::numbers::pi * i / n_theta;
        for (int j = 0; j < n_phi; ++j)
        {
            double const ph = 2 * std::numbers::pi * j / n_phi;
            Vec3 const u(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                         std::cos(th));
            for (std::size_t k = 0; k < obs.size(); ++k)
            {
                double const p = obs[k].a.dot(u);
                sd[k] = std::sqrt(std::max(0.0, obs[k].a.squaredNorm() - p * p));
            }
            best = std::min(best, obj(sd));
        }
    }
    return best;
}
}  // namespace

TEST_CASE("supercube")
{
    std::vector<Spectrum> specs{pauli_z().spectrum(), Spectrum({1, 3, 9})};
    auto const cube = supercube_bound(specs);
    CHECK(cube[0].lo == 0);
    CHECK(cube[0].hi == doctest::Approx(1));
    CHECK(cube[1].hi == doctest::Approx(4));
}

TEST_CASE("qubit pair membership")
{
    CHECK(qubit_pair_contains(pauli_x(), pauli_z(), 1, 0));
    CHECK_FALSE(qubit_pair_contains(pauli_x(), pauli_z(), 0.5, 0.5));
    CHECK(qubit_pair_contains(pauli_z(), pauli_z(), 0.3, 0.3));
    CHECK_FALSE(qubit_pair_contains(pauli_z(), pauli_z(), 0.3, 0.4));
    CHECK_FALSE(qubit_pair_contains(pauli_x(), pauli_z(), 1.5, 0.5));
    QubitObservable const zero{0, Vec3::Zero()};
    CHECK_THROWS_AS(qubit_pair_contains(zero, pauli_z(), 0, 0), Error);

    // Haar samples always satisfy the inequality and the supercube
    std::mt19937_64 rng(31);
    for (int pair = 0; pair < 5; ++pair)
    {
        auto const a = random_qubit(rng);
        auto const b = random_qubit(rng);
        std::vector<HermitianObservable> obs{a.to_hermitian(), b.to_hermitian()};
        SamplerConfig cfg;
        cfg.seed = 100 + pair;
        cfg.n_samples = 20000;
        auto const t = sample_statistics(obs, cfg, Statistic::std_dev);
        for (std::size_t i = 0; i < t.rows(); ++i)
        {
            CHECK(qubit_pair_slack(a.norm(), b.norm(), a.a.dot(b.a), t(i, 0),
                                   t(i, 1))
                  >= -1e-9);
            CHECK(t(i, 0) <= a.norm() + 1e-12);
            CHECK(t(i, 1) <= b.norm() + 1e-12);
        }
    }
}

TEST_CASE("qubit triple membership")
{
    CHECK(qubit_triple_contains(pauli_x(), pauli_y(), pauli_z(), 1, 1, 0));
    CHECK_FALSE(qubit_triple_contains(pauli_x(), pauli_y(), pauli_z(), 0, 0, 0));

    std::mt19937_64 rng(41);
    auto const a = random_qubit(rng);
    auto const b = random_qubit(rng);
    auto const c = random_qubit(rng);
    QubitObservable const dep{0.2, 0.5 * a.a - 1.5 * b.a};
    QubitObservable const col{-1, -2 * a.a};
    std::vector<std::array<QubitObservable, 3>> triples{
        {a, b, c}, {a, b, dep}, {a, col, b}};
    for (auto const& tr : triples)
    {
        std::vector<HermitianObservable> obs{tr[0].to_hermitian(),
                                             tr[1].to_hermitian(),
                                             tr[2].to_hermitian()};
        SamplerConfig cfg;
        cfg.n_samples = 5000;
        auto const t = sample_statistics(obs, cfg, Statistic::std_dev);
        int misses = 0;
        for (std::size_t i = 0; i < t.rows(); ++i)
        {
            if (!qubit_triple_contains(tr[0], tr[1], tr[2], t(i, 0), t(i, 1),
                                       t(i, 2)))
                ++misses;
        }
        CHECK(misses == 0);
        CHECK_FALSE(qubit_triple_contains(tr[0], tr[1], tr[2], 0.01, 0.01, 0.01));
    }
}

TEST_CASE("minimize on the Bloch sphere")
{
    std::array<QubitObservable, 2> xz{pauli_x(), pauli_z()};
    auto const var = minimize(Objective::sum_of_variances(), xz);
    CHECK(var.minimum == doctest::Approx(1).epsilon(1e-9));
    auto const sd = minimize(Objective::sum_of_stddevs(), xz);
    CHECK(sd.minimum == doctest::Approx(1).epsilon(1e-6));
    // Witness reproduces the reported uncertainties
    for (auto const* res : {&var, &sd})
    {
        for (std::size_t k = 0; k < 2; ++k)
        {
            double const s = std_dev(xz[k].to_hermitian(), res->witness_state);
            CHECK(std::abs(s - res->argmin_uncertainties[k]) < 1e-8);
        }
    }

    std::array<QubitObservable, 1> single{pauli_y()};
    CHECK(minimize(Objective::sum_of_variances(), single).minimum
          == doctest::Approx(0).scale(1));
    CHECK(minimize(Objective::sum_of_variances(), single).minimum < 1e-10);

    // Dense grid oracle (~10^6 points) agrees within its resolution
    double const grid = grid_minimum(Objective::sum_of_stddevs(), xz, 1000, 1000);
    CHECK(sd.minimum <= grid + 1e-12);
    CHECK(grid - sd.minimum < 1e-2);

    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 5; ++trial)
    {
        std::array<QubitObservable, 3> obs{random_qubit(rng), random_qubit(rng),
                                           random_qubit(rng)};
        for (auto const& objective :
             {Objective::sum_of_variances(), Objective::sum_of_stddevs(),
              Objective::weighted({1, 2, 0.5}, 2)})
        {
            auto const res = minimize(objective, obs);
            double const g = grid_minimum(objective, obs, 300, 600);
            CHECK(res.minimum <= g + 1e-10);
            CHECK(g - res.minimum < 5e-2);
            // Never above the objective at random probe states
            SamplerConfig cfg;
            cfg.n_samples = 10000;
            std::vector<HermitianObservable> herm;
            for (auto const& q : obs)
                herm.push_back(q.to_hermitian());
            auto const t = sample_statistics(herm, cfg, Statistic::std_dev);
            double probe = 1e300;
            for (std::size_t i = 0; i < t.rows(); ++i)
            {
                std::array<double, 3> v{t(i, 0), t(i, 1), t(i, 2)};
                probe = std::min(probe, objective(v));
            }
            CHECK(res.minimum <= probe + 1e-12);
        }
    }
}

TEST_CASE("minimize scaling and shift")
{
    std::mt19937_64 rng(61);
    std::array<QubitObservable, 2> obs{random_qubit(rng), random_qubit(rng)};
    double const base = minimize(Objective::sum_of_variances(), obs).minimum;
    double const kappa = 1.7;
    auto scaled = obs;
    for (auto& q : scaled)
    {
        q.a0 *= kappa;
        q.a *= kappa;
    }
    CHECK(std::abs(minimize(Objective::sum_of_variances(), scaled).minimum
                   - kappa * kappa * base)
          < 1e-8);
    auto shifted = obs;
    shifted[0].a0 += 3.3;
    shifted[1].a0 -= 0.4;
    for (auto const& objective :
         {Objective::sum_of_variances(), Objective::sum_of_stddevs()})
    {
        CHECK(std::abs(minimize(objective, shifted).minimum
                       - minimize(objective, obs).minimum)
              < 1e-8);
    }
}

TEST_CASE("heuristic minimization")
{
    std::vector<HermitianObservable> diag{
        HermitianObservable::diagonal(std::vector<double>{1, 2, 5}),
        HermitianObservable::diagonal(std::vector<double>{-1, 0, 4})};
    auto const res = minimize_heuristic(Objective::sum_of_variances(), diag, 8);
    CHECK(res.minimum < 1e-8);
    CHECK(res.converged);

    std::array<QubitObservable, 2> xz{pauli_x(), pauli_z()};
    std::vector<HermitianObservable> herm{pauli_x().to_hermitian(),
                                          pauli_z().to_hermitian()};
    auto const h = minimize_heuristic(Objective::sum_of_variances(), herm, 8);
    auto const exact = minimize(Objective::sum_of_variances(), xz);
    CHECK(std::abs(h.minimum - exact.minimum) < 1e-6);

    // Spin-1 components: an upper bound that no probe state beats
    double const s = 1 / std::sqrt(2.0);
    CMatrix jx = CMatrix::Zero(3, 3);
    jx(0, 1) = jx(1, 0) = jx(1, 2) = jx(2, 1) = s;
    CMatrix jy = CMatrix::Zero(3, 3);
    jy(0, 1) = Complex(0, -s);
    jy(1, 0) = Complex(0, s);
    jy(1, 2) = Complex(0, -s);
    jy(2, 1) = Complex(0, s);
    std::vector<HermitianObservable> spin{HermitianObservable(jx),
                                          HermitianObservable(jy)};
    auto const sr = minimize_heuristic(Objective::sum_of_variances(), spin, 8);
    CHECK(sr.minimum >= 0);
    SamplerConfig cfg;
    cfg.dim = 3;
    cfg.n_samples = 5000;
    auto const t = sample_statistics(spin, cfg, Statistic::std_dev);
    for (std::size_t i = 0; i < t.rows(); ++i)
        CHECK(sr.minimum <= t(i, 0) * t(i, 0) + t(i, 1) * t(i, 1) + 1e-12);
    // Known value for spin 1: min Var(Jx) + Var(Jy) = 7/16
    CHECK(sr.minimum == doctest::Approx(7.0 / 16).epsilon(1e-6));

    std::vector<HermitianObservable> mixed{pauli_x().to_hermitian(), spin[0]};
    CHECK_THROWS_AS(minimize_heuristic(Objective::sum_of_variances(), mixed),
                    Error);
}

TEST_CASE("pauli decomposition")
{
    QubitObservable const q{0.4, Vec3(0.1, -0.2, 0.7)};
    auto const back = to_qubit(q.to_hermitian());
    CHECK(back.a0 == doctest::Approx(q.a0));
    CHECK((back.a - q.a).norm() < 1e-15);
    CHECK_THROWS_AS(to_qubit(HermitianObservable(CMatrix::Identity(3, 3))),
                    Error);
}
