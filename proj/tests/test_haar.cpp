#include <doctest.h>

#include <cmath>

#include "uncpdf/haar.hpp"

using namespace uncpdf;

TEST_CASE("counter rng streams")
{
    CounterRng a(42, 0);
    CounterRng b(42, 0);
    CounterRng c(42, 1);
    CounterRng d(43, 0);
    for (int i = 0; i < 100; ++i)
    {
        auto const x = a();
        CHECK(x == b());
        CHECK(x != c());
        CHECK(x != d());
    }
    CounterRng e(42, 0);
    e.discard(100);
    CHECK(e() == a());
}

TEST_CASE("sampling is reproducible")
{
    std::vector<HermitianObservable> obs{pauli_x().to_hermitian(),
                                         pauli_z().to_hermitian()};
    SamplerConfig cfg;
    cfg.n_samples = 1000;
    cfg.n_workers = 4;
    auto const t1 = sample_statistics(obs, cfg, Statistic::expectation);
    auto const t2 = sample_statistics(obs, cfg, Statistic::expectation);
    CHECK(t1.data == t2.data);
    cfg.seed = 7;
    auto const t3 = sample_statistics(obs, cfg, Statistic::expectation);
    CHECK(t1.data != t3.data);

    cfg.n_workers = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.n_workers = 1;
    cfg.dim = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("haar moments")
{
    // Bloch vector of a Haar qubit is uniform on the sphere
    SamplerConfig cfg;
    cfg.n_samples = 200000;
    auto const states = sample_pure(cfg);
    REQUIRE(states.size() == cfg.n_samples);
    double mz = 0;
    double mz2 = 0;
    for (auto const& s : states)
    {
        CHECK(std::abs(s.amplitudes().norm() - 1) < 1e-12);
        double const z = s.bloch().z();
        mz += z;
        mz2 += z * z;
    }
    mz /= cfg.n_samples;
    mz2 /= cfg.n_samples;
    CHECK(std::abs(mz) < 5e-3);
    CHECK(std::abs(mz2 - 1.0 / 3) < 5e-3);

    // |psi_0|^2 for d=4 is Beta(1,3): mean 1/4
    cfg.dim = 4;
    cfg.n_samples = 100000;
    double p0 = 0;
    for (auto const& s : sample_pure(cfg))
        p0 += std::norm(s.amplitudes()[0]);
    CHECK(std::abs(p0 / cfg.n_samples - 0.25) < 3e-3);
}

TEST_CASE("histograms")
{
    auto const edges = uniform_edges(0, 1, 4);
    CHECK(edges == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
    CHECK(find_bin(edges, 0) == 0);
    CHECK(find_bin(edges, 0.25) == 1);
    CHECK(find_bin(edges, 1) == 3);
    CHECK(find_bin(edges, -0.1) == -1);
    CHECK(find_bin(edges, 1.1) == -1);

    std::vector<double> xs{0.1, 0.3, 0.3, 0.9, 1.5, -2};
    auto const h = histogram(xs, edges);
    CHECK(h.counts == std::vector<std::uint64_t>{1, 2, 0, 1});
    CHECK(h.underflow == 1);
    CHECK(h.overflow == 1);
    CHECK(h.total == 6);

    std::vector<double> ys{0.1, 0.1, 0.6, 0.9, 0.5, 0.5};
    auto const h2 = histogram(xs, ys, edges, edges);
    CHECK(h2.at(1, 0) == 1);
    CHECK(h2.at(1, 2) == 1);
    CHECK(h2.overflow == 2);
    auto merged = h2;
    merged.merge(h2);
    CHECK(merged.total == 12);
    CHECK(merged.at(1, 0) == 2);
}
