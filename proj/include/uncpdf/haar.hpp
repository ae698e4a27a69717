#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "observables.hpp"

namespace uncpdf
{
//---------------------------------------------------------------------------//
/*!
 * Counter-based 64-bit generator (SplitMix64 finalizer over a Weyl counter).
 *
 * Output k of stream (seed, stream) is mix(key + (k+1) * golden) with a key
 * derived from both inputs, so any worker stream is reproducible from its
 * index alone.
 */
class CounterRng
{
  public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()();

    //! Skip ahead n draws
    void discard(std::uint64_t n) { counter_ += n; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_{0};
};

//---------------------------------------------------------------------------//
/*!
 * Sampling parameters.
 *
 * Samples are split into n_workers contiguous chunks, chunk w drawn from
 * stream (seed, w). Results depend only on (seed, n_workers, n_samples).
 */
struct SamplerConfig
{
    std::uint64_t seed{42};
    int dim{2};
    std::size_t n_samples{1'000'000};
    int n_workers{default_workers()};

    //! 8, or the UNC_PDF_THREADS environment variable when set
    static int default_workers();

    void validate() const;
};

//! Visitor receives (sample index, normalized amplitudes). Called
//! concurrently from different workers with disjoint indices.
using StateVisitor = std::function<void(std::size_t, CVector const&)>;

//! Draw Haar-random states: d iid standard complex Gaussians, normalized
void visit_pure(SamplerConfig const& cfg, StateVisitor const& visit);

//! Materialized stream of Haar-random states (small n only)
std::vector<PureState> sample_pure(SamplerConfig const& cfg);

enum class Statistic
{
    expectation,
    std_dev,
};

//! One output column: a statistic of one of the input observables
struct SampleColumn
{
    std::size_t observable;
    Statistic statistic;
};

//! Row-major table of sample tuples
struct SampleTable
{
    std::size_t cols{0};
    std::vector<double> data;

    std::size_t rows() const { return cols ? data.size() / cols : 0; }
    double operator()(std::size_t row, std::size_t col) const
    {
        return data[row * cols + col];
    }
    std::vector<double> column(std::size_t col) const;
};

//! Same statistic for every observable, in declaration order
SampleTable sample_statistics(std::span<HermitianObservable const> observables,
                              SamplerConfig const& cfg,
                              Statistic which);

//! Arbitrary statistic per column
SampleTable sample_statistics(std::span<HermitianObservable const> observables,
                              SamplerConfig const& cfg,
                              std::span<SampleColumn const> columns);

//---------------------------------------------------------------------------//
// HISTOGRAMS
//---------------------------------------------------------------------------//

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins);

struct Histogram1D
{
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    std::uint64_t underflow{0};
    std::uint64_t overflow{0};
    std::uint64_t total{0};

    std::size_t bins() const { return counts.size(); }
    //! Out-of-range samples (underflow + overflow)
    std::uint64_t outside() const { return underflow + overflow; }
    void merge(Histogram1D const& other);
};

struct Histogram2D
{
    std::vector<double> x_edges;
    std::vector<double> y_edges;
    //! Row-major: counts[ix * ny + iy]
    std::vector<std::uint64_t> counts;
    std::uint64_t overflow{0};
    std::uint64_t total{0};

    std::size_t nx() const { return x_edges.size() - 1; }
    std::size_t ny() const { return y_edges.size() - 1; }
    std::uint64_t at(std::size_t ix, std::size_t iy) const
    {
        return counts[ix * this->ny() + iy];
    }
    void merge(Histogram2D const& other);
};

//! Bin index for value in strictly increasing edges; upper edge inclusive
std::ptrdiff_t find_bin(std::span<double const> edges, double value);

Histogram1D histogram(std::span<double const> samples,
                      std::span<double const> edges);

Histogram2D histogram(std::span<double const> xs,
                      std::span<double const> ys,
                      std::span<double const> x_edges,
                      std::span<double const> y_edges);

}  // namespace uncpdf
