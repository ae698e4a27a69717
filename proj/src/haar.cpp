#include "uncpdf/haar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "parallel.hpp"

namespace uncpdf
{
namespace
{
using detail::run_workers;

constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

//---------------------------------------------------------------------------//
CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed) ^ mix64(stream + golden_gamma)))
{
}

CounterRng::result_type CounterRng::operator()()
{
    ++counter_;
    return mix64(key_ + counter_ * golden_gamma);
}

//---------------------------------------------------------------------------//
int SamplerConfig::default_workers()
{
    if (char const* env = std::getenv("UNC_PDF_THREADS"))
    {
        char* end = nullptr;
        long const v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v <= 4096)
            return static_cast<int>(v);
    }
    return 8;
}

void SamplerConfig::validate() const
{
    if (dim < 1)
        fail(ErrorCode::dim_too_small, "sampler dim must be >= 1");
    if (n_samples < 1)
        fail(ErrorCode::invalid_argument, "n_samples must be >= 1");
    if (n_workers < 1)
        fail(ErrorCode::invalid_argument, "n_workers must be >= 1");
}

void visit_pure(SamplerConfig const& cfg, StateVisitor const& visit)
{
    cfg.validate();
    std::size_t const n = cfg.n_samples;
    auto const workers = static_cast<std::size_t>(cfg.n_workers);
    run_workers(cfg.n_workers, [&](int w) {
        std::size_t const begin = n * static_cast<std::size_t>(w) / workers;
        std::size_t const end = n * static_cast<std::size_t>(w + 1) / workers;
        CounterRng rng(cfg.seed, static_cast<std::uint64_t>(w));
        std::normal_distribution<double> gauss(0.0, 1.0);
        CVector v(cfg.dim);
        for (std::size_t i = begin; i < end; ++i)
        {
            double norm2 = 0;
            do
            {
                norm2 = 0;
                for (int k = 0; k < cfg.dim; ++k)
                {
                    double const re = gauss(rng);
                    double const im = gauss(rng);
                    v[k] = Complex(re, im);
                    norm2 += re * re + im * im;
                }
            } while (!(norm2 > 0));
            v /= std::sqrt(norm2);
            visit(i, v);
        }
    });
}

std::vector<PureState> sample_pure(SamplerConfig const& cfg)
{
    std::vector<CVector> raw(cfg.n_samples);
    visit_pure(cfg, [&](std::size_t i, CVector const& v) { raw[i] = v; });
    std::vector<PureState> out;
    out.reserve(raw.size());
    for (auto& v : raw)
        out.push_back(PureState::normalized(std::move(v)));
    return out;
}

//---------------------------------------------------------------------------//
std::vector<double> SampleTable::column(std::size_t col) const
{
    std::vector<double> out(this->rows());
    for (std::size_t r = 0; r < out.size(); ++r)
        out[r] = data[r * cols + col];
    return out;
}

SampleTable sample_statistics(std::span<HermitianObservable const> observables,
                              SamplerConfig const& cfg,
                              Statistic which)
{
    std::vector<SampleColumn> cols;
    for (std::size_t i = 0; i < observables.size(); ++i)
        cols.push_back({i, which});
    return sample_statistics(observables, cfg, cols);
}

SampleTable sample_statistics(std::span<HermitianObservable const> observables,
                              SamplerConfig const& cfg,
                              std::span<SampleColumn const> columns)
{
    for (auto const& obs : observables)
    {
        if (obs.dim() != cfg.dim)
            fail(ErrorCode::dim_mismatch,
                 "observable dim does not match sampler dim");
    }
    for (auto const& c : columns)
    {
        if (c.observable >= observables.size())
            fail(ErrorCode::invalid_argument, "column refers to no observable");
    }
    SampleTable table;
    table.cols = columns.size();
    table.data.assign(cfg.n_samples * columns.size(), 0.0);

    visit_pure(cfg, [&](std::size_t i, CVector const& v) {
        // Each worker gets its own scratch via thread_local
        thread_local std::vector<double> means, stds;
        means.assign(observables.size(), 0.0);
        stds.assign(observables.size(), 0.0);
        for (std::size_t k = 0; k < observables.size(); ++k)
        {
            CVector const av = observables[k].matrix() * v;
            double const mean = v.dot(av).real();
            means[k] = mean;
            stds[k] = std::sqrt((av - mean * v).squaredNorm());
        }
        double* row = table.data.data() + i * table.cols;
        for (std::size_t c = 0; c < columns.size(); ++c)
        {
            auto const& col = columns[c];
            row[c] = col.statistic == Statistic::expectation
                         ? means[col.observable]
                         : stds[col.observable];
        }
    });
    return table;
}

//---------------------------------------------------------------------------//
std::vector<double> uniform_edges(double lo, double hi, std::size_t bins)
{
    if (bins < 1 || !(hi > lo))
        fail(ErrorCode::non_monotone_edges, "need hi > lo and bins >= 1");
    std::vector<double> edges(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        edges[i] = lo + (hi - lo) * static_cast<double>(i) / bins;
    edges.back() = hi;
    return edges;
}

namespace
{
void check_edges(std::span<double const> edges)
{
    if (edges.size() < 2)
        fail(ErrorCode::non_monotone_edges, "need at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
    {
        if (!(edges[i] > edges[i - 1]))
            fail(ErrorCode::non_monotone_edges,
                 "histogram edges must be strictly increasing");
    }
}
}  // namespace

std::ptrdiff_t find_bin(std::span<double const> edges, double value)
{
    if (value < edges.front() || value > edges.back())
        return -1;
    if (value == edges.back())
        return static_cast<std::ptrdiff_t>(edges.size()) - 2;
    auto it = std::upper_bound(edges.begin(), edges.end(), value);
    return (it - edges.begin()) - 1;
}

void Histogram1D::merge(Histogram1D const& other)
{
    if (other.edges != edges)
        fail(ErrorCode::invalid_argument, "cannot merge different binnings");
    for (std::size_t i = 0; i < counts.size(); ++i)
        counts[i] += other.counts[i];
    underflow += other.underflow;
    overflow += other.overflow;
    total += other.total;
}

void Histogram2D::merge(Histogram2D const& other)
{
    if (other.x_edges != x_edges || other.y_edges != y_edges)
        fail(ErrorCode::invalid_argument, "cannot merge different binnings");
    for (std::size_t i = 0; i < counts.size(); ++i)
        counts[i] += other.counts[i];
    overflow += other.overflow;
    total += other.total;
}

Histogram1D histogram(std::span<double const> samples,
                      std::span<double const> edges)
{
    check_edges(edges);
    Histogram1D h;
    h.edges.assign(edges.begin(), edges.end());
    h.counts.assign(edges.size() - 1, 0);
    for (double s : samples)
    {
        if (!std::isfinite(s))
            fail(ErrorCode::invalid_argument, "histogram sample is not finite");
        ++h.total;
        if (s < edges.front())
            ++h.underflow;
        else if (s > edges.back())
            ++h.overflow;
        else
            ++h.counts[static_cast<std::size_t>(find_bin(edges, s))];
    }
    return h;
}

Histogram2D histogram(std::span<double const> xs,
                      std::span<double const> ys,
                      std::span<double const> x_edges,
                      std::span<double const> y_edges)
{
    check_edges(x_edges);
    check_edges(y_edges);
    if (xs.size() != ys.size())
        fail(ErrorCode::dim_mismatch, "2D histogram needs paired samples");
    Histogram2D h;
    h.x_edges.assign(x_edges.begin(), x_edges.end());
    h.y_edges.assign(y_edges.begin(), y_edges.end());
    h.counts.assign(h.nx() * h.ny(), 0);
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
            fail(ErrorCode::invalid_argument, "histogram sample is not finite");
        ++h.total;
        auto const ix = find_bin(x_edges, xs[i]);
        auto const iy = find_bin(y_edges, ys[i]);
        if (ix < 0 || iy < 0)
        {
            ++h.overflow;
            continue;
        }
        ++h.counts[static_cast<std::size_t>(ix) * h.ny()
                   + static_cast<std::size_t>(iy)];
    }
    return h;
}

}  // namespace uncpdf
