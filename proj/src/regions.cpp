#include "uncpdf/regions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "uncpdf/haar.hpp"
#include "uncpdf/pdf_analytic.hpp"

namespace uncpdf
{
namespace
{
using VecX = Eigen::VectorXd;

struct SimplexResult
{
    VecX x;
    double f;
    int iterations;
    bool converged;
};

/*!
 * Nelder-Mead with standard coefficients. Stops when the spread of simplex
 * values is below ftol (absolute plus relative) or after max_iter steps.
 */
SimplexResult nelder_mead(std::function<double(VecX const&)> const& f,
                          VecX const& x0,
                          double step,
                          double ftol,
                          int max_iter)
{
    auto const n = x0.size();
    std::vector<VecX> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (Eigen::Index i = 0; i < n; ++i)
        pts[i + 1][i] += step;
    for (Eigen::Index i = 0; i <= n; ++i)
        vals[i] = f(pts[i]);

    std::vector<std::size_t> order(n + 1);
    int iter = 0;
    bool converged = false;
    for (; iter < max_iter; ++iter)
    {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return vals[a] < vals[b];
                         });
        std::size_t const best = order.front();
        std::size_t const worst = order.back();
        std::size_t const second = order[n - 1];
        if (vals[worst] - vals[best] <= ftol * (1 + std::abs(vals[best])))
        {
            converged = true;
            break;
        }

        VecX centroid = VecX::Zero(n);
        for (std::size_t i : order)
        {
            if (i != worst)
                centroid += pts[i];
        }
        centroid /= static_cast<double>(n);

        VecX const xr = centroid + (centroid - pts[worst]);
        double const fr = f(xr);
        if (fr < vals[best])
        {
            VecX const xe = centroid + 2 * (centroid - pts[worst]);
            double const fe = f(xe);
            if (fe < fr)
                pts[worst] = xe, vals[worst] = fe;
            else
                pts[worst] = xr, vals[worst] = fr;
            continue;
        }
        if (fr < vals[second])
        {
            pts[worst] = xr, vals[worst] = fr;
            continue;
        }
        bool const outside = fr < vals[worst];
        VecX const xc = outside ? VecX(centroid + 0.5 * (xr - centroid))
                                : VecX(centroid + 0.5 * (pts[worst] - centroid));
        double const fc = f(xc);
        if (fc < std::min(fr, vals[worst]))
        {
            pts[worst] = xc, vals[worst] = fc;
            continue;
        }
        for (std::size_t i : order)
        {
            if (i == best)
                continue;
            pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
            vals[i] = f(pts[i]);
        }
    }
    auto const it = std::min_element(vals.begin(), vals.end());
    auto const idx = static_cast<std::size_t>(it - vals.begin());
    return {pts[idx], *it, iter, converged};
}

//! Repeat simplex searches from the incumbent until they stop improving
SimplexResult polish(std::function<double(VecX const&)> const& f,
                     VecX x, double step, double ftol)
{
    SimplexResult best{x, f(x), 0, false};
    for (int round = 0; round < 12; ++round)
    {
        auto res = nelder_mead(f, best.x, step, ftol, 4000);
        best.iterations += res.iterations;
        bool const improved = res.f < best.f - ftol * (1 + std::abs(best.f));
        if (res.f < best.f)
        {
            best.x = res.x;
            best.f = res.f;
        }
        best.converged = res.converged;
        if (!improved)
            break;
        step = std::max(step * 0.5, 1e-6);
    }
    return best;
}

//! Orthonormal tangent basis at a unit vector
std::pair<Vec3, Vec3> tangent_basis(Vec3 const& u)
{
    Vec3 const helper = std::abs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 const e1 = u.cross(helper).normalized();
    Vec3 const e2 = u.cross(e1);
    return {e1, e2};
}

double qubit_std(QubitObservable const& q, Vec3 const& u)
{
    // |a|^2 - (a.u)^2 = |a x u|^2 for unit u, without the cancellation
    return q.a.cross(u).norm();
}

std::vector<double> stddevs_at(std::span<HermitianObservable const> obs,
                               PureState const& psi)
{
    std::vector<double> out;
    out.reserve(obs.size());
    for (auto const& o : obs)
        out.push_back(std_dev(o, psi));
    return out;
}

OptimResult finish(Objective const& objective,
                   std::span<HermitianObservable const> obs,
                   PureState state,
                   int iterations,
                   bool converged)
{
    OptimResult res;
    res.argmin_uncertainties = stddevs_at(obs, state);
    res.minimum = objective(res.argmin_uncertainties);
    res.witness_state = std::move(state);
    res.iterations = iterations;
    res.converged = converged;
    return res;
}
}  // namespace

//---------------------------------------------------------------------------//
// OBJECTIVE
//---------------------------------------------------------------------------//
Objective Objective::weighted(std::vector<double> weights, int exponent)
{
    Objective obj{Kind::weighted, std::move(weights), exponent};
    if (exponent != 1 && exponent != 2)
        fail(ErrorCode::invalid_argument, "objective exponent must be 1 or 2");
    for (double w : obj.weights)
    {
        if (!(w > 0))
            fail(ErrorCode::invalid_argument, "objective weights must be > 0");
    }
    return obj;
}

void Objective::validate(std::size_t n_observables) const
{
    if (n_observables == 0)
        fail(ErrorCode::invalid_argument, "need at least one observable");
    if (kind == Kind::weighted && weights.size() != n_observables)
        fail(ErrorCode::dim_mismatch, "one weight per observable required");
}

double Objective::operator()(std::span<double const> stddevs) const
{
    double total = 0;
    for (std::size_t i = 0; i < stddevs.size(); ++i)
    {
        double const s = stddevs[i];
        switch (kind)
        {
            case Kind::sum_of_variances:
                total += s * s;
                break;
            case Kind::sum_of_stddevs:
                total += s;
                break;
            case Kind::weighted:
                total += weights[i] * (exponent == 1 ? s : s * s);
                break;
        }
    }
    return total;
}

//---------------------------------------------------------------------------//
// MEMBERSHIP
//---------------------------------------------------------------------------//
std::vector<Interval> supercube_bound(std::span<Spectrum const> spectra)
{
    std::vector<Interval> out;
    out.reserve(spectra.size());
    for (auto const& s : spectra)
        out.push_back({0, 0.5 * s.width()});
    return out;
}

double qubit_pair_slack(double norm_a, double norm_b, double dot_ab,
                        double x, double y)
{
    x = std::clamp(x, 0.0, norm_a);
    y = std::clamp(y, 0.0, norm_b);
    double const a2 = norm_a * norm_a;
    double const b2 = norm_b * norm_b;
    double const cross
        = std::sqrt((norm_a - x) * (norm_a + x) * (norm_b - y) * (norm_b + y));
    return b2 * x * x + a2 * y * y + 2 * std::abs(dot_ab) * cross
           - (a2 * b2 + dot_ab * dot_ab);
}

bool qubit_pair_contains(QubitObservable const& a,
                         QubitObservable const& b,
                         double x,
                         double y,
                         double tol)
{
    a.require_nontrivial();
    b.require_nontrivial();
    double const na = a.norm();
    double const nb = b.norm();
    if (x < -tol || y < -tol || x > na + tol || y > nb + tol)
        return false;
    return qubit_pair_slack(na, nb, a.a.dot(b.a), x, y) >= -tol;
}

bool qubit_triple_contains(QubitObservable const& a,
                           QubitObservable const& b,
                           QubitObservable const& c,
                           double x,
                           double y,
                           double z,
                           double tol)
{
    std::array<QubitObservable const*, 3> const obs{&a, &b, &c};
    std::array<double, 3> const v{x, y, z};
    for (int i = 0; i < 3; ++i)
    {
        if (v[i] < -tol || v[i] > obs[i]->norm() + tol)
            return false;
    }
    auto const dist = joint_expectations_qubit3(a, b, c);
    if (std::holds_alternative<SurfaceSingular>(dist))
        return UncertaintySurface(a, b, c).contains(x, y, z, tol);

    auto const& line = std::get<LineSingular>(dist);
    auto offset = [&](std::size_t i) {
        double const n = obs[i]->norm();
        double const xi = std::clamp(v[i], 0.0, n);
        return std::sqrt((n - xi) * (n + xi));
    };
    if (line.free_coordinates.size() == 1)
    {
        // Every Bloch vector is a multiple of the first one
        double const p = offset(0);
        for (auto const& con : line.constraints)
        {
            double const dk = con.terms.front().second * p;
            double const nk = obs[con.dependent]->norm();
            double const pred = nk * nk - dk * dk;
            double const xk = v[con.dependent];
            if (std::abs(pred - xk * xk) > tol * std::max(1.0, nk * nk))
                return false;
        }
        return true;
    }

    auto const i = line.free_coordinates[0];
    auto const j = line.free_coordinates[1];
    auto const& con = line.constraints.front();
    auto const k = con.dependent;
    std::array<Vec3, 2> pair{obs[i]->a, obs[j]->a};
    Eigen::MatrixXd const tinv = gram(pair).inverse();
    double const p = offset(i);
    double const q = offset(j);
    double const nk = obs[k]->norm();
    for (int sj : {1, -1})
    {
        for (int sk : {1, -1})
        {
            double const dp = sj * p;
            double const dq = sk * q;
            double const om2 = tinv(0, 0) * dp * dp + 2 * tinv(0, 1) * dp * dq
                               + tinv(1, 1) * dq * dq;
            if (om2 > 1 + tol)
                continue;
            double const dk = con.terms[0].second * dp + con.terms[1].second * dq;
            double const pred = nk * nk - dk * dk;
            if (std::abs(pred - v[k] * v[k]) <= tol * std::max(1.0, nk * nk))
                return true;
        }
    }
    return false;
}

//---------------------------------------------------------------------------//
// OPTIMIZATION
//---------------------------------------------------------------------------//
std::vector<Vec3> fibonacci_sphere(std::size_t n)
{
    std::vector<Vec3> out;
    out.reserve(n);
    double const golden_angle = std::numbers::pi * (3 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i)
    {
        double const z = 1 - (2.0 * i + 1) / static_cast<double>(n);
        double const rho = std::sqrt(std::max(0.0, 1 - z * z));
        double const phi = golden_angle * static_cast<double>(i);
        out.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
    }
    return out;
}

QubitObservable to_qubit(HermitianObservable const& obs)
{
    if (obs.dim() != 2)
        fail(ErrorCode::non_qubit, "observable is not 2x2");
    CMatrix const& m = obs.matrix();
    QubitObservable q;
    q.a0 = 0.5 * (m(0, 0) + m(1, 1)).real();
    q.a = Vec3(m(0, 1).real(), -m(0, 1).imag(),
               0.5 * (m(0, 0) - m(1, 1)).real());
    return q;
}

OptimResult minimize(Objective const& objective,
                     std::span<QubitObservable const> observables)
{
    objective.validate(observables.size());
    std::vector<HermitianObservable> herm;
    for (auto const& q : observables)
        herm.push_back(q.to_hermitian());

    auto at = [&](Vec3 const& u) {
        thread_local std::vector<double> sd;
        sd.clear();
        for (auto const& q : observables)
            sd.push_back(qubit_std(q, u));
        return objective(sd);
    };

    constexpr std::size_t n_lattice = 4096;
    constexpr std::size_t n_starts = 8;
    auto const lattice = fibonacci_sphere(n_lattice);
    std::vector<double> vals(lattice.size());
    for (std::size_t i = 0; i < lattice.size(); ++i)
        vals[i] = at(lattice[i]);
    std::vector<std::size_t> order(lattice.size());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + n_starts, order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return vals[a] < vals[b]
                                 || (vals[a] == vals[b] && a < b);
                      });

    double const spacing = std::sqrt(4 * std::numbers::pi / n_lattice);
    Vec3 best_u = lattice[order.front()];
    double best_f = vals[order.front()];
    int iterations = 0;
    bool converged = false;
    for (std::size_t s = 0; s < n_starts; ++s)
    {
        Vec3 const u0 = lattice[order[s]];
        auto const [e1, e2] = tangent_basis(u0);
        auto chart = [&, e1 = e1, e2 = e2](VecX const& t) {
            return Vec3(u0 + t[0] * e1 + t[1] * e2).normalized();
        };
        auto res = polish([&](VecX const& t) { return at(chart(t)); },
                          VecX::Zero(2), spacing, 1e-13);
        iterations += res.iterations;
        if (res.f < best_f)
        {
            best_f = res.f;
            best_u = chart(res.x);
            converged = res.converged;
        }
        else if (s == 0)
        {
            converged = res.converged;
        }
    }
    return finish(objective, herm, PureState::from_bloch(best_u), iterations,
                  converged);
}

OptimResult minimize_heuristic(Objective const& objective,
                               std::span<HermitianObservable const> observables,
                               int restarts,
                               std::uint64_t seed)
{
    objective.validate(observables.size());
    int const d = observables.front().dim();
    for (auto const& o : observables)
    {
        if (o.dim() != d)
            fail(ErrorCode::dim_mismatch, "observables have different dims");
    }
    if (restarts < 1)
        fail(ErrorCode::invalid_argument, "restarts must be >= 1");

    auto to_state = [d](VecX const& p) {
        CVector v(d);
        for (int k = 0; k < d; ++k)
            v[k] = Complex(p[2 * k], p[2 * k + 1]);
        double const n = v.norm();
        if (!(n > 1e-300))
            v = CVector::Unit(d, 0);
        else
            v /= n;
        return v;
    };
    auto eval = [&](VecX const& p) {
        CVector const v = to_state(p);
        thread_local std::vector<double> sd;
        sd.clear();
        for (auto const& o : observables)
        {
            CVector const av = o.matrix() * v;
            double const mean = v.dot(av).real();
            sd.push_back(std::sqrt((av - mean * v).squaredNorm()));
        }
        return objective(sd);
    };

    SamplerConfig cfg;
    cfg.seed = seed;
    cfg.dim = d;
    cfg.n_samples = static_cast<std::size_t>(restarts);
    cfg.n_workers = 1;
    auto const starts = sample_pure(cfg);

    struct Run
    {
        double f;
        VecX x;
        int iterations;
    };
    std::vector<Run> runs;
    for (auto const& s : starts)
    {
        VecX p(2 * d);
        for (int k = 0; k < d; ++k)
        {
            p[2 * k] = s.amplitudes()[k].real();
            p[2 * k + 1] = s.amplitudes()[k].imag();
        }
        auto res = polish(eval, p, 0.2, 1e-14);
        // Renormalize and polish once more so the chart stays well scaled
        CVector const v = to_state(res.x);
        for (int k = 0; k < d; ++k)
        {
            p[2 * k] = v[k].real();
            p[2 * k + 1] = v[k].imag();
        }
        auto again = polish(eval, p, 0.01, 1e-14);
        if (again.f <= res.f)
            res = again;
        runs.push_back({res.f, res.x, res.iterations + again.iterations});
    }
    std::vector<std::size_t> order(runs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return runs[a].f < runs[b].f;
                     });
    int iterations = 0;
    for (auto const& r : runs)
        iterations += r.iterations;
    auto const& best = runs[order.front()];
    bool const converged = runs.size() > 1
                           && runs[order[1]].f - best.f <= 1e-6;
    return finish(objective, observables, PureState(to_state(best.x)),
                  iterations, converged);
}

}  // namespace uncpdf
