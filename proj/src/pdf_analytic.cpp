#include "uncpdf/pdf_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uncpdf/regions.hpp"

namespace uncpdf
{
namespace
{
constexpr double inf = std::numeric_limits<double>::infinity();

std::vector<double> sorted_unique(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<double> scale_all(std::vector<double> v, double k)
{
    for (auto& x : v)
        x *= k;
    return v;
}

//! Disjoint pieces covering the union of intervals, split at every endpoint
std::vector<Interval> split_union(std::vector<Interval> const& parts)
{
    std::vector<double> ends;
    for (auto const& p : parts)
    {
        if (p.hi > p.lo)
        {
            ends.push_back(p.lo);
            ends.push_back(p.hi);
        }
    }
    ends = sorted_unique(std::move(ends));
    std::vector<Interval> out;
    for (std::size_t i = 1; i < ends.size(); ++i)
    {
        double const mid = 0.5 * (ends[i - 1] + ends[i]);
        bool const covered = std::any_of(parts.begin(), parts.end(),
                                         [&](Interval const& p) {
                                             return p.hi > p.lo && mid > p.lo
                                                    && mid < p.hi;
                                         });
        if (covered)
            out.push_back({ends[i - 1], ends[i]});
    }
    return out;
}

//---------------------------------------------------------------------------//
//! Joint density of (<A>, <B>) for independent Bloch vectors
struct PairEllipse
{
    double a0, b0;
    //! Inverse Gram entries [[p, q], [q, w]]
    double p, q, w;
    double det;

    PairEllipse(QubitObservable const& a, QubitObservable const& b)
        : a0(a.a0), b0(b.a0)
    {
        double const taa = a.a.squaredNorm();
        double const tbb = b.a.squaredNorm();
        double const tab = a.a.dot(b.a);
        det = taa * tbb - tab * tab;
        p = tbb / det;
        q = -tab / det;
        w = taa / det;
    }

    double omega_sq(double dr, double ds) const
    {
        return p * dr * dr + 2 * q * dr * ds + w * ds * ds;
    }

    double density(double r, double s) const
    {
        double const om2 = this->omega_sq(r - a0, s - b0);
        if (om2 > 1)
            return 0;
        if (om2 == 1)
            return inf;
        return 1 / (2 * std::numbers::pi * std::sqrt(det * (1 - om2)));
    }

    //! Range of ds with omega <= 1 at fixed dr
    std::optional<Interval> ds_range(double dr) const
    {
        double const disc = w - dr * dr / det;
        if (!(disc >= 0))
            return std::nullopt;
        double const root = std::sqrt(disc);
        return Interval{(-q * dr - root) / w, (-q * dr + root) / w};
    }
};

void check_rank2(GramMatrix const& g)
{
    if (g.numerical_rank() < 2)
        fail(ErrorCode::singular_gram, "Bloch vectors are linearly dependent");
}

GramMatrix pair_gram(QubitObservable const& a, QubitObservable const& b)
{
    std::array<Vec3, 2> v{a.a, b.a};
    return gram(v);
}

Density2D pair_expectation_density(QubitObservable const& a,
                                   QubitObservable const& b)
{
    PairEllipse const e(a, b);
    double const na = a.norm();
    double const nb = b.norm();
    Density2D d;
    d.u_name = "r";
    d.v_name = "s";
    d.density = [e](double r, double s) { return e.density(r, s); };
    d.contains = [e](double r, double s, double tol) {
        return e.omega_sq(r - e.a0, s - e.b0) <= 1 + tol;
    };
    d.u_range = {a.a0 - na, a.a0 + na};
    d.v_range = {b.a0 - nb, b.a0 + nb};
    d.u_cuts = {d.u_range.lo, d.u_range.hi};
    d.v_pieces = [e](double r) {
        std::vector<Interval> out;
        if (auto ds = e.ds_range(r - e.a0); ds && ds->hi > ds->lo)
            out.push_back({e.b0 + ds->lo, e.b0 + ds->hi});
        return out;
    };
    return d;
}
}  // namespace

//---------------------------------------------------------------------------//
// PDF1D
//---------------------------------------------------------------------------//
Pdf1D::Pdf1D(std::string variable,
             Evaluator f,
             Interval support,
             std::vector<double> breakpoints,
             std::vector<double> singular_points)
    : variable_(std::move(variable))
    , f_(std::move(f))
    , support_(support)
    , breakpoints_(sorted_unique(std::move(breakpoints)))
    , singular_(sorted_unique(std::move(singular_points)))
{
    if (!(support_.hi > support_.lo))
        fail(ErrorCode::invalid_argument, "density support is empty");
    cuts_.push_back(support_.lo);
    for (double b : breakpoints_)
    {
        if (b > support_.lo && b < support_.hi)
            cuts_.push_back(b);
    }
    cuts_.push_back(support_.hi);
    piece_mass_.assign(1, 0.0);
    for (std::size_t i = 1; i < cuts_.size(); ++i)
    {
        piece_mass_.push_back(
            piece_mass_.back()
            + integrate_endpoint_singular(f_, cuts_[i - 1], cuts_[i], 1e-13));
    }
}

PdfValue Pdf1D::eval(double x) const
{
    if (!support_.contains(x))
        return {0, false};
    if (std::binary_search(singular_.begin(), singular_.end(), x))
        return {inf, true};
    double const v = f_(x);
    if (!std::isfinite(v))
        return {inf, true};
    return {v, false};
}

double Pdf1D::cdf(double x, double abs_tol) const
{
    if (!(x > support_.lo))
        return 0;
    if (x >= support_.hi)
        return piece_mass_.back();
    auto it = std::upper_bound(cuts_.begin(), cuts_.end(), x);
    auto const k = static_cast<std::size_t>(it - cuts_.begin()) - 1;
    double const lo = cuts_[k];
    double const hi = cuts_[k + 1];
    if (x - lo <= hi - x)
        return piece_mass_[k] + integrate_endpoint_singular(f_, lo, x, abs_tol);
    return piece_mass_[k + 1] - integrate_endpoint_singular(f_, x, hi, abs_tol);
}

double Pdf1D::mass(double a, double b, double abs_tol) const
{
    if (!(b > a))
        return 0;
    return this->cdf(b, abs_tol) - this->cdf(a, abs_tol);
}

Pdf1D Pdf1D::scaled(double kappa) const
{
    if (!(kappa > 0))
        fail(ErrorCode::invalid_argument, "scale factor must be positive");
    return Pdf1D(variable_,
                 [f = f_, kappa](double x) { return f(x / kappa) / kappa; },
                 {support_.lo * kappa, support_.hi * kappa},
                 scale_all(breakpoints_, kappa),
                 scale_all(singular_, kappa));
}

//---------------------------------------------------------------------------//
// DENSITY2D
//---------------------------------------------------------------------------//
double Density2D::mass(double u0, double u1, double v0, double v1,
                       double abs_tol) const
{
    u0 = std::max(u0, u_range.lo);
    u1 = std::min(u1, u_range.hi);
    v0 = std::max(v0, v_range.lo);
    v1 = std::min(v1, v_range.hi);
    if (!(u1 > u0) || !(v1 > v0))
        return 0;

    std::vector<double> cuts{u0};
    for (double c : u_cuts)
    {
        if (c > u0 && c < u1)
            cuts.push_back(c);
    }
    cuts.push_back(u1);
    cuts = sorted_unique(std::move(cuts));

    constexpr int max_inner_panels = 256;
    constexpr int max_outer_panels = 512;
    double const inner_tol = 0.1 * abs_tol / std::max(1.0, u1 - u0);
    auto inner = [&](double u) {
        double total = 0;
        for (auto const& piece : v_pieces(u))
        {
            double const lo = std::max(piece.lo, v0);
            double const hi = std::min(piece.hi, v1);
            if (hi > lo)
            {
                total += integrate_endpoint_singular(
                    [&](double v) { return density(u, v); }, lo, hi, inner_tol,
                    max_inner_panels);
            }
        }
        return total;
    };
    double const outer_tol = abs_tol / static_cast<double>(cuts.size());
    double total = 0;
    for (std::size_t i = 1; i < cuts.size(); ++i)
        total += integrate_endpoint_singular(inner, cuts[i - 1], cuts[i],
                                             outer_tol, max_outer_panels);
    return total;
}

double Density2D::total_mass(double abs_tol) const
{
    return this->mass(u_range.lo, u_range.hi, v_range.lo, v_range.hi, abs_tol);
}

Density2D Density2D::scaled(double kappa) const
{
    if (!(kappa > 0))
        fail(ErrorCode::invalid_argument, "scale factor must be positive");
    Density2D out;
    out.u_name = u_name;
    out.v_name = v_name;
    out.density = [f = density, kappa](double u, double v) {
        return f(u / kappa, v / kappa) / (kappa * kappa);
    };
    out.contains = [c = contains, kappa](double u, double v, double tol) {
        return c(u / kappa, v / kappa, tol / kappa);
    };
    out.u_range = {u_range.lo * kappa, u_range.hi * kappa};
    out.v_range = {v_range.lo * kappa, v_range.hi * kappa};
    out.u_cuts = scale_all(u_cuts, kappa);
    out.v_pieces = [p = v_pieces, kappa](double u) {
        auto pieces = p(u / kappa);
        for (auto& iv : pieces)
            iv = {iv.lo * kappa, iv.hi * kappa};
        return pieces;
    };
    return out;
}

//---------------------------------------------------------------------------//
// SINGULAR VARIANTS
//---------------------------------------------------------------------------//
double LinearConstraint::slack(std::span<double const> point,
                               std::span<double const> center) const
{
    double rhs = 0;
    for (auto const& [k, kappa] : terms)
        rhs += kappa * (point[k] - center[k]);
    return (point[dependent] - center[dependent]) - rhs;
}

double LineSingular::max_slack(std::span<double const> point) const
{
    double worst = 0;
    for (auto const& c : constraints)
        worst = std::max(worst, std::abs(c.slack(point, center)));
    return worst;
}

double SurfaceSingular::weight() const
{
    return 1 / (4 * std::numbers::pi * std::sqrt(gram_det));
}

double SurfaceSingular::omega(std::span<double const> point) const
{
    Eigen::Vector3d d(point[0] - center[0], point[1] - center[1],
                      point[2] - center[2]);
    return std::sqrt(std::max(0.0, d.dot(gram_inverse * d)));
}

char const* variant_name(JointDistribution const& dist)
{
    switch (dist.index())
    {
        case 0:
            return "density";
        case 1:
            return "line_singular";
        default:
            return "surface_singular";
    }
}

JointDistribution scaled(JointDistribution const& dist, double kappa)
{
    if (!(kappa > 0))
        fail(ErrorCode::invalid_argument, "scale factor must be positive");
    if (auto const* d = std::get_if<Density2D>(&dist))
        return d->scaled(kappa);
    if (auto const* line = std::get_if<LineSingular>(&dist))
    {
        LineSingular out = *line;
        for (double& c : out.center)
            c *= kappa;
        out.profile = std::visit(
            [kappa](auto const& p) -> std::variant<Density2D, Pdf1D> {
                return p.scaled(kappa);
            },
            line->profile);
        return out;
    }
    SurfaceSingular out = std::get<SurfaceSingular>(dist);
    for (double& c : out.center)
        c *= kappa;
    out.gram *= kappa * kappa;
    out.gram_inverse /= kappa * kappa;
    out.gram_det *= std::pow(kappa, 6);
    return out;
}

//---------------------------------------------------------------------------//
// ONE-DIMENSIONAL DENSITIES
//---------------------------------------------------------------------------//
std::optional<std::pair<double, double>>
quad_roots(double lam1, double lam2, double x)
{
    double const width = lam2 - lam1;
    double const disc = width * width - 4 * x * x;
    if (disc < 0 || x < 0)
        return std::nullopt;
    double const root = std::sqrt(disc);
    return std::make_pair(0.5 * (lam1 + lam2 - root),
                          0.5 * (lam1 + lam2 + root));
}

double vandermonde(std::span<double const> a)
{
    double v = 1;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        for (std::size_t j = i + 1; j < a.size(); ++j)
            v *= a[j] - a[i];
    }
    return v;
}

Pdf1D pdf_expectation(Spectrum const& spec)
{
    spec.require_simple();
    auto const lam = spec.values();
    int const d = spec.dim();
    std::vector<double> inv_den(lam.size());
    for (int i = 0; i < d; ++i)
    {
        double den = 1;
        for (int j = 0; j < d; ++j)
        {
            if (j != i)
                den *= lam[i] - lam[j];
        }
        inv_den[i] = 1 / den;
    }
    double const sign = (d % 2 == 0) ? -1.0 : 1.0;
    double const mid = 0.5 * (lam.front() + lam.back());

    // The full sum over i vanishes identically, so summing the complementary
    // terms (lam_i > r) with opposite sign avoids cancellation near the top.
    auto f = [lam, inv_den, sign, d, mid](double r) {
        if (r < lam.front() || r > lam.back())
            return 0.0;
        bool const below = r <= mid;
        double sum = 0;
        for (int i = 0; i < d; ++i)
        {
            bool const active = r >= lam[i];
            if (active != below)
                continue;
            double term = inv_den[i];
            for (int k = 0; k < d - 2; ++k)
                term *= r - lam[i];
            sum += term;
        }
        if (!below)
            sum = -sum;
        return std::max(0.0, sign * (d - 1) * sum);
    };
    return Pdf1D("r", f, {lam.front(), lam.back()}, lam);
}

Pdf1D pdf_uncertainty_qubit(QubitObservable const& q)
{
    q.require_nontrivial();
    double const n = q.norm();
    auto f = [n](double x) {
        if (x < 0 || x > n)
            return 0.0;
        if (x == n)
            return inf;
        return x / (n * std::sqrt((n - x) * (n + x)));
    };
    return Pdf1D("x", f, {0, n}, {n}, {n});
}

//---------------------------------------------------------------------------//
// QUBIT PAIRS AND TRIPLES
//---------------------------------------------------------------------------//
double omega2(QubitObservable const& a, QubitObservable const& b,
              double r, double s)
{
    auto const g = pair_gram(a, b);
    check_rank2(g);
    PairEllipse const e(a, b);
    return std::sqrt(std::max(0.0, e.omega_sq(r - a.a0, s - b.a0)));
}

double omega3(QubitObservable const& a, QubitObservable const& b,
              QubitObservable const& c, double r, double s, double t)
{
    auto dist = joint_expectations_qubit3(a, b, c);
    auto const* surf = std::get_if<SurfaceSingular>(&dist);
    if (!surf)
        fail(ErrorCode::singular_gram, "Bloch vectors are linearly dependent");
    std::array<double, 3> const p{r, s, t};
    return surf->omega(p);
}

JointDistribution joint_expectations_qubit2(QubitObservable const& a,
                                            QubitObservable const& b)
{
    a.require_nontrivial();
    b.require_nontrivial();
    auto const g = pair_gram(a, b);
    if (g.numerical_rank() == 2)
        return pair_expectation_density(a, b);

    double const kappa = a.a.dot(b.a) / a.a.squaredNorm();
    LineSingular line;
    line.center = {a.a0, b.a0};
    line.constraints.push_back({1, {{0, kappa}}});
    line.free_coordinates = {0};
    line.profile = pdf_expectation(a.spectrum());
    return line;
}

Density2D joint_uncertainties_qubit2(QubitObservable const& a,
                                     QubitObservable const& b)
{
    a.require_nontrivial();
    b.require_nontrivial();
    check_rank2(pair_gram(a, b));

    PairEllipse const e(a, b);
    double const na = a.norm();
    double const nb = b.norm();
    double const tab = a.a.dot(b.a);

    Density2D d;
    d.u_name = "x";
    d.v_name = "y";
    d.density = [e, na, nb](double x, double y) {
        if (x < 0 || y < 0 || x > na || y > nb)
            return 0.0;
        double const p = std::sqrt((na - x) * (na + x));
        double const q = std::sqrt((nb - y) * (nb + y));
        double const r = e.a0 + p;
        double const sum = e.density(r, e.b0 + q) + e.density(r, e.b0 - q);
        if (sum == 0)
            return 0.0;
        if (p == 0 || q == 0)
            return inf;
        return 2 * x * y * sum / (p * q);
    };
    d.contains = [na, nb, tab](double x, double y, double tol) {
        return qubit_pair_slack(na, nb, tab, x, y) >= -tol;
    };
    d.u_range = {0, na};
    d.v_range = {0, nb};
    d.u_cuts = {0, na};
    d.v_pieces = [e, na, nb](double x) {
        std::vector<Interval> parts;
        double const p = std::sqrt(std::max(0.0, (na - x) * (na + x)));
        auto const ds = e.ds_range(p);
        if (!ds)
            return parts;
        auto add = [&](double qlo, double qhi) {
            qlo = std::max(qlo, 0.0);
            qhi = std::min(qhi, nb);
            if (!(qhi > qlo))
                return;
            parts.push_back(
                {std::sqrt(std::max(0.0, (nb - qhi) * (nb + qhi))),
                 std::sqrt(std::max(0.0, (nb - qlo) * (nb + qlo)))});
        };
        add(ds->lo, ds->hi);
        add(-ds->hi, -ds->lo);
        return split_union(parts);
    };
    return d;
}

std::variant<Density2D, UncertaintyCurve>
uncertainty_relation_qubit2(QubitObservable const& a, QubitObservable const& b)
{
    a.require_nontrivial();
    b.require_nontrivial();
    if (pair_gram(a, b).numerical_rank() == 2)
        return joint_uncertainties_qubit2(a, b);
    double const kappa = a.a.dot(b.a) / a.a.squaredNorm();
    return UncertaintyCurve{std::abs(kappa), pdf_uncertainty_qubit(a)};
}

JointDistribution joint_expectations_qubit3(QubitObservable const& a,
                                            QubitObservable const& b,
                                            QubitObservable const& c)
{
    std::array<QubitObservable const*, 3> const obs{&a, &b, &c};
    for (auto const* o : obs)
        o->require_nontrivial();
    std::array<Vec3, 3> vecs{a.a, b.a, c.a};
    auto const g = gram(vecs);
    std::vector<double> const center{a.a0, b.a0, c.a0};

    if (g.numerical_rank() == 3)
    {
        SurfaceSingular surf;
        surf.center = {a.a0, b.a0, c.a0};
        surf.gram = g.entries();
        surf.gram_inverse = g.inverse();
        surf.gram_det = g.det();
        return surf;
    }

    LineSingular line;
    line.center = center;
    if (g.numerical_rank() == 2)
    {
        std::array<std::array<std::size_t, 3>, 3> const choices{
            {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}}};
        for (auto const& [i, j, k] : choices)
        {
            if (pair_gram(*obs[i], *obs[j]).numerical_rank() < 2)
                continue;
            auto const& t = g.entries();
            Eigen::Matrix2d sub;
            sub << t(i, i), t(i, j), t(j, i), t(j, j);
            Eigen::Vector2d rhs(t(i, k), t(j, k));
            Eigen::Vector2d const kappa = sub.ldlt().solve(rhs);
            line.constraints.push_back({k, {{i, kappa[0]}, {j, kappa[1]}}});
            line.free_coordinates = {i, j};
            line.profile = pair_expectation_density(*obs[i], *obs[j]);
            return line;
        }
        fail(ErrorCode::internal, "no independent pair in a rank-2 triple");
    }

    double const n0 = a.a.squaredNorm();
    line.constraints.push_back({1, {{0, a.a.dot(b.a) / n0}}});
    line.constraints.push_back({2, {{0, a.a.dot(c.a) / n0}}});
    line.free_coordinates = {0};
    line.profile = pdf_expectation(a.spectrum());
    return line;
}

UncertaintySurface::UncertaintySurface(QubitObservable const& a,
                                       QubitObservable const& b,
                                       QubitObservable const& c)
{
    auto dist = joint_expectations_qubit3(a, b, c);
    auto* surf = std::get_if<SurfaceSingular>(&dist);
    if (!surf)
        fail(ErrorCode::singular_gram, "Bloch vectors are linearly dependent");
    surface_ = *surf;
    norms_ = {a.norm(), b.norm(), c.norm()};
}

double UncertaintySurface::min_branch_slack(double x, double y, double z) const
{
    std::array<double, 3> const v{x, y, z};
    std::array<double, 3> gap2{};
    for (int i = 0; i < 3; ++i)
    {
        double const n = norms_[i];
        if (v[i] < -1e-12 * n || v[i] > n * (1 + 1e-12))
            return inf;
        // a^2 - x^2 directly keeps the diagonal terms well conditioned
        gap2[i] = std::max(0.0, (n - v[i]) * (n + v[i]));
    }
    auto const& ti = surface_.gram_inverse;
    double const p = std::sqrt(gap2[0]);
    double const q = std::sqrt(gap2[1]);
    double const r = std::sqrt(gap2[2]);
    double const diag = ti(0, 0) * gap2[0] + ti(1, 1) * gap2[1]
                        + ti(2, 2) * gap2[2];
    double best = inf;
    for (int j : {1, -1})
    {
        for (int k : {1, -1})
        {
            double const om2 = diag + 2 * ti(0, 1) * p * j * q
                               + 2 * ti(0, 2) * p * k * r
                               + 2 * ti(1, 2) * j * q * k * r;
            best = std::min(best, std::abs(std::sqrt(std::max(om2, 0.0)) - 1));
        }
    }
    return best;
}

bool UncertaintySurface::contains(double x, double y, double z,
                                  double tol) const
{
    return this->min_branch_slack(x, y, z) <= tol;
}

double UncertaintySurface::weight(double x, double y, double z) const
{
    double prod = 1;
    std::array<double, 3> const v{x, y, z};
    for (int i = 0; i < 3; ++i)
    {
        double const n = norms_[i];
        if (v[i] < 0 || v[i] > n)
            return 0;
        prod *= (n - v[i]) * (n + v[i]);
    }
    if (prod == 0)
        return inf;
    return 2 * x * y * z / std::sqrt(prod) * surface_.weight();
}

UncertaintySurface uncertainty_surface_qubit3(QubitObservable const& a,
                                              QubitObservable const& b,
                                              QubitObservable const& c)
{
    return UncertaintySurface(a, b, c);
}

}  // namespace uncpdf
