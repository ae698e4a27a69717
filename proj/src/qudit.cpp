#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "uncpdf/pdf_analytic.hpp"

namespace uncpdf
{
namespace
{
//! sqrt(h^2 - x^2) raised to the given power, zero beyond h
double eps_pow(double h, double x, int power)
{
    if (x > h)
        return 0;
    double const e = std::sqrt((h - x) * (h + x));
    return power == 1 ? e : e * e * e;
}

std::vector<double> chord_cuts(SupportRegion const& region, double r,
                               double lo, double hi)
{
    std::vector<double> cuts{lo};
    int const d = region.dim();
    for (int i = 1; i <= d; ++i)
    {
        for (int j = i + 1; j <= d; ++j)
        {
            double const s = region.phi(i, j, r);
            if (s > lo && s < hi)
                cuts.push_back(s);
        }
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

//! Band index k (1-based) with a_k <= r <= a_{k+1}, 0 outside
int band_of(std::vector<double> const& a, double r)
{
    if (r < a.front() || r > a.back())
        return 0;
    auto it = std::upper_bound(a.begin(), a.end(), r);
    int k = static_cast<int>(it - a.begin());
    return std::min(k, static_cast<int>(a.size()) - 1);
}

/*!
 * Density on the (<A>, <A^2>) support built from a cell-wise evaluator.
 * With cut_chords the v-pieces are split at every interior chord.
 */
Density2D rs_density(SupportRegion const& region,
                     Density2D::Evaluator f,
                     bool cut_chords,
                     std::vector<double> extra_u_cuts)
{
    auto const& a = region.eigenvalues();
    Density2D d;
    d.u_name = "r";
    d.v_name = "s";
    d.density = std::move(f);
    d.contains = [region](double r, double s, double tol) {
        return region.contains_rs(r, s, tol);
    };
    d.u_range = {a.front(), a.back()};
    double smin = a.front() * a.front();
    double smax = smin;
    for (double v : a)
    {
        smin = std::min(smin, v * v);
        smax = std::max(smax, v * v);
    }
    d.v_range = {smin, smax};
    d.u_cuts = a;
    d.u_cuts.insert(d.u_cuts.end(), extra_u_cuts.begin(), extra_u_cuts.end());
    std::sort(d.u_cuts.begin(), d.u_cuts.end());
    d.v_pieces = [region, cut_chords](double r) {
        std::vector<Interval> out;
        int const k = band_of(region.eigenvalues(), r);
        if (k == 0)
            return out;
        double const lo = region.phi(k, k + 1, r);
        double const hi = region.phi(1, region.dim(), r);
        if (!(hi > lo))
            return out;
        if (!cut_chords)
            return std::vector<Interval>{{lo, hi}};
        auto const cuts = chord_cuts(region, r, lo, hi);
        for (std::size_t i = 1; i < cuts.size(); ++i)
            out.push_back({cuts[i - 1], cuts[i]});
        return out;
    };
    return d;
}

//! Push an (r, s) density forward to (r, x) with s = r^2 + x^2
Density2D rx_density(SupportRegion const& region, Density2D const& rs)
{
    auto const& a = region.eigenvalues();
    Density2D d;
    d.u_name = "r";
    d.v_name = "x";
    d.density = [f = rs.density](double r, double x) {
        if (x < 0)
            return 0.0;
        return 2 * x * f(r, r * r + x * x);
    };
    d.contains = [region](double r, double x, double tol) {
        return region.contains_rx(r, x, tol);
    };
    d.u_range = rs.u_range;
    d.v_range = {0, 0.5 * (a.back() - a.front())};
    d.u_cuts = rs.u_cuts;
    d.v_pieces = [p = rs.v_pieces](double r) {
        auto pieces = p(r);
        for (auto& iv : pieces)
        {
            iv = {std::sqrt(std::max(0.0, iv.lo - r * r)),
                  std::sqrt(std::max(0.0, iv.hi - r * r))};
        }
        return pieces;
    };
    return d;
}

void require_dim(Spectrum const& spec, int d)
{
    spec.require_simple();
    if (spec.dim() != d)
    {
        fail(ErrorCode::dim_mismatch,
             "expected a spectrum with " + std::to_string(d) + " levels");
    }
}

[[noreturn]] void unsupported(char const* what, char const* dims, int d)
{
    fail(ErrorCode::unsupported_dimension,
         std::string(what) + " is implemented for dimensions " + dims
             + ", got " + std::to_string(d));
}
}  // namespace

//---------------------------------------------------------------------------//
// SUPPORT REGION
//---------------------------------------------------------------------------//
SupportRegion::SupportRegion(Spectrum const& spec) : a_(spec.values())
{
    spec.require_simple();
}

double SupportRegion::phi(int i, int j, double r) const
{
    double const ai = a_[i - 1];
    double const aj = a_[j - 1];
    return (ai + aj) * r - ai * aj;
}

double SupportRegion::slack_rs(int k, double r, double s) const
{
    int const d = this->dim();
    return std::min({r - a_[k - 1], a_[k] - r, s - this->phi(k, k + 1, r),
                     this->phi(1, d, r) - s});
}

double SupportRegion::slack_rs(double r, double s) const
{
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 1; k < this->dim(); ++k)
        best = std::max(best, this->slack_rs(k, r, s));
    return best;
}

bool SupportRegion::contains_rs(double r, double s, double tol) const
{
    return this->slack_rs(r, s) >= -tol;
}

bool SupportRegion::contains_rx(double r, double x, double tol) const
{
    return x >= -tol && this->contains_rs(r, r * r + x * x, tol);
}

double SupportRegion::lower_x(int k, double r) const
{
    return std::sqrt(std::max(0.0, (a_[k] - r) * (r - a_[k - 1])));
}

double SupportRegion::upper_x(double r) const
{
    return std::sqrt(std::max(0.0, (a_.back() - r) * (r - a_.front())));
}

std::vector<SupportRegion::Polyline>
SupportRegion::boundary_rx(std::size_t points_per_arc) const
{
    points_per_arc = std::max<std::size_t>(points_per_arc, 2);
    auto arc = [&](std::string label, double lo, double hi, auto&& height) {
        Polyline line{std::move(label), {}};
        for (std::size_t i = 0; i < points_per_arc; ++i)
        {
            // Cosine spacing resolves the vertical tangents at the ends
            double const t = 0.5
                             * (1 - std::cos(std::numbers::pi * i
                                             / (points_per_arc - 1)));
            double const r = lo + (hi - lo) * t;
            line.points.push_back({r, height(r)});
        }
        return line;
    };
    std::vector<Polyline> out;
    out.push_back(arc("upper", a_.front(), a_.back(),
                      [this](double r) { return this->upper_x(r); }));
    for (int k = 1; k < this->dim(); ++k)
    {
        out.push_back(arc("lower_" + std::to_string(k), a_[k - 1], a_[k],
                          [this, k](double r) { return this->lower_x(k, r); }));
    }
    return out;
}

std::vector<SupportRegion::Polyline>
SupportRegion::boundary_rs(std::size_t points_per_chord) const
{
    points_per_chord = std::max<std::size_t>(points_per_chord, 2);
    auto chord = [&](std::string label, int i, int j, double lo, double hi) {
        Polyline line{std::move(label), {}};
        for (std::size_t n = 0; n < points_per_chord; ++n)
        {
            double const r = lo + (hi - lo) * n / (points_per_chord - 1);
            line.points.push_back({r, this->phi(i, j, r)});
        }
        return line;
    };
    std::vector<Polyline> out;
    int const d = this->dim();
    out.push_back(chord("upper", 1, d, a_.front(), a_.back()));
    for (int k = 1; k < d; ++k)
        out.push_back(
            chord("lower_" + std::to_string(k), k, k + 1, a_[k - 1], a_[k]));
    return out;
}

SupportRegion support_regions(Spectrum const& spec)
{
    return SupportRegion(spec);
}

//---------------------------------------------------------------------------//
// QUTRIT
//---------------------------------------------------------------------------//
Density2D joint_exp_exp2_qutrit(Spectrum const& spec)
{
    require_dim(spec, 3);
    SupportRegion const region(spec);
    double const value = 2 / vandermonde(spec.values());
    return rs_density(
        region,
        [region, value](double r, double s) {
            return region.contains_rs(r, s, 0) ? value : 0.0;
        },
        false,
        {});
}

Density2D joint_exp_std_qutrit(Spectrum const& spec)
{
    require_dim(spec, 3);
    SupportRegion const region(spec);
    return rx_density(region, joint_exp_exp2_qutrit(spec));
}

Pdf1D pdf_uncertainty_qutrit(Spectrum const& spec)
{
    require_dim(spec, 3);
    auto const& a = spec.values();
    double const h21 = 0.5 * (a[1] - a[0]);
    double const h32 = 0.5 * (a[2] - a[1]);
    double const h31 = 0.5 * (a[2] - a[0]);
    double const scale = 8 / vandermonde(a);
    auto f = [=](double x) {
        if (x < 0 || x > h31)
            return 0.0;
        double const sum = eps_pow(h31, x, 1) - eps_pow(h32, x, 1)
                           - eps_pow(h21, x, 1);
        return std::max(0.0, scale * x * sum);
    };
    return Pdf1D("x", f, {0, h31}, {h21, h32, h31});
}

//---------------------------------------------------------------------------//
// FOUR LEVELS
//---------------------------------------------------------------------------//
QuartCellMap::QuartCellMap(Spectrum const& spec)
{
    require_dim(spec, 4);
    std::copy(spec.values().begin(), spec.values().end(), a_.begin());
    pivot_ = (a_[1] * a_[3] - a_[0] * a_[2])
             / (a_[1] + a_[3] - a_[0] - a_[2]);
    vdm_ = uncpdf::vandermonde(a_);
}

double QuartCellMap::phi(int i, int j, double r) const
{
    double const ai = a_[i - 1];
    double const aj = a_[j - 1];
    return (ai + aj) * r - ai * aj;
}

int QuartCellMap::cell(double r, double s) const
{
    auto const& a = a_;
    struct Cell
    {
        int id, lo_i, lo_j, hi_i, hi_j;
    };
    std::vector<Cell> cells;
    if (r < a[0] || r > a[3])
        return 0;
    if (r < a[1])
        cells = {{11, 1, 2, 1, 3}, {12, 1, 3, 1, 4}};
    else if (r < pivot_)
        cells = {{21, 2, 3, 2, 4}, {22, 2, 4, 1, 3}, {23, 1, 3, 1, 4}};
    else if (r < a[2])
        cells = {{24, 2, 3, 1, 3}, {25, 1, 3, 2, 4}, {26, 2, 4, 1, 4}};
    else
        cells = {{31, 3, 4, 2, 4}, {32, 2, 4, 1, 4}};
    for (auto const& c : cells)
    {
        if (s >= this->phi(c.lo_i, c.lo_j, r)
            && s <= this->phi(c.hi_i, c.hi_j, r))
        {
            return c.id;
        }
    }
    return 0;
}

double QuartCellMap::g(double r, double s) const
{
    auto const& a = a_;
    switch (this->cell(r, s))
    {
        case 11:
        case 22:
            return (a[3] - a[2]) * (s - this->phi(1, 2, r));
        case 12:
        case 23:
        case 26:
        case 32:
            return (a[1] - a[2]) * (s - this->phi(1, 4, r));
        case 21:
        case 24:
            return (a[3] - a[0]) * (s - this->phi(2, 3, r));
        case 25:
        case 31:
            return (a[1] - a[0]) * (s - this->phi(3, 4, r));
        default:
            return 0;
    }
}

Density2D joint_exp_exp2_d4(Spectrum const& spec)
{
    QuartCellMap const cells(spec);
    SupportRegion const region(spec);
    double const scale = 6 / cells.vandermonde();
    return rs_density(
        region,
        [cells, scale](double r, double s) {
            return std::max(0.0, scale * cells.g(r, s));
        },
        true,
        {cells.pivot()});
}

Density2D joint_exp_std_d4(Spectrum const& spec)
{
    SupportRegion const region(spec);
    return rx_density(region, joint_exp_exp2_d4(spec));
}

Pdf1D pdf_uncertainty_d4(Spectrum const& spec)
{
    require_dim(spec, 4);
    auto const& a = spec.values();
    auto h = [&a](int i, int j) { return 0.5 * (a[j - 1] - a[i - 1]); };
    struct Term
    {
        double coeff, half_gap;
    };
    std::array<Term, 6> const terms{{
        {a[3] - a[2], h(1, 2)},
        {a[3] - a[0], h(2, 3)},
        {-(a[3] - a[1]), h(1, 3)},
        {a[1] - a[0], h(3, 4)},
        {-(a[2] - a[0]), h(2, 4)},
        {a[2] - a[1], h(1, 4)},
    }};
    double const scale = 16 / vandermonde(a);
    double const top = h(1, 4);
    auto f = [terms, scale, top](double x) {
        if (x < 0 || x > top)
            return 0.0;
        double sum = 0;
        for (auto const& t : terms)
            sum += t.coeff * eps_pow(t.half_gap, x, 3);
        return std::max(0.0, scale * x * sum);
    };
    std::vector<double> breaks;
    for (auto const& t : terms)
        breaks.push_back(t.half_gap);
    return Pdf1D("x", f, {0, top}, breaks);
}

//---------------------------------------------------------------------------//
// DISPATCH
//---------------------------------------------------------------------------//
Pdf1D pdf_uncertainty(Spectrum const& spec)
{
    spec.require_simple();
    switch (spec.dim())
    {
        case 2: {
            QubitObservable q;
            q.a0 = 0.5 * (spec.min() + spec.max());
            q.a = Vec3(0, 0, 0.5 * spec.width());
            return pdf_uncertainty_qubit(q);
        }
        case 3:
            return pdf_uncertainty_qutrit(spec);
        case 4:
            return pdf_uncertainty_d4(spec);
        default:
            unsupported("uncertainty density", "2, 3 and 4", spec.dim());
    }
}

Density2D joint_exp_exp2(Spectrum const& spec)
{
    spec.require_simple();
    switch (spec.dim())
    {
        case 3:
            return joint_exp_exp2_qutrit(spec);
        case 4:
            return joint_exp_exp2_d4(spec);
        default:
            unsupported("joint density of <A> and <A^2>", "3 and 4", spec.dim());
    }
}

Density2D joint_exp_std(Spectrum const& spec)
{
    spec.require_simple();
    switch (spec.dim())
    {
        case 3:
            return joint_exp_std_qutrit(spec);
        case 4:
            return joint_exp_std_d4(spec);
        default:
            unsupported("joint density of <A> and Delta A", "3 and 4", spec.dim());
    }
}

}  // namespace uncpdf
