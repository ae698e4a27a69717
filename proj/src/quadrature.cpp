#include "uncpdf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace uncpdf
{
namespace
{
//! Simpson panel with its two-half refinement and error estimate
struct Panel
{
    double a, b;
    double fa, flm, fm, frm, fb;
    double estimate;
    double error;
};

template<class F>
Panel make_panel(F const& f, double a, double b, double fa, double fm,
                 double fb)
{
    double const m = 0.5 * (a + b);
    double const flm = f(0.5 * (a + m));
    double const frm = f(0.5 * (m + b));
    double const h = b - a;
    double const whole = h / 6 * (fa + 4 * fm + fb);
    double const halves = h / 12 * (fa + 4 * flm + 2 * fm + 4 * frm + fb);
    double const delta = halves - whole;
    double error = std::abs(delta) / 15;
    if (!std::isfinite(error))
        error = std::numeric_limits<double>::max();
    return {a, b, fa, flm, fm, frm, fb, halves + delta / 15, error};
}

bool by_error(Panel const& x, Panel const& y)
{
    return x.error < y.error;
}
}  // namespace

double integrate_simpson(Fn1 const& f, double a, double b, double abs_tol,
                         int max_panels)
{
    if (!(b > a))
        return 0;
    constexpr int n_initial = 8;
    double const h = (b - a) / n_initial;
    std::vector<Panel> heap;
    heap.reserve(static_cast<std::size_t>(std::max(max_panels, n_initial)) + 2);
    double fa = f(a);
    for (int i = 0; i < n_initial; ++i)
    {
        double const pa = a + i * h;
        double const pb = (i + 1 == n_initial) ? b : a + (i + 1) * h;
        double const fb = f(pb);
        heap.push_back(make_panel(f, pa, pb, fa, f(0.5 * (pa + pb)), fb));
        fa = fb;
    }
    std::make_heap(heap.begin(), heap.end(), by_error);

    auto total_error = [&heap] {
        double e = 0;
        for (auto const& p : heap)
            e += p.error;
        return e;
    };
    double err = total_error();
    // Split the worst panel until the summed estimate is within tolerance.
    // The panel cap bounds the cost when rounding noise keeps err above tol.
    while (err > abs_tol && static_cast<int>(heap.size()) < max_panels)
    {
        std::pop_heap(heap.begin(), heap.end(), by_error);
        Panel const worst = heap.back();
        heap.pop_back();
        double const m = 0.5 * (worst.a + worst.b);
        if (!(m > worst.a && m < worst.b))
        {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), by_error);
            break;
        }
        auto const left
            = make_panel(f, worst.a, m, worst.fa, worst.flm, worst.fm);
        auto const right
            = make_panel(f, m, worst.b, worst.fm, worst.frm, worst.fb);
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);
        err += left.error + right.error - worst.error;
        if (err <= abs_tol)
            err = total_error();
    }
    double total = 0;
    for (auto const& p : heap)
        total += p.estimate;
    return total;
}

double integrate_endpoint_singular(Fn1 const& f, double a, double b,
                                   double abs_tol, int max_panels)
{
    if (!(b > a))
        return 0;
    double const mid = 0.5 * (a + b);
    double const half = 0.5 * (b - a);
    // Endpoint values are the theta -> 0, pi limits, approximated one micro-
    // radian inside so singular endpoints are never evaluated.
    constexpr double theta_eps = 1e-6;
    auto g = [&](double theta) {
        theta = std::clamp(theta, theta_eps, std::numbers::pi - theta_eps);
        double const x = mid - half * std::cos(theta);
        if (x <= a || x >= b)
            return 0.0;
        // A divergent value this close to an endpoint carries no mass
        double const v = f(x);
        if (!std::isfinite(v))
            return 0.0;
        return v * half * std::sin(theta);
    };
    return integrate_simpson(g, 0.0, std::numbers::pi, abs_tol, max_panels);
}

double integrate_pieces(Fn1 const& f, std::vector<double> const& cuts,
                        double abs_tol)
{
    double total = 0;
    for (std::size_t i = 1; i < cuts.size(); ++i)
        total += integrate_endpoint_singular(f, cuts[i - 1], cuts[i], abs_tol);
    return total;
}

}  // namespace uncpdf
