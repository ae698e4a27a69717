#pragma once

#include <functional>
#include <vector>

namespace uncpdf
{
//! Closed interval [lo, hi]
struct Interval
{
    double lo;
    double hi;

    double width() const { return hi - lo; }
    bool contains(double x, double tol = 0) const
    {
        return x >= lo - tol && x <= hi + tol;
    }
};

using Fn1 = std::function<double(double)>;

//---------------------------------------------------------------------------//
/*!
 * Globally adaptive composite Simpson rule.
 *
 * Starts from eight panels and repeatedly bisects the panel with the largest
 * Richardson error estimate until the summed estimate is below abs_tol or
 * max_panels is reached.
 */
double integrate_simpson(Fn1 const& f, double a, double b,
                         double abs_tol = 1e-9, int max_panels = 4000);

/*!
 * Adaptive Simpson after the substitution x = m - h cos(theta).
 *
 * Inverse square-root singularities at either endpoint (the generic form of
 * x = |a| sin(theta) for densities like x / sqrt(a^2 - x^2)) become bounded,
 * so the integrand is never evaluated at an endpoint.
 */
double integrate_endpoint_singular(Fn1 const& f, double a, double b,
                                   double abs_tol = 1e-9,
                                   int max_panels = 4000);

//! Sum of integrate_endpoint_singular over consecutive breakpoint pieces
double integrate_pieces(Fn1 const& f, std::vector<double> const& cuts,
                        double abs_tol = 1e-9);

}  // namespace uncpdf
