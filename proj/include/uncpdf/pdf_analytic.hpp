#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "observables.hpp"
#include "quadrature.hpp"

namespace uncpdf
{
//---------------------------------------------------------------------------//
//! Density value with a flag for points where it diverges
struct PdfValue
{
    double value{0};
    bool singular{false};
};

//---------------------------------------------------------------------------//
/*!
 * One-dimensional density on a closed interval.
 *
 * Between consecutive breakpoints the evaluator is smooth except for
 * possible inverse square-root divergences at the breakpoints themselves,
 * which is what the endpoint-singular quadrature expects. Masses between
 * breakpoints are computed once at construction so cdf() only integrates
 * within a single piece.
 */
class Pdf1D
{
  public:
    using Evaluator = std::function<double(double)>;

    Pdf1D(std::string variable,
          Evaluator f,
          Interval support,
          std::vector<double> breakpoints,
          std::vector<double> singular_points = {});

    std::string const& variable() const { return variable_; }
    Interval support() const { return support_; }
    //! Sorted piece boundaries (may include the support endpoints)
    std::vector<double> const& breakpoints() const { return breakpoints_; }
    std::vector<double> const& singular_points() const { return singular_; }

    //! Zero outside the support, +inf with flag at divergences
    PdfValue eval(double x) const;
    double operator()(double x) const { return this->eval(x).value; }

    double mass(double a, double b, double abs_tol = 1e-11) const;
    double cdf(double x, double abs_tol = 1e-11) const;
    double total_mass() const { return piece_mass_.back(); }

    //! Density of kappa * X for kappa > 0
    Pdf1D scaled(double kappa) const;

  private:
    std::string variable_;
    Evaluator f_;
    Interval support_;
    std::vector<double> breakpoints_;
    std::vector<double> singular_;
    std::vector<double> cuts_;
    //! Cumulative mass at each cut
    std::vector<double> piece_mass_;
};

//---------------------------------------------------------------------------//
/*!
 * Absolutely continuous joint density of two statistics (u, v).
 *
 * Support geometry is described for integration: u_cuts partition the
 * u-range into pieces on which v_pieces(u) returns disjoint v-intervals with
 * the density smooth inside each one. The iterated integral then only meets
 * divergences at piece endpoints.
 */
struct Density2D
{
    using Evaluator = std::function<double(double, double)>;
    using Membership = std::function<bool(double, double, double)>;
    using Pieces = std::function<std::vector<Interval>(double)>;

    std::string u_name;
    std::string v_name;
    Evaluator density;
    Membership contains;
    Interval u_range;
    Interval v_range;
    std::vector<double> u_cuts;
    Pieces v_pieces;

    double operator()(double u, double v) const { return density(u, v); }

    //! Mass inside [u0,u1] x [v0,v1]
    double mass(double u0, double u1, double v0, double v1,
                double abs_tol = 1e-9) const;
    double total_mass(double abs_tol = 1e-10) const;

    //! Density of (kappa U, kappa V) for kappa > 0
    Density2D scaled(double kappa) const;
};

//---------------------------------------------------------------------------//
/*!
 * Linear relation among coordinates that holds for every sample:
 *   p[dependent] - c[dependent] = sum_k kappa_k (p[k] - c[k]).
 */
struct LinearConstraint
{
    std::size_t dependent{0};
    std::vector<std::pair<std::size_t, double>> terms;

    double slack(std::span<double const> point,
                 std::span<double const> center) const;
};

//! All mass on a line or plane, with a density over the free coordinates
struct LineSingular
{
    std::vector<double> center;
    std::vector<LinearConstraint> constraints;
    std::vector<std::size_t> free_coordinates;
    std::variant<Density2D, Pdf1D> profile;

    double max_slack(std::span<double const> point) const;
};

//! Uniform weight on the ellipsoid surface omega(r, s, t) = 1
struct SurfaceSingular
{
    std::array<double, 3> center{};
    Eigen::Matrix3d gram;
    Eigen::Matrix3d gram_inverse;
    double gram_det{0};

    //! Surface weight 1 / (4 pi sqrt(det T))
    double weight() const;
    double omega(std::span<double const> point) const;
};

using JointDistribution = std::variant<Density2D, LineSingular, SurfaceSingular>;

char const* variant_name(JointDistribution const& dist);

//! Distribution of kappa * X for kappa > 0
JointDistribution scaled(JointDistribution const& dist, double kappa);

//---------------------------------------------------------------------------//
/*!
 * Collinear qubit pair b = kappa a: the uncertainties are tied by
 * y = |kappa| x with x distributed as the single-qubit uncertainty.
 */
struct UncertaintyCurve
{
    double slope{0};
    Pdf1D profile;

    double slack(double x, double y) const { return y - slope * x; }
};

//---------------------------------------------------------------------------//
/*!
 * Support and surface weight of the uncertainty triple of three qubit
 * observables with linearly independent Bloch vectors.
 */
class UncertaintySurface
{
  public:
    UncertaintySurface(QubitObservable const& a,
                       QubitObservable const& b,
                       QubitObservable const& c);

    //! Smallest |omega - 1| over the four sign branches (inf outside box)
    double min_branch_slack(double x, double y, double z) const;
    bool contains(double x, double y, double z, double tol = 1e-9) const;
    //! Coefficient of sum_{branches} delta(1 - omega) in the density
    double weight(double x, double y, double z) const;

    SurfaceSingular const& expectations() const { return surface_; }
    std::array<double, 3> const& norms() const { return norms_; }

  private:
    std::array<double, 3> norms_{};
    SurfaceSingular surface_;
};

//---------------------------------------------------------------------------//
/*!
 * Cell decomposition of the (<A>, <A^2>) support for a four-level
 * observable. Cells are numbered 11, 12 (first band), 21..26 (middle band,
 * split at the pivot), 31, 32 (last band).
 */
class QuartCellMap
{
  public:
    explicit QuartCellMap(Spectrum const& spec);

    //! Abscissa where the lines through (a1,a3) and (a2,a4) cross
    double pivot() const { return pivot_; }
    //! Chord line (a_i + a_j) r - a_i a_j, 1-based indices
    double phi(int i, int j, double r) const;
    //! Cell id, 0 outside the support
    int cell(double r, double s) const;
    //! Piecewise-linear factor g(r, s)
    double g(double r, double s) const;
    double vandermonde() const { return vdm_; }

  private:
    std::array<double, 4> a_{};
    double pivot_;
    double vdm_;
};

//---------------------------------------------------------------------------//
/*!
 * Supports of the (<A>, <A^2>) and (<A>, Delta A) densities for any simple
 * spectrum: unions over k of the cells between the chord through
 * (a_k, a_{k+1}) and the chord through (a_1, a_d).
 */
class SupportRegion
{
  public:
    explicit SupportRegion(Spectrum const& spec);

    int dim() const { return static_cast<int>(a_.size()); }
    std::vector<double> const& eigenvalues() const { return a_; }

    //! (a_i + a_j) r - a_i a_j, 1-based indices
    double phi(int i, int j, double r) const;

    //! Signed slack of (r, s) in cell k (1-based); >= 0 inside
    double slack_rs(int k, double r, double s) const;
    double slack_rs(double r, double s) const;
    bool contains_rs(double r, double s, double tol = 1e-9) const;
    //! Evaluated through s = r^2 + x^2
    bool contains_rx(double r, double x, double tol = 1e-9) const;

    //! sqrt((a_{k+1} - r)(r - a_k)) and sqrt((a_d - r)(r - a_1))
    double lower_x(int k, double r) const;
    double upper_x(double r) const;

    struct Polyline
    {
        std::string label;
        std::vector<std::array<double, 2>> points;
    };

    //! Boundary arcs of the (r, x) support; arc "upper" plus "lower_k"
    std::vector<Polyline> boundary_rx(std::size_t points_per_arc) const;
    //! Boundary chords of the (r, s) support
    std::vector<Polyline> boundary_rs(std::size_t points_per_chord) const;

  private:
    std::vector<double> a_;
};

//---------------------------------------------------------------------------//
// OPERATIONS
//---------------------------------------------------------------------------//

//! Roots of x^2 = (r - lam1)(lam2 - r); nullopt when 2x > lam2 - lam1
std::optional<std::pair<double, double>>
quad_roots(double lam1, double lam2, double x);

//! Density of <A> for Haar-random states; piecewise polynomial
Pdf1D pdf_expectation(Spectrum const& spec);

//! Density of Delta A for a qubit observable
Pdf1D pdf_uncertainty_qubit(QubitObservable const& q);

double omega2(QubitObservable const& a, QubitObservable const& b,
              double r, double s);
double omega3(QubitObservable const& a, QubitObservable const& b,
              QubitObservable const& c, double r, double s, double t);

JointDistribution joint_expectations_qubit2(QubitObservable const& a,
                                            QubitObservable const& b);

//! Requires linearly independent Bloch vectors (SingularGram otherwise)
Density2D joint_uncertainties_qubit2(QubitObservable const& a,
                                     QubitObservable const& b);

//! Density2D for independent Bloch vectors, UncertaintyCurve otherwise
std::variant<Density2D, UncertaintyCurve>
uncertainty_relation_qubit2(QubitObservable const& a, QubitObservable const& b);

JointDistribution joint_expectations_qubit3(QubitObservable const& a,
                                            QubitObservable const& b,
                                            QubitObservable const& c);

UncertaintySurface uncertainty_surface_qubit3(QubitObservable const& a,
                                              QubitObservable const& b,
                                              QubitObservable const& c);

Density2D joint_exp_exp2_qutrit(Spectrum const& spec);
Density2D joint_exp_std_qutrit(Spectrum const& spec);
Pdf1D pdf_uncertainty_qutrit(Spectrum const& spec);

Density2D joint_exp_exp2_d4(Spectrum const& spec);
Density2D joint_exp_std_d4(Spectrum const& spec);
Pdf1D pdf_uncertainty_d4(Spectrum const& spec);

//! Dispatch on dimension: 2 (qubit), 3 or 4
Pdf1D pdf_uncertainty(Spectrum const& spec);
Density2D joint_exp_exp2(Spectrum const& spec);
Density2D joint_exp_std(Spectrum const& spec);

SupportRegion support_regions(Spectrum const& spec);

//! Product of pairwise eigenvalue gaps
double vandermonde(std::span<double const> a);

}  // namespace uncpdf
