#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "observables.hpp"
#include "quadrature.hpp"

namespace uncpdf
{
//---------------------------------------------------------------------------//
/*!
 * Function of the uncertainty tuple to minimize over states.
 *
 * sum_of_variances and sum_of_stddevs use unit weights; weighted uses
 * sum_k w_k (Delta A_k)^exponent.
 */
struct Objective
{
    enum class Kind
    {
        sum_of_variances,
        sum_of_stddevs,
        weighted,
    };

    Kind kind{Kind::sum_of_variances};
    std::vector<double> weights;
    int exponent{2};

    static Objective sum_of_variances() { return {}; }
    static Objective sum_of_stddevs() { return {Kind::sum_of_stddevs, {}, 1}; }
    static Objective weighted(std::vector<double> weights, int exponent);

    void validate(std::size_t n_observables) const;
    double operator()(std::span<double const> stddevs) const;
};

struct OptimResult
{
    double minimum{0};
    std::vector<double> argmin_uncertainties;
    PureState witness_state{CVector::Ones(1)};
    int iterations{0};
    bool converged{false};
};

//---------------------------------------------------------------------------//
// OPERATIONS
//---------------------------------------------------------------------------//

//! [0, (max - min)/2] per observable
std::vector<Interval> supercube_bound(std::span<Spectrum const> spectra);

/*!
 * Slack of the qubit-pair region inequality
 *   |b|^2 x^2 + |a|^2 y^2 + 2|<a,b>| sqrt((|a|^2-x^2)(|b|^2-y^2))
 *     - |a|^2 |b|^2 - <a,b>^2,
 * nonnegative inside the region. Coordinates are clamped to the box.
 */
double qubit_pair_slack(double norm_a, double norm_b, double dot_ab,
                        double x, double y);

bool qubit_pair_contains(QubitObservable const& a,
                         QubitObservable const& b,
                         double x,
                         double y,
                         double tol = 1e-9);

bool qubit_triple_contains(QubitObservable const& a,
                           QubitObservable const& b,
                           QubitObservable const& c,
                           double x,
                           double y,
                           double z,
                           double tol = 1e-9);

//! Global minimum over the Bloch sphere: lattice scan then simplex descent
OptimResult minimize(Objective const& objective,
                     std::span<QubitObservable const> observables);

//! Best of Haar-seeded local searches; an upper bound on the minimum
OptimResult minimize_heuristic(Objective const& objective,
                               std::span<HermitianObservable const> observables,
                               int restarts = 16,
                               std::uint64_t seed = 42);

//! Pauli decomposition of a 2x2 observable; NonQubit for other dims
QubitObservable to_qubit(HermitianObservable const& obs);

//! Spherical Fibonacci lattice of n unit vectors
std::vector<Vec3> fibonacci_sphere(std::size_t n);

}  // namespace uncpdf
