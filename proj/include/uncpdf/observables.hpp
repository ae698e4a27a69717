#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "error.hpp"

namespace uncpdf
{
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

//---------------------------------------------------------------------------//
/*!
 * Dense Hermitian observable on C^d.
 *
 * Construction validates that the matrix equals its conjugate transpose to
 * within 1e-12 relative to the largest entry; the stored matrix is the
 * symmetrized average so downstream eigensolvers see an exactly Hermitian
 * operand.
 */
class HermitianObservable
{
  public:
    explicit HermitianObservable(CMatrix entries);

    static HermitianObservable diagonal(std::span<double const> values);

    int dim() const { return static_cast<int>(entries_.rows()); }
    CMatrix const& matrix() const { return entries_; }

  private:
    CMatrix entries_;
};

//---------------------------------------------------------------------------//
/*!
 * Sorted eigenvalues of an observable.
 *
 * The gap tolerance defaults to 1e-9 times the spectral width and decides
 * whether the spectrum is simple (all eigenvalues distinct). Every density in
 * this library requires a simple spectrum.
 */
class Spectrum
{
  public:
    explicit Spectrum(std::vector<double> values,
                      std::optional<double> gap_tol = std::nullopt);

    std::vector<double> const& values() const { return values_; }
    int dim() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }
    double width() const { return values_.back() - values_.front(); }
    double gap_tol() const { return gap_tol_; }

    bool simple() const;

    //! Throw DegenerateSpectrum unless simple with at least two levels
    void require_simple() const;

  private:
    std::vector<double> values_;
    double gap_tol_;
};

//---------------------------------------------------------------------------//
/*!
 * Qubit observable A = a0 * 1 + a . sigma.
 */
struct QubitObservable
{
    double a0{0};
    Vec3 a{Vec3::Zero()};

    double norm() const { return a.norm(); }
    Spectrum spectrum() const;
    CMatrix matrix() const;
    HermitianObservable to_hermitian() const;

    //! Throw DegenerateSpectrum when |a| is zero or not finite
    void require_nontrivial() const;
};

//! Pauli matrices as qubit observables
QubitObservable pauli_x();
QubitObservable pauli_y();
QubitObservable pauli_z();

//---------------------------------------------------------------------------//
/*!
 * Normalized state vector in C^d.
 */
class PureState
{
  public:
    //! Validate the norm (1e-12)
    explicit PureState(CVector amplitudes);

    //! Normalize arbitrary nonzero amplitudes
    static PureState normalized(CVector amplitudes);

    //! Qubit state with the given Bloch vector (need not be unit length)
    static PureState from_bloch(Vec3 const& u);

    int dim() const { return static_cast<int>(amps_.size()); }
    CVector const& amplitudes() const { return amps_; }

    //! Bloch vector of a qubit state
    Vec3 bloch() const;

  private:
    CVector amps_;
};

//---------------------------------------------------------------------------//
/*!
 * Gram matrix of two or three real 3-vectors (Bloch vectors).
 */
class GramMatrix
{
  public:
    GramMatrix(Eigen::MatrixXd entries, double rank_tol = 1e-10);

    int order() const { return static_cast<int>(entries_.rows()); }
    Eigen::MatrixXd const& entries() const { return entries_; }
    double det() const { return det_; }
    int numerical_rank() const { return rank_; }
    //! Ascending eigenvalues
    Eigen::VectorXd const& eigenvalues() const { return eigenvalues_; }

    //! Inverse; throws SingularGram if rank-deficient
    Eigen::MatrixXd inverse() const;

  private:
    Eigen::MatrixXd entries_;
    Eigen::VectorXd eigenvalues_;
    double det_;
    int rank_;
};

//---------------------------------------------------------------------------//
// OPERATIONS
//---------------------------------------------------------------------------//

Spectrum spectrum_of(HermitianObservable const& obs,
                     std::optional<double> gap_tol = std::nullopt);

double expectation(HermitianObservable const& obs, PureState const& psi);
double variance(HermitianObservable const& obs, PureState const& psi);
double std_dev(HermitianObservable const& obs, PureState const& psi);

//! Largest attainable variance, (max - min)^2 / 4
double max_variance(Spectrum const& spec);

//! State (|a_min> + |a_max>)/sqrt(2) attaining max_variance
PureState max_variance_state(HermitianObservable const& obs);

GramMatrix gram(std::span<Vec3 const> vectors, double rank_tol = 1e-10);

//! Number of Gram eigenvalues above rank_tol times the largest one
int rank_classify(GramMatrix const& g, double rank_tol = 1e-10);

}  // namespace uncpdf
