#include "uncpdf/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace uncpdf
{
const char* to_string(ErrorCode code) noexcept
{
    switch (code)
    {
        case ErrorCode::ok: return "ok";
        case ErrorCode::not_hermitian: return "NotHermitian";
        case ErrorCode::dim_mismatch: return "DimMismatch";
        case ErrorCode::dim_too_small: return "DimTooSmall";
        case ErrorCode::degenerate_spectrum: return "DegenerateSpectrum";
        case ErrorCode::singular_gram: return "SingularGram";
        case ErrorCode::non_monotone_edges: return "NonMonotoneEdges";
        case ErrorCode::wrong_variant: return "WrongVariant";
        case ErrorCode::non_qubit: return "NonQubit";
        case ErrorCode::unsupported_dimension: return "UnsupportedDimension";
        case ErrorCode::invalid_argument: return "InvalidArgument";
        case ErrorCode::parse_error: return "ParseError";
        case ErrorCode::io_error: return "IOError";
        case ErrorCode::internal: return "Internal";
    }
    return "Unknown";
}

//---------------------------------------------------------------------------//
HermitianObservable::HermitianObservable(CMatrix entries)
{
    if (entries.rows() < 1 || entries.rows() != entries.cols())
    {
        fail(ErrorCode::invalid_argument,
             "observable matrix must be square with dim >= 1");
    }
    if (!entries.allFinite())
    {
        fail(ErrorCode::invalid_argument, "observable has non-finite entries");
    }
    double const scale = std::max(entries.cwiseAbs().maxCoeff(), 1e-300);
    double const asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
    {
        std::ostringstream os;
        os << "matrix is not Hermitian (asymmetry " << asym << ")";
        fail(ErrorCode::not_hermitian, os.str());
    }
    entries_ = (entries + entries.adjoint()) * 0.5;
}

HermitianObservable HermitianObservable::diagonal(std::span<double const> values)
{
    CMatrix m = CMatrix::Zero(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        m(i, i) = values[i];
    return HermitianObservable(std::move(m));
}

//---------------------------------------------------------------------------//
Spectrum::Spectrum(std::vector<double> values, std::optional<double> gap_tol)
    : values_(std::move(values))
{
    if (values_.empty())
        fail(ErrorCode::dim_too_small, "spectrum is empty");
    for (double v : values_)
    {
        if (!std::isfinite(v))
            fail(ErrorCode::invalid_argument, "spectrum has non-finite value");
    }
    std::sort(values_.begin(), values_.end());
    gap_tol_ = gap_tol ? *gap_tol : 1e-9 * this->width();
}

bool Spectrum::simple() const
{
    for (std::size_t i = 1; i < values_.size(); ++i)
    {
        if (!(values_[i] - values_[i - 1] > gap_tol_))
            return false;
    }
    return true;
}

void Spectrum::require_simple() const
{
    if (values_.size() < 2)
        fail(ErrorCode::dim_too_small, "densities need dim >= 2");
    if (!this->simple())
    {
        fail(ErrorCode::degenerate_spectrum,
             "spectrum has (numerically) repeated eigenvalues");
    }
}

//---------------------------------------------------------------------------//
Spectrum QubitObservable::spectrum() const
{
    double const n = this->norm();
    return Spectrum({a0 - n, a0 + n});
}

CMatrix QubitObservable::matrix() const
{
    CMatrix m(2, 2);
    Complex const i(0, 1);
    m(0, 0) = a0 + a[2];
    m(1, 1) = a0 - a[2];
    m(0, 1) = a[0] - i * a[1];
    m(1, 0) = a[0] + i * a[1];
    return m;
}

HermitianObservable QubitObservable::to_hermitian() const
{
    return HermitianObservable(this->matrix());
}

void QubitObservable::require_nontrivial() const
{
    if (!std::isfinite(a0) || !a.allFinite())
        fail(ErrorCode::invalid_argument, "qubit observable is not finite");
    if (!(this->norm() > 0))
    {
        fail(ErrorCode::degenerate_spectrum,
             "qubit observable with |a| = 0 has no variance");
    }
}

QubitObservable pauli_x()
{
    return {0.0, Vec3(1, 0, 0)};
}
QubitObservable pauli_y()
{
    return {0.0, Vec3(0, 1, 0)};
}
QubitObservable pauli_z()
{
    return {0.0, Vec3(0, 0, 1)};
}

//---------------------------------------------------------------------------//
PureState::PureState(CVector amplitudes) : amps_(std::move(amplitudes))
{
    if (amps_.size() < 1)
        fail(ErrorCode::dim_too_small, "state has no amplitudes");
    if (std::abs(amps_.squaredNorm() - 1.0) > 1e-12)
        fail(ErrorCode::invalid_argument, "state is not normalized");
}

PureState PureState::normalized(CVector amplitudes)
{
    double const n = amplitudes.norm();
    if (!(n > 0) || !std::isfinite(n))
        fail(ErrorCode::invalid_argument, "cannot normalize a zero vector");
    return PureState(amplitudes / n);
}

PureState PureState::from_bloch(Vec3 const& u)
{
    double const n = u.norm();
    if (!(n > 0))
        fail(ErrorCode::invalid_argument, "Bloch vector must be nonzero");
    Vec3 const v = u / n;
    double const theta = std::acos(std::clamp(v[2], -1.0, 1.0));
    double const phi = std::atan2(v[1], v[0]);
    CVector amps(2);
    amps[0] = std::cos(theta / 2);
    amps[1] = std::polar(std::sin(theta / 2), phi);
    return PureState::normalized(std::move(amps));
}

Vec3 PureState::bloch() const
{
    if (amps_.size() != 2)
        fail(ErrorCode::non_qubit, "Bloch vector needs a qubit state");
    Complex const c = std::conj(amps_[0]) * amps_[1];
    return Vec3(2 * c.real(), 2 * c.imag(),
                std::norm(amps_[0]) - std::norm(amps_[1]));
}

//---------------------------------------------------------------------------//
GramMatrix::GramMatrix(Eigen::MatrixXd entries, double rank_tol)
    : entries_(std::move(entries))
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        entries_, Eigen::EigenvaluesOnly);
    eigenvalues_ = es.eigenvalues();
    det_ = entries_.determinant();
    double const largest = eigenvalues_.size() ? eigenvalues_.maxCoeff() : 0;
    rank_ = 0;
    for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i)
    {
        if (largest > 0 && eigenvalues_[i] > rank_tol * largest)
            ++rank_;
    }
}

Eigen::MatrixXd GramMatrix::inverse() const
{
    if (rank_ != this->order())
        fail(ErrorCode::singular_gram, "Gram matrix is rank-deficient");
    return entries_.inverse();
}

//---------------------------------------------------------------------------//
Spectrum spectrum_of(HermitianObservable const& obs,
                     std::optional<double> gap_tol)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(obs.matrix(),
                                              Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        fail(ErrorCode::internal, "eigensolver did not converge");
    Eigen::VectorXd const& ev = es.eigenvalues();
    return Spectrum(std::vector<double>(ev.data(), ev.data() + ev.size()),
                    gap_tol);
}

namespace
{
void check_dims(HermitianObservable const& obs, PureState const& psi)
{
    if (obs.dim() != psi.dim())
    {
        std::ostringstream os;
        os << "observable dim " << obs.dim() << " != state dim " << psi.dim();
        fail(ErrorCode::dim_mismatch, os.str());
    }
}
}  // namespace

double expectation(HermitianObservable const& obs, PureState const& psi)
{
    check_dims(obs, psi);
    return psi.amplitudes().dot(obs.matrix() * psi.amplitudes()).real();
}

double variance(HermitianObservable const& obs, PureState const& psi)
{
    check_dims(obs, psi);
    CVector const& v = psi.amplitudes();
    CVector const av = obs.matrix() * v;
    double const mean = v.dot(av).real();
    // ||(A - <A>) psi||^2 is the same quantity as <A^2> - <A>^2 but never
    // goes negative through cancellation.
    return (av - mean * v).squaredNorm();
}

double std_dev(HermitianObservable const& obs, PureState const& psi)
{
    return std::sqrt(std::max(variance(obs, psi), 0.0));
}

double max_variance(Spectrum const& spec)
{
    if (spec.dim() < 2)
        fail(ErrorCode::dim_too_small, "max_variance needs dim >= 2");
    double const w = spec.width();
    return 0.25 * w * w;
}

PureState max_variance_state(HermitianObservable const& obs)
{
    if (obs.dim() < 2)
        fail(ErrorCode::dim_too_small, "max_variance needs dim >= 2");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(obs.matrix());
    CMatrix const& vecs = es.eigenvectors();
    return PureState::normalized(vecs.col(0) + vecs.col(obs.dim() - 1));
}

GramMatrix gram(std::span<Vec3 const> vectors, double rank_tol)
{
    if (vectors.size() != 2 && vectors.size() != 3)
        fail(ErrorCode::invalid_argument, "Gram matrix needs 2 or 3 vectors");
    auto const n = static_cast<Eigen::Index>(vectors.size());
    Eigen::MatrixXd t(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        if (!vectors[i].allFinite())
            fail(ErrorCode::invalid_argument, "Gram input is not finite");
        for (Eigen::Index j = 0; j < n; ++j)
            t(i, j) = vectors[i].dot(vectors[j]);
    }
    return GramMatrix(std::move(t), rank_tol);
}

int rank_classify(GramMatrix const& g, double rank_tol)
{
    Eigen::VectorXd const& ev = g.eigenvalues();
    double const largest = ev.maxCoeff();
    if (!(largest > 0))
        return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
    {
        if (ev[i] > rank_tol * largest)
            ++rank;
    }
    return rank;
}

}  // namespace uncpdf
