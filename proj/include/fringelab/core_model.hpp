#pragma once

// Path-basis states of a quanton, ancilla overlap matrices and phase configurations,
// together with the state transformations used by the interference engine:
// phase shifts, decoherence by an ancilla (Schur product with the conjugate Gram
// matrix) and blocking all but two paths.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fringelab/errors.hpp"

namespace fringelab {

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using ComplexMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

namespace tolerance {
inline constexpr double hermitian = 1e-12;
inline constexpr double trace = 1e-12;
inline constexpr double normalization = 1e-12;
inline constexpr double unit_diagonal = 1e-12;
inline constexpr double psd_floor = -1e-10;
inline constexpr double purity = 1e-9;
} // namespace tolerance

/// Path label k in {1, ..., n}. Every user-facing index is 1-based.
struct PathIndex {
    int value;

    constexpr Eigen::Index offset() const noexcept { return value - 1; }
};

namespace detail {

template <typename Real>
Real hermitian_defect(const ComplexMatrix<Real>& m)
{
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Real>
Real min_eigenvalue(const ComplexMatrix<Real>& m)
{
    // Validate against the Hermitian part; the defect itself is checked separately.
    const ComplexMatrix<Real> h = (m + m.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

template <typename Real>
bool all_finite(const ComplexMatrix<Real>& m)
{
    return m.real().allFinite() && m.imag().allFinite();
}

inline std::string describe(double value)
{
    return std::to_string(value);
}

} // namespace detail

/// n x n complex Hermitian positive semidefinite unit-trace matrix in the path basis.
/// Construction validates; the stored entries are never altered.
template <typename Real = double>
class DensityMatrix {
public:
    using Matrix = ComplexMatrix<Real>;

    explicit DensityMatrix(Matrix entries) : rho_(std::move(entries))
    {
        if (rho_.rows() < 1 || rho_.rows() != rho_.cols())
            throw InvalidArgument("density matrix must be square with n >= 1");
        if (!detail::all_finite<Real>(rho_))
            throw InvalidArgument("density matrix has non-finite entries");
        const Real defect = detail::hermitian_defect<Real>(rho_);
        if (defect > Real(tolerance::hermitian))
            throw InvalidArgument("density matrix is not Hermitian (defect "
                                  + detail::describe(double(defect)) + ")");
        const Real trace = rho_.trace().real();
        if (std::abs(trace - Real(1)) > Real(tolerance::trace))
            throw InvalidArgument("density matrix trace is " + detail::describe(double(trace))
                                  + ", expected 1");
        const Real lowest = detail::min_eigenvalue<Real>(rho_);
        if (lowest < Real(tolerance::psd_floor))
            throw InvalidArgument("density matrix is not positive semidefinite (eigenvalue "
                                  + detail::describe(double(lowest)) + ")");
    }

    /// rho_jk = a_j conj(a_k). Amplitudes must be normalized within 1e-12.
    static DensityMatrix from_pure_amplitudes(const ComplexVector<Real>& amplitudes)
    {
        const Real norm = amplitudes.squaredNorm();
        if (amplitudes.size() < 1 || std::abs(norm - Real(1)) > Real(tolerance::normalization))
            throw InvalidArgument("pure-state amplitudes are not normalized (sum |a|^2 = "
                                  + detail::describe(double(norm)) + ")");
        return DensityMatrix(Matrix(amplitudes * amplitudes.adjoint()));
    }

    static DensityMatrix diagonal(const RealVector<Real>& populations)
    {
        return DensityMatrix(Matrix(populations.template cast<Complex<Real>>().asDiagonal()));
    }

    Eigen::Index size() const noexcept { return rho_.rows(); }
    const Matrix& matrix() const noexcept { return rho_; }

    Complex<Real> operator()(PathIndex j, PathIndex k) const
    {
        check_index(j);
        check_index(k);
        return rho_(j.offset(), k.offset());
    }

    Real population(PathIndex k) const { return (*this)(k, k).real(); }

    /// max_jk |(rho^2 - rho)_jk|
    Real purity_defect() const { return (rho_ * rho_ - rho_).cwiseAbs().maxCoeff(); }

    bool is_pure(Real tol = Real(tolerance::purity)) const { return purity_defect() < tol; }

private:
    void check_index(PathIndex k) const
    {
        if (k.value < 1 || k.value > size())
            throw InvalidArgument("path index " + std::to_string(k.value) + " outside 1.."
                                  + std::to_string(size()));
    }

    Matrix rho_;
};

/// Gamma_jk = <chi_j|chi_k> for normalized ancilla states: Hermitian, PSD, unit diagonal.
template <typename Real = double>
class GramMatrix {
public:
    using Matrix = ComplexMatrix<Real>;

    explicit GramMatrix(Matrix entries) : gamma_(std::move(entries))
    {
        if (gamma_.rows() < 1 || gamma_.rows() != gamma_.cols())
            throw InvalidArgument("Gram matrix must be square with n >= 1");
        if (!detail::all_finite<Real>(gamma_))
            throw InvalidArgument("Gram matrix has non-finite entries");
        if (detail::hermitian_defect<Real>(gamma_) > Real(tolerance::hermitian))
            throw InvalidArgument("Gram matrix is not Hermitian");
        for (Eigen::Index k = 0; k < gamma_.rows(); ++k) {
            if (std::abs(gamma_(k, k) - Complex<Real>(1)) > Real(tolerance::unit_diagonal))
                throw InvalidArgument("Gram matrix diagonal entry " + std::to_string(k + 1)
                                      + " is not 1 (ancilla states must be normalized)");
        }
        if (gamma_.cwiseAbs().maxCoeff() > Real(1) + Real(tolerance::unit_diagonal))
            throw InvalidArgument("Gram matrix has an overlap with modulus > 1");
        if (detail::min_eigenvalue<Real>(gamma_) < Real(tolerance::psd_floor))
            throw InvalidArgument("Gram matrix is not positive semidefinite");
    }

    /// Columns of `states` are the ancilla vectors |chi_1>, ..., |chi_n>.
    static GramMatrix from_ancilla_states(const Matrix& states)
    {
        for (Eigen::Index k = 0; k < states.cols(); ++k) {
            const Real norm = states.col(k).squaredNorm();
            if (std::abs(norm - Real(1)) > Real(tolerance::normalization))
                throw InvalidArgument("ancilla state " + std::to_string(k + 1)
                                      + " is not normalized");
        }
        return GramMatrix(Matrix(states.adjoint() * states));
    }

    /// Identical ancilla states: no path information.
    static GramMatrix all_ones(Eigen::Index n) { return GramMatrix(Matrix::Ones(n, n)); }

    /// Mutually orthogonal ancilla states: complete path information.
    static GramMatrix identity(Eigen::Index n) { return GramMatrix(Matrix::Identity(n, n)); }

    Eigen::Index size() const noexcept { return gamma_.rows(); }
    const Matrix& matrix() const noexcept { return gamma_; }

    Complex<Real> operator()(PathIndex j, PathIndex k) const
    {
        return gamma_(j.offset(), k.offset());
    }

private:
    Matrix gamma_;
};

template <typename Real = double>
GramMatrix<Real> gram_from_ancilla_states(const ComplexMatrix<Real>& states)
{
    return GramMatrix<Real>::from_ancilla_states(states);
}

/// Every path phase is a free variable; `thetas` is the current setting.
template <typename Real = double>
struct IndependentPhases {
    RealVector<Real> thetas;

    static IndependentPhases zeros(Eigen::Index n) { return {RealVector<Real>::Zero(n)}; }
};

/// theta_k = k * theta + offset_k, k = 1..n.
template <typename Real = double>
struct LinearPhases {
    Real theta = 0;
    RealVector<Real> offsets;

    static LinearPhases zeros(Eigen::Index n, Real theta = 0)
    {
        return {theta, RealVector<Real>::Zero(n)};
    }
};

template <typename Real = double>
using PhaseModel = std::variant<IndependentPhases<Real>, LinearPhases<Real>>;

template <typename Real>
Eigen::Index phase_count(const PhaseModel<Real>& model)
{
    return std::visit(
        [](const auto& m) -> Eigen::Index {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, IndependentPhases<Real>>)
                return m.thetas.size();
            else
                return m.offsets.size();
        },
        model);
}

template <typename Real>
bool is_linear(const PhaseModel<Real>& model)
{
    return std::holds_alternative<LinearPhases<Real>>(model);
}

/// Concrete per-path phases theta_1..theta_n of a phase model.
template <typename Real>
RealVector<Real> path_phases(const PhaseModel<Real>& model)
{
    if (const auto* lin = std::get_if<LinearPhases<Real>>(&model)) {
        const Eigen::Index n = lin->offsets.size();
        return RealVector<Real>::LinSpaced(n, Real(1), Real(n)) * lin->theta + lin->offsets;
    }
    return std::get<IndependentPhases<Real>>(model).thetas;
}

/// rho'_jk = rho_jk exp(i (theta_j - theta_k)).
template <typename Real>
DensityMatrix<Real> apply_phases(const DensityMatrix<Real>& rho, const RealVector<Real>& thetas)
{
    if (thetas.size() != rho.size())
        throw InvalidArgument("phase vector length does not match path count");
    const ComplexVector<Real> u =
        thetas.unaryExpr([](Real t) { return std::polar(Real(1), t); });
    return DensityMatrix<Real>(rho.matrix().cwiseProduct(u * u.adjoint()));
}

template <typename Real>
DensityMatrix<Real> apply_phases(const DensityMatrix<Real>& rho, const PhaseModel<Real>& phases)
{
    return apply_phases(rho, path_phases(phases));
}

/// Partial trace over the ancilla: rho'_jk = rho_jk <chi_k|chi_j> = rho_jk conj(Gamma_jk).
template <typename Real>
DensityMatrix<Real> decohere(const DensityMatrix<Real>& rho, const GramMatrix<Real>& gram)
{
    if (gram.size() != rho.size())
        throw InvalidArgument("Gram matrix size does not match path count");
    return DensityMatrix<Real>(rho.matrix().cwiseProduct(gram.matrix().conjugate()));
}

/// Two-path state left when every path except i and j is blocked, renormalized.
template <typename Real>
DensityMatrix<Real> block_paths(const DensityMatrix<Real>& rho, PathIndex i, PathIndex j)
{
    if (i.value == j.value)
        throw InvalidArgument("blocked pair needs two distinct paths");
    const Real weight = rho.population(i) + rho.population(j);
    if (!(weight > Real(0)))
        throw DegenerateBlock("paths " + std::to_string(i.value) + " and "
                              + std::to_string(j.value) + " carry no population");
    ComplexMatrix<Real> pair(2, 2);
    pair << rho(i, i), rho(i, j), rho(j, i), rho(j, j);
    pair /= weight;
    // Renormalize the diagonal exactly so the trace is 1 to the last bit.
    const Real pi = pair(0, 0).real();
    pair(1, 1) = Complex<Real>(Real(1) - pi, Real(0));
    return DensityMatrix<Real>(std::move(pair));
}

/// Simultaneous row/column relabeling: result path k is input path perm[k-1] (1-based labels).
template <typename Real>
ComplexMatrix<Real> relabel_paths(const ComplexMatrix<Real>& m, const std::vector<int>& perm)
{
    const Eigen::Index n = m.rows();
    if (static_cast<Eigen::Index>(perm.size()) != n)
        throw InvalidArgument("permutation length does not match path count");
    std::vector<bool> seen(perm.size(), false);
    for (int p : perm) {
        if (p < 1 || p > n || seen[static_cast<std::size_t>(p - 1)])
            throw InvalidArgument("relabeling is not a permutation of 1..n");
        seen[static_cast<std::size_t>(p - 1)] = true;
    }
    ComplexMatrix<Real> out(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            out(a, b) = m(perm[a] - 1, perm[b] - 1);
    return out;
}

template <typename Real>
DensityMatrix<Real> relabel_paths(const DensityMatrix<Real>& rho, const std::vector<int>& perm)
{
    return DensityMatrix<Real>(relabel_paths<Real>(rho.matrix(), perm));
}

template <typename Real>
GramMatrix<Real> relabel_paths(const GramMatrix<Real>& gram, const std::vector<int>& perm)
{
    return GramMatrix<Real>(relabel_paths<Real>(gram.matrix(), perm));
}

/// Quanton state, optional ancilla overlaps (absent means all-ones), phase model and
/// detector coupling |alpha|^2.
template <typename Real = double>
class Scenario {
public:
    Scenario(DensityMatrix<Real> state, std::optional<GramMatrix<Real>> gram,
             PhaseModel<Real> phases, Real alpha_sq = Real(1))
        : state_(std::move(state)), gram_(std::move(gram)), phases_(std::move(phases)),
          alpha_sq_(alpha_sq)
    {
        const Eigen::Index n = state_.size();
        if (gram_ && gram_->size() != n)
            throw InvalidArgument("Gram matrix size does not match path count");
        if (phase_count(phases_) != n)
            throw InvalidArgument("phase model length does not match path count");
        const RealVector<Real> thetas = path_phases(phases_);
        if (!thetas.allFinite())
            throw InvalidArgument("phase angles must be finite");
        if (!(alpha_sq_ > Real(0)) || !std::isfinite(alpha_sq_))
            throw InvalidArgument("detector coupling |alpha|^2 must be positive");
    }

    Eigen::Index size() const noexcept { return state_.size(); }
    const DensityMatrix<Real>& state() const noexcept { return state_; }
    const std::optional<GramMatrix<Real>>& gram() const noexcept { return gram_; }
    const PhaseModel<Real>& phases() const noexcept { return phases_; }
    Real alpha_sq() const noexcept { return alpha_sq_; }

    /// Quanton state after tracing out the ancilla.
    DensityMatrix<Real> reduced_state() const
    {
        return gram_ ? decohere(state_, *gram_) : state_;
    }

    Scenario with_phases(PhaseModel<Real> phases) const
    {
        return Scenario(state_, gram_, std::move(phases), alpha_sq_);
    }

    Scenario with_state(DensityMatrix<Real> state) const
    {
        return Scenario(std::move(state), gram_, phases_, alpha_sq_);
    }

    Scenario with_gram(std::optional<GramMatrix<Real>> gram) const
    {
        return Scenario(state_, std::move(gram), phases_, alpha_sq_);
    }

private:
    DensityMatrix<Real> state_;
    std::optional<GramMatrix<Real>> gram_;
    PhaseModel<Real> phases_;
    Real alpha_sq_;
};

} // namespace fringelab
