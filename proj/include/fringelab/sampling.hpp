#pragma once

// Seeded generators for random quanton states and ancilla Gram matrices.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "fringelab/core_model.hpp"

namespace fringelab::sampling {

template <typename Real, typename Rng>
ComplexVector<Real> random_unit_vector(Eigen::Index dim, Rng& rng)
{
    std::normal_distribution<double> normal;
    ComplexVector<Real> v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        v[i] = Complex<Real>(Real(normal(rng)), Real(normal(rng)));
    return v / v.norm();
}

template <typename Real, typename Rng>
DensityMatrix<Real> random_pure(Eigen::Index n, Rng& rng)
{
    return DensityMatrix<Real>::from_pure_amplitudes(random_unit_vector<Real>(n, rng));
}

/// Pure state with rho_jj = 1/n and independent random phases.
template <typename Real, typename Rng>
DensityMatrix<Real> random_equal_population_pure(Eigen::Index n, Rng& rng)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    ComplexVector<Real> amps(n);
    const Real scale = Real(1) / std::sqrt(Real(n));
    for (Eigen::Index i = 0; i < n; ++i)
        amps[i] = std::polar(scale, Real(angle(rng)));
    return DensityMatrix<Real>::from_pure_amplitudes(amps);
}

/// Convex mixture of `terms` random pure states with random weights.
template <typename Real, typename Rng>
DensityMatrix<Real> random_mixture(Eigen::Index n, int terms, Rng& rng)
{
    std::uniform_real_distribution<double> uniform(0.05, 1.0);
    ComplexMatrix<Real> sum = ComplexMatrix<Real>::Zero(n, n);
    Real total = 0;
    for (int t = 0; t < terms; ++t) {
        const Real w = Real(uniform(rng));
        const ComplexVector<Real> v = random_unit_vector<Real>(n, rng);
        sum += w * (v * v.adjoint());
        total += w;
    }
    sum /= total;
    // Exact unit trace and real diagonal; the rounding in the mixture is far below tolerance.
    sum = (sum + sum.adjoint().eval()) / Real(2);
    sum /= sum.trace().real();
    const Real excess = sum.trace().real() - Real(1);
    sum(0, 0) -= excess;
    return DensityMatrix<Real>(std::move(sum));
}

/// Gram matrix of n random normalized ancilla vectors in dimension `dim`.
template <typename Real, typename Rng>
GramMatrix<Real> random_gram(Eigen::Index n, Eigen::Index dim, Rng& rng)
{
    ComplexMatrix<Real> states(dim, n);
    for (Eigen::Index k = 0; k < n; ++k)
        states.col(k) = random_unit_vector<Real>(dim, rng);
    ComplexMatrix<Real> g = states.adjoint() * states;
    g.diagonal().setOnes();
    return GramMatrix<Real>(std::move(g));
}

/// Ancilla states identical on every path except `isolated`, which is orthogonal to them.
template <typename Real = double>
GramMatrix<Real> isolating_gram(Eigen::Index n, PathIndex isolated)
{
    ComplexMatrix<Real> g = ComplexMatrix<Real>::Ones(n, n);
    g.row(isolated.offset()).setZero();
    g.col(isolated.offset()).setZero();
    g(isolated.offset(), isolated.offset()) = Complex<Real>(1);
    return GramMatrix<Real>(std::move(g));
}

/// One of: pure state, mixture of 2..n pure states, or a pure state decohered by a random Gram.
template <typename Real, typename Rng>
DensityMatrix<Real> random_density(Eigen::Index n, Rng& rng)
{
    std::uniform_int_distribution<int> kind(0, 2);
    switch (kind(rng)) {
    case 0:
        return random_pure<Real>(n, rng);
    case 1: {
        std::uniform_int_distribution<int> terms(2, static_cast<int>(std::max<Eigen::Index>(n, 2)));
        return random_mixture<Real>(n, terms(rng), rng);
    }
    default: {
        std::uniform_int_distribution<int> dim(1, static_cast<int>(n) + 1);
        const auto rho = random_pure<Real>(n, rng);
        return decohere(rho, random_gram<Real>(n, dim(rng), rng));
    }
    }
}

template <typename Rng>
std::vector<int> random_permutation(int n, Rng& rng)
{
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

template <typename Real, typename Rng>
RealVector<Real> random_phases(Eigen::Index n, Rng& rng)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    RealVector<Real> t(n);
    for (Eigen::Index i = 0; i < n; ++i)
        t[i] = Real(angle(rng));
    return t;
}

} // namespace fringelab::sampling
