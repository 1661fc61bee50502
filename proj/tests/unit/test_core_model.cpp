#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fringelab/core_model.hpp"
#include "fringelab/sampling.hpp"

using namespace fringelab;
using M = ComplexMatrix<double>;
using C = std::complex<double>;

TEST_CASE("density matrix validation")
{
    M good(2, 2);
    good << 0.5, 0.5, 0.5, 0.5;
    CHECK_NOTHROW(DensityMatrix<double>{good});

    M not_square(2, 3);
    not_square.setZero();
    CHECK_THROWS_AS(DensityMatrix<double>{not_square}, InvalidArgument);

    M not_hermitian = good;
    not_hermitian(0, 1) = C(0.5, 0.1);
    CHECK_THROWS_AS(DensityMatrix<double>{not_hermitian}, InvalidArgument);

    M bad_trace = good * 1.01;
    CHECK_THROWS_AS(DensityMatrix<double>{bad_trace}, InvalidArgument);

    M negative(2, 2);
    negative << 0.5, 0.8, 0.8, 0.5;
    CHECK_THROWS_AS(DensityMatrix<double>{negative}, InvalidArgument);

    M nan = good;
    nan(0, 0) = C(NAN, 0);
    CHECK_THROWS_AS(DensityMatrix<double>{nan}, InvalidArgument);
}

TEST_CASE("pure amplitudes and accessors")
{
    ComplexVector<double> amps(3);
    amps << C(1, 0), C(0, 1), C(1, 1);
    amps /= amps.norm();
    const auto rho = DensityMatrix<double>::from_pure_amplitudes(amps);
    CHECK(rho.is_pure());
    CHECK(rho.population(PathIndex{3}) == doctest::Approx(0.5));
    CHECK(std::abs(rho(PathIndex{1}, PathIndex{2}) - amps[0] * std::conj(amps[1])) < 1e-15);
    CHECK_THROWS_AS(rho(PathIndex{0}, PathIndex{1}), InvalidArgument);
    CHECK_THROWS_AS(rho(PathIndex{1}, PathIndex{4}), InvalidArgument);

    const auto mixed = DensityMatrix<double>::diagonal(RealVector<double>::Constant(3, 1.0 / 3));
    CHECK_FALSE(mixed.is_pure());
}

TEST_CASE("gram matrix validation and ancilla construction")
{
    M g(2, 2);
    g << 1, 0.3, 0.3, 1;
    CHECK_NOTHROW(GramMatrix<double>{g});
    M not_unit = g;
    not_unit(1, 1) = 0.9;
    CHECK_THROWS_AS(GramMatrix<double>{not_unit}, InvalidArgument);
    M too_big = g;
    too_big(0, 1) = too_big(1, 0) = 1.2;
    CHECK_THROWS_AS(GramMatrix<double>{too_big}, InvalidArgument);

    // chi_1 = chi_2 = e1, chi_3 = e2: <chi_j|chi_k> by hand.
    M states(2, 3);
    states << 1, 1, 0, 0, 0, 1;
    const auto gram = GramMatrix<double>::from_ancilla_states(states);
    M expected(3, 3);
    expected << 1, 1, 0, 1, 1, 0, 0, 0, 1;
    CHECK((gram.matrix() - expected).norm() < 1e-15);

    M unnormalized = states;
    unnormalized(0, 0) = 2;
    CHECK_THROWS_AS(GramMatrix<double>::from_ancilla_states(unnormalized), InvalidArgument);
}

TEST_CASE("decoherence is the entrywise product with the conjugated Gram matrix")
{
    std::mt19937_64 rng(11);
    const auto rho = sampling::random_pure<double>(3, rng);
    const auto gram = sampling::random_gram<double>(3, 2, rng);
    const auto out = decohere(rho, gram);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(out.matrix()(j, k) - rho.matrix()(j, k) * std::conj(gram.matrix()(j, k)))
                  < 1e-15);

    CHECK_THROWS_AS(decohere(rho, GramMatrix<double>::identity(4)), InvalidArgument);
    CHECK((decohere(rho, GramMatrix<double>::all_ones(3)).matrix() - rho.matrix()).norm() < 1e-15);
    const auto diag = decohere(rho, GramMatrix<double>::identity(3));
    CHECK((diag.matrix() - M(rho.matrix().diagonal().asDiagonal())).norm() < 1e-15);
}

TEST_CASE("apply_phases and linear phase models")
{
    const auto rho = DensityMatrix<double>::from_pure_amplitudes(
        ComplexVector<double>::Constant(3, 1 / std::sqrt(3.0)));
    RealVector<double> t(3);
    t << 0.1, -0.4, 2.0;
    const auto out = apply_phases(rho, t);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(out.matrix()(j, k) - std::polar(1.0 / 3, t[j] - t[k])) < 1e-15);

    LinearPhases<double> lin{0.5, RealVector<double>::Zero(3)};
    lin.offsets[2] = std::numbers::pi;
    const RealVector<double> phases = path_phases(PhaseModel<double>{lin});
    CHECK(phases[0] == doctest::Approx(0.5));
    CHECK(phases[1] == doctest::Approx(1.0));
    CHECK(phases[2] == doctest::Approx(1.5 + std::numbers::pi));
}

TEST_CASE("block_paths renormalizes the two-path sub-block")
{
    M m(3, 3);
    m << 0.5, C(0.1, 0.1), 0.2, C(0.1, -0.1), 0.3, 0.05, 0.2, 0.05, 0.2;
    const DensityMatrix<double> rho(m);
    const auto block = block_paths(rho, PathIndex{1}, PathIndex{3});
    CHECK(block.size() == 2);
    CHECK(block.matrix()(0, 0).real() == doctest::Approx(0.5 / 0.7));
    CHECK(std::abs(block.matrix()(0, 1) - C(0.2 / 0.7)) < 1e-15);
    CHECK_THROWS_AS(block_paths(rho, PathIndex{2}, PathIndex{2}), InvalidArgument);

    const auto dark = DensityMatrix<double>::diagonal(RealVector<double>::Unit(3, 0));
    CHECK_THROWS_AS(block_paths(dark, PathIndex{2}, PathIndex{3}), DegenerateBlock);
}

TEST_CASE("relabel_paths moves input path perm[k-1] to path k")
{
    M m(3, 3);
    m << 0.5, 0.1, 0.2, 0.1, 0.3, 0.05, 0.2, 0.05, 0.2;
    const DensityMatrix<double> rho(m);
    const auto out = relabel_paths(rho, {3, 1, 2});
    CHECK(out.population(PathIndex{1}) == doctest::Approx(0.2));
    CHECK(out.matrix()(0, 1).real() == doctest::Approx(0.2));
    CHECK_THROWS_AS(relabel_paths(rho, {1, 1, 2}), InvalidArgument);
    CHECK_THROWS_AS(relabel_paths(rho, {1, 2}), InvalidArgument);
}

TEST_CASE("scenario validation")
{
    const auto rho = DensityMatrix<double>::diagonal(RealVector<double>::Constant(2, 0.5));
    CHECK_THROWS_AS(Scenario<double>(rho, std::nullopt, IndependentPhases<double>::zeros(3)),
                    InvalidArgument);
    CHECK_THROWS_AS(Scenario<double>(rho, GramMatrix<double>::identity(3),
                                     IndependentPhases<double>::zeros(2)),
                    InvalidArgument);
    CHECK_THROWS_AS(Scenario<double>(rho, std::nullopt, IndependentPhases<double>::zeros(2), -1.0),
                    InvalidArgument);
}

TEST_CASE("property: Schur product with a Gram matrix preserves density matrices")
{
    std::mt19937_64 rng(20240901);
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const Eigen::Index n = 2 + i % 5;
        const auto rho = sampling::random_density<double>(n, rng);
        const auto gram = sampling::random_gram<double>(n, 1 + i % 4, rng);
        try {
            const auto out = decohere(rho, gram);
            if (detail::min_eigenvalue(out.matrix()) < -1e-10)
                ++failures;
        } catch (const std::exception&) {
            ++failures;
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("long double instantiation")
{
    using L = long double;
    const auto rho = DensityMatrix<L>::from_pure_amplitudes(
        ComplexVector<L>::Constant(2, L(1) / std::sqrt(L(2))));
    const auto out = decohere(rho, GramMatrix<L>::identity(2));
    CHECK(std::abs(out.matrix()(0, 1)) == 0.0L);
    CHECK(rho.is_pure());
}
