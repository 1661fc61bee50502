#include "doctest.h"

#include <cmath>
#include <random>

#include "fringelab/measures.hpp"
#include "fringelab/sampling.hpp"
#include "fringelab/scenario_io.hpp"

using namespace fringelab;
using M = ComplexMatrix<double>;
using C = std::complex<double>;

namespace {

// Off-diagonal moduli summed by hand, separate from the library loop.
double coherence_oracle(const M& m)
{
    return (m.cwiseAbs().sum() - m.diagonal().cwiseAbs().sum()) / double(m.rows() - 1);
}

} // namespace

TEST_CASE("traditional visibility")
{
    CHECK(visibility_traditional(4.0, 0.0) == 1.0);
    CHECK(visibility_traditional(2.5, 0.25) == doctest::Approx(9.0 / 11));
    CHECK(visibility_traditional(1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(visibility_traditional(0.0, 0.0), UndefinedMeasure);
    CHECK_THROWS_AS(visibility_traditional(1.0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(visibility_traditional(1.0, -0.5), InvalidArgument);
}

TEST_CASE("l1 coherence")
{
    CHECK(l1_coherence(maximally_coherent4()) == doctest::Approx(1.0));
    const auto mw4 = *builtin_scenario("mw4");
    CHECK(l1_coherence(mw4.reduced_state()) == doctest::Approx(0.5));
    CHECK(l1_coherence(DensityMatrix<double>::diagonal(RealVector<double>::Constant(3, 1.0 / 3)))
          == 0.0);
    CHECK_THROWS_AS(l1_coherence(DensityMatrix<double>::diagonal(RealVector<double>::Ones(1))),
                    UndefinedMeasure);

    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        const auto rho = sampling::random_density<double>(2 + i % 5, rng);
        CHECK(l1_coherence(rho) == doctest::Approx(coherence_oracle(rho.matrix())).epsilon(1e-13));
    }
}

TEST_CASE("new visibility")
{
    CHECK(visibility_new(4.0, 1.0, 4) == doctest::Approx(1.0));
    CHECK(visibility_new(2.5, 1.0, 4) == doctest::Approx(0.5));
    CHECK_THROWS_AS(visibility_new(1.0, 0.0, 4), UndefinedMeasure);
    CHECK_THROWS_AS(visibility_new(1.0, 1.0, 1), UndefinedMeasure);

    ExtremaResult<double> e;
    e.i_max = 1.5;
    e.i_inc = 1;
    e.absorbable = false;
    CHECK_THROWS_AS(visibility_new(e, 3), MeasureInapplicable);
}

TEST_CASE("new visibility equals coherence when phases are absorbable")
{
    std::mt19937_64 rng(77);
    for (int i = 0; i < 200; ++i) {
        const Eigen::Index n = 2 + i % 5;
        const auto rho = sampling::random_density<double>(n, rng);
        const Scenario<double> s(rho, std::nullopt, IndependentPhases<double>::zeros(n));
        const auto e = extremize(s);
        if (e.absorbable)
            CHECK(std::abs(visibility_new(e, n) - l1_coherence(rho)) < 1e-9);
        else
            CHECK_THROWS_AS(visibility_new(e, n), MeasureInapplicable);
    }
}

TEST_CASE("two paths with equal populations: V = V_C = 2|rho_12|")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        std::uniform_real_distribution<double> r(0.0, 0.5), phi(-3.0, 3.0);
        M m(2, 2);
        const C off = std::polar(r(rng), phi(rng));
        m << 0.5, off, std::conj(off), 0.5;
        const Scenario<double> s(DensityMatrix<double>(m), std::nullopt,
                                 IndependentPhases<double>::zeros(2));
        const auto e = extremize(s);
        CHECK(std::abs(visibility_traditional(e.i_max, e.i_min) - 2 * std::abs(off)) < 1e-9);
        CHECK(std::abs(visibility_new(e, 2) - 2 * std::abs(off)) < 1e-9);
    }
}

TEST_CASE("two-path visibility and pairwise reconstruction")
{
    M m(3, 3);
    m << 0.5, 0.2, C(0, 0.1), 0.2, 0.3, 0.0, C(0, -0.1), 0.0, 0.2;
    const DensityMatrix<double> rho(m);
    CHECK(two_path_visibility(rho, PathIndex{1}, PathIndex{2}) == doctest::Approx(0.4 / 0.8));
    CHECK(two_path_visibility(rho, PathIndex{2}, PathIndex{3}) == 0.0);
    CHECK_THROWS_AS(two_path_visibility(rho, PathIndex{1}, PathIndex{1}), InvalidArgument);
    CHECK(pairwise_coherence(rho) == doctest::Approx(l1_coherence(rho)));

    const auto mw4 = builtin_scenario("mw4")->reduced_state();
    CHECK(pairwise_average_visibility(mw4) == doctest::Approx(0.5));

    const auto dark = DensityMatrix<double>::diagonal(RealVector<double>::Unit(3, 0));
    CHECK_THROWS_AS(two_path_visibility(dark, PathIndex{2}, PathIndex{3}), DegenerateBlock);
    CHECK(pairwise_coherence(dark) == 0.0);
    CHECK_THROWS_AS(pairwise_average_visibility(dark), DegenerateBlock);
}

TEST_CASE("distinguishability of pure states")
{
    const auto mw4 = *builtin_scenario("mw4");
    CHECK(distinguishability_pure(mw4.state(), *mw4.gram()) == doctest::Approx(0.5));
    CHECK(distinguishability_pure(maximally_coherent4(), GramMatrix<double>::identity(4)) == 1.0);
    CHECK(distinguishability_pure(maximally_coherent4(), GramMatrix<double>::all_ones(4))
          == doctest::Approx(0.0));
    const auto mixed = DensityMatrix<double>::diagonal(RealVector<double>::Constant(4, 0.25));
    CHECK_THROWS_AS(distinguishability_pure(mixed, GramMatrix<double>::identity(4)),
                    MeasureInapplicable);
    CHECK_THROWS_AS(distinguishability_pure(maximally_coherent4(), GramMatrix<double>::identity(3)),
                    InvalidArgument);
}

TEST_CASE("measure report")
{
    const auto r = measure_report(*builtin_scenario("mw4"));
    CHECK(r.v_traditional == doctest::Approx(9.0 / 11));
    REQUIRE(r.v_new);
    CHECK(*r.v_new == doctest::Approx(0.5));
    CHECK(r.coherence == doctest::Approx(0.5));
    REQUIRE(r.d_q);
    CHECK(*r.d_q == doctest::Approx(0.5));

    const auto flip = measure_report(*builtin_scenario("piflip4"));
    CHECK_FALSE(flip.v_new);
    CHECK_FALSE(flip.v_new_reason.empty());
    CHECK_FALSE(flip.d_q);
    CHECK(flip.coherence == doctest::Approx(1.0));
}

TEST_CASE("property: coherence is invariant under relabeling and diagonal phases")
{
    std::mt19937_64 rng(1001);
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const int n = 2 + i % 5;
        const auto rho = sampling::random_density<double>(n, rng);
        const double c = l1_coherence(rho);
        const double permuted = l1_coherence(relabel_paths(rho, sampling::random_permutation(n, rng)));
        const double phased = l1_coherence(apply_phases(rho, sampling::random_phases<double>(n, rng)));
        if (std::abs(permuted - c) > 1e-12 || std::abs(phased - c) > 1e-12)
            ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("property: decoherence never increases coherence")
{
    std::mt19937_64 rng(1002);
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const Eigen::Index n = 2 + i % 5;
        const auto rho = sampling::random_density<double>(n, rng);
        const auto gram = sampling::random_gram<double>(n, 1 + i % 4, rng);
        if (l1_coherence(decohere(rho, gram)) > l1_coherence(rho) + 1e-12)
            ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("property: pure-state duality D_Q + C' = 1")
{
    std::mt19937_64 rng(1003);
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const Eigen::Index n = 2 + i % 5;
        const auto rho = sampling::random_pure<double>(n, rng);
        const auto gram = sampling::random_gram<double>(n, 1 + i % 4, rng);
        const double sum = distinguishability_pure(rho, gram) + l1_coherence(decohere(rho, gram));
        if (std::abs(sum - 1) > 1e-9)
            ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("property: pairwise reconstruction equals coherence")
{
    std::mt19937_64 rng(1004);
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto rho = sampling::random_density<double>(2 + i % 5, rng);
        if (std::abs(pairwise_coherence(rho) - l1_coherence(rho)) > 1e-12)
            ++failures;
    }
    CHECK(failures == 0);
}
