#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fringelab/interference.hpp"
#include "fringelab/sampling.hpp"
#include "fringelab/scenario_io.hpp"

using namespace fringelab;
using M = ComplexMatrix<double>;
using C = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

// Channel picture: every eigenvector of rho, tagged by the ancilla, adds an incoherent term
// sum_d |sum_j psi_j chi_j[d] e^{i theta_j}|^2.
double channel_intensity(const DensityMatrix<double>& rho, const M& ancillas,
                         const RealVector<double>& thetas)
{
    Eigen::SelfAdjointEigenSolver<M> eig(rho.matrix());
    double total = 0;
    for (Eigen::Index m = 0; m < rho.size(); ++m) {
        const double p = eig.eigenvalues()[m];
        const ComplexVector<double> psi = eig.eigenvectors().col(m);
        for (Eigen::Index d = 0; d < ancillas.rows(); ++d) {
            C amp = 0;
            for (Eigen::Index j = 0; j < rho.size(); ++j)
                amp += psi[j] * ancillas(d, j) * std::polar(1.0, thetas[j]);
            total += p * std::norm(amp);
        }
    }
    return total;
}

M random_ancillas(Eigen::Index n, Eigen::Index dim, std::mt19937_64& rng)
{
    M states(dim, n);
    for (Eigen::Index k = 0; k < n; ++k)
        states.col(k) = sampling::random_unit_vector<double>(dim, rng);
    return states;
}

// Three paths with rho_jk = -1/6 off the diagonal: the three interference terms cannot all
// be made positive, so I_max = 1 + 1/2 instead of the closed form 2; I_min = 0 at equal phases.
Scenario<double> frustrated3()
{
    M m = M::Constant(3, 3, C(-1.0 / 6));
    m.diagonal().setConstant(C(1.0 / 3));
    return Scenario<double>(DensityMatrix<double>(m), std::nullopt,
                            IndependentPhases<double>::zeros(3));
}

} // namespace

TEST_CASE("intensity matches the channel-vector picture")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 2 + trial % 4;
        const auto rho = sampling::random_density<double>(n, rng);
        const M ancillas = random_ancillas(n, 1 + trial % 3, rng);
        const auto thetas = sampling::random_phases<double>(n, rng);
        const Scenario<double> s(rho, GramMatrix<double>::from_ancilla_states(ancillas),
                                 IndependentPhases<double>{thetas}, 1.7);
        CHECK(intensity(s) == doctest::Approx(1.7 * channel_intensity(rho, ancillas, thetas))
                                  .epsilon(1e-12));
    }
}

TEST_CASE("intensity: two-path textbook formula")
{
    // I = 1 + 2|rho_12| cos(theta_1 - theta_2 + arg rho_12)
    M m(2, 2);
    m << 0.5, std::polar(0.3, 0.7), std::polar(0.3, -0.7), 0.5;
    for (double t : {0.0, 0.4, 1.3, 3.0}) {
        RealVector<double> th(2);
        th << t, 0.0;
        const Scenario<double> s(DensityMatrix<double>(m), std::nullopt,
                                 IndependentPhases<double>{th});
        CHECK(intensity(s) == doctest::Approx(1 + 0.6 * std::cos(t + 0.7)));
    }
}

TEST_CASE("sweep")
{
    const auto dark = *builtin_scenario("dark");
    const auto p = sweep(dark, 360);
    CHECK(p.intensities.size() == 360);
    for (Eigen::Index i = 0; i < p.intensities.size(); ++i)
        CHECK(p.intensities[i] == doctest::Approx(1.0).epsilon(1e-15));

    const auto flip = sweep(*builtin_scenario("piflip4"), 360);
    CHECK(flip.thetas[60] == doctest::Approx(pi / 3));
    CHECK(std::abs(flip.intensities[60] - 1.75) < 1e-9);

    const auto anc = sweep(*builtin_scenario("ancilla4"), 360);
    CHECK(std::abs(anc.intensities[120] - 0.25) < 1e-9);

    CHECK_THROWS_AS(sweep(*builtin_scenario("bimonte3"), 360), UnsupportedOperation);
    CHECK_THROWS_AS(sweep(dark, 1), InvalidArgument);

    std::ostringstream csv;
    sweep(dark, 4).write_csv(csv);
    CHECK(csv.str().rfind("theta,intensity\n0,1\n", 0) == 0);
}

TEST_CASE("extremize: maximally coherent four paths")
{
    const auto s = builtin_scenario("mw4")->with_gram(std::nullopt);
    const auto e = extremize(s);
    CHECK(std::abs(e.i_max - 4) < 1e-9);
    CHECK(std::abs(e.i_min) < 1e-9);
    CHECK(e.i_inc == 1);
    CHECK(e.absorbable);
    REQUIRE(e.argmax.parameter);
    CHECK(std::abs(*e.argmax.parameter) < 1e-9);
}

TEST_CASE("extremize: decohered four paths")
{
    const auto e = extremize(*builtin_scenario("ancilla4"));
    CHECK(std::abs(e.i_max - 2.5) < 1e-9);
    CHECK(std::abs(e.i_min - 0.25) < 1e-9);
    CHECK(std::abs(*e.argmin.parameter - 2 * pi / 3) < 1e-6);
}

TEST_CASE("extremize: pi-flip scenario finds the true extrema")
{
    // I(t) = 1 + (cos t - cos 3t)/2 is stationary where cos^2 t = 1/3.
    const auto e = extremize(*builtin_scenario("piflip4"));
    const double t_star = std::acos(1 / std::sqrt(3.0));
    const double peak = 1 + 4 / (3 * std::sqrt(3.0));
    CHECK(std::abs(e.i_max - peak) < 1e-12);
    CHECK(std::abs(*e.argmax.parameter - t_star) < 1e-7);
    CHECK(std::abs(e.i_min - (2 - peak)) < 1e-12);
    CHECK_FALSE(e.absorbable);
}

TEST_CASE("extremize: frustrated phases are not absorbable")
{
    const auto e = extremize(frustrated3());
    CHECK_FALSE(e.absorbable);
    CHECK_FALSE(e.closed_form_max);
    CHECK(std::abs(e.i_max - 1.5) < 1e-9);
    CHECK(std::abs(e.i_min) < 1e-9);
    CHECK(std::abs(intensity(frustrated3().with_phases(IndependentPhases<double>{e.argmax.phases}))
                   - e.i_max)
          < 1e-12);
}

TEST_CASE("extremize: bimonte closed form")
{
    for (double lambda : {0.2, 0.6, 1.0}) {
        const auto s = builtin_scenario("bimonte3", lambda)->with_gram(std::nullopt);
        const auto e = extremize(s);
        CHECK(e.absorbable);
        CHECK(e.closed_form_max);
        CHECK(std::abs(e.i_max - (1 + 2 * lambda)) < 1e-12);
        CHECK(std::abs(e.i_min - (1 - lambda)) < 1e-9);
    }
}

TEST_CASE("extremize agrees with the brute-force oracle")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 12; ++trial) {
        const Eigen::Index n = 2 + trial % 3;
        const auto rho = sampling::random_density<double>(n, rng);
        const Scenario<double> s(rho, std::nullopt, IndependentPhases<double>::zeros(n));
        const auto e = extremize(s);
        const auto o = extremize_oracle(s, n == 4 ? 24 : 64);
        CHECK(std::abs(e.i_min - o.i_min) < 1e-6);
        CHECK(std::abs(e.i_max - o.i_max) < 1e-6);
    }
    for (const auto& name : {"piflip4", "ancilla4", "mw4", "dark"}) {
        const auto s = *builtin_scenario(name);
        const auto e = extremize(s);
        const auto o = extremize_oracle(s, 2048);
        CHECK(std::abs(e.i_min - o.i_min) < 1e-9);
        CHECK(std::abs(e.i_max - o.i_max) < 1e-9);
    }
}

TEST_CASE("oracle limits")
{
    const auto rho = DensityMatrix<double>::diagonal(RealVector<double>::Constant(6, 1.0 / 6));
    const Scenario<double> s(rho, std::nullopt, IndependentPhases<double>::zeros(6));
    CHECK_THROWS_AS(extremize_oracle(s, 8), UnsupportedOperation);
    CHECK_THROWS_AS(extremize_oracle(frustrated3(), 1), InvalidArgument);
}

TEST_CASE("property: I_min <= I_inc <= I_max and extrema bound the sampled pattern")
{
    std::mt19937_64 rng(31337);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index n = 2 + trial % 4;
        const auto rho = sampling::random_density<double>(n, rng);
        RealVector<double> offsets = sampling::random_phases<double>(n, rng);
        const Scenario<double> s(rho, std::nullopt, LinearPhases<double>{0.0, offsets});
        const auto e = extremize(s);
        const auto th = sampling::random_phases<double>(1, rng);
        const double sample = intensity(s.with_phases(LinearPhases<double>{th[0], offsets}));
        if (e.i_min > e.i_inc + 1e-12 || e.i_max < e.i_inc - 1e-12 || e.i_min > sample + 1e-12
            || e.i_max < sample - 1e-12 || e.i_min < 0)
            ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("extremize in long double")
{
    using L = long double;
    const auto rho = DensityMatrix<L>::from_pure_amplitudes(
        ComplexVector<L>::Constant(3, L(1) / std::sqrt(L(3))));
    const Scenario<L> s(rho, std::nullopt, LinearPhases<L>::zeros(3));
    const auto e = extremize(s);
    CHECK(std::abs(e.i_max - 3.0L) < 1e-12L);
    CHECK(std::abs(e.i_min) < 1e-9L);
}
