#include "doctest.h"

#include <numbers>

#include "fringelab/criteria.hpp"
#include "fringelab/measures.hpp"
#include "fringelab/scenario_io.hpp"

using namespace fringelab;

TEST_CASE("l1 coherence passes every testable criterion")
{
    for (int n : {2, 3, 4}) {
        const auto v = certify(coherence_functional(), n, 1000, 7);
        INFO("n = " << n << "\n" << to_json(v).dump(2));
        CHECK(v.all_testable_pass());
        CHECK(v.criteria.size() == 7);
        CHECK(v.criterion("1").status == CriterionStatus::pass);
        CHECK(v.criterion(monotonicity_id).status == CriterionStatus::pass);
        for (const auto& c : v.criteria)
            CHECK_FALSE(c.witness);
    }
}

TEST_CASE("constant zero fails the maximum criterion with a witness")
{
    const MeasureFunctional zero{"zero", [](const DensityMatrix<double>&) { return 0.0; }, false};
    const auto v = certify(zero, 3, 100, 1);
    const auto& c4 = v.criterion("4");
    CHECK(c4.status == CriterionStatus::fail);
    REQUIRE(c4.witness);
    CHECK(c4.witness->is_pure());
    CHECK(c4.witness->matrix().diagonal().real().isApproxToConstant(1.0 / 3, 1e-12));
    CHECK(v.criterion("1").status == CriterionStatus::not_testable);
    CHECK(v.criterion("3").status == CriterionStatus::pass);
    CHECK_FALSE(v.all_testable_pass());
}

TEST_CASE("contrast under the pi-flip constraint fails monotonicity")
{
    LinearPhases<double> flip{0.0, RealVector<double>::Zero(4)};
    flip.offsets[3] = std::numbers::pi;
    CertifyOptions quick;
    quick.ascent_starts = 1;
    quick.ascent_iterations = 5;
    quick.continuity_states = 10;
    quick.invariance_states = 10;
    const auto v = certify(contrast_functional(flip), 4, 100, 7, quick);
    const auto& mono = v.criterion(monotonicity_id);
    CHECK(mono.status == CriterionStatus::fail);
    REQUIRE(mono.witness);
    REQUIRE(mono.witness_partner);
    CHECK((mono.witness->matrix() - maximally_coherent4().matrix()).norm() < 1e-12);
    const auto expected = decohere(maximally_coherent4(), path4_detector());
    CHECK((mono.witness_partner->matrix() - expected.matrix()).norm() < 1e-12);
    CHECK(v.criterion("4").status == CriterionStatus::fail);
}

TEST_CASE("certify preconditions and serialization")
{
    CHECK_THROWS_AS(certify(coherence_functional(), 3, 99, 1), InvalidArgument);
    CHECK_THROWS_AS(certify(coherence_functional(), 1, 100, 1), InvalidArgument);

    CertifyOptions quick;
    quick.ascent_starts = 1;
    quick.ascent_iterations = 20;
    const auto a = certify(coherence_functional(), 3, 100, 42, quick);
    const auto b = certify(coherence_functional(), 3, 100, 42, quick);
    CHECK(to_json(a).dump() == to_json(b).dump());
    const auto j = to_json(a);
    CHECK(j["criteria"].size() == 7);
    CHECK(j["criteria"][0]["status"] == "pass");
    CHECK(j["all_testable_pass"] == true);
    CHECK_THROWS_AS(a.criterion("9"), InvalidArgument);
}
