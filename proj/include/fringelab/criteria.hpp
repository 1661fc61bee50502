#pragma once

// Certification harness for candidate multi-path visibility measures. A measure is
// any functional of the quanton's density matrix; the harness samples states and
// probes the visibility criteria empirically:
//   (1) definable from the interference pattern alone   (recipe attribute)
//   (2) continuous in the matrix elements
//   (3) global minimum when there is no interference     (diagonal states, value 0)
//   (4) global maximum for pure equally populated states (value 1)
//   (5) no local extrema                                 (multi-start ascent/descent, evidence)
//   (6) independent of path labels and diagonal phase choice
// plus a side check that decoherence by an ancilla never increases the measure.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fringelab/core_model.hpp"

namespace fringelab {

struct MeasureFunctional {
    std::string name;
    std::function<double(const DensityMatrix<double>&)> evaluate;
    bool pattern_recipe = false;
};

enum class CriterionStatus { pass, fail, not_testable };

std::string_view status_name(CriterionStatus status);

struct CriterionResult {
    std::string id;
    std::string title;
    CriterionStatus status = CriterionStatus::not_testable;
    std::optional<DensityMatrix<double>> witness;
    std::optional<DensityMatrix<double>> witness_partner;  ///< decohered state, monotonicity only
    std::string detail;
};

struct CriteriaVerdict {
    std::string measure;
    int paths = 0;
    int samples = 0;
    std::uint64_t seed = 0;
    std::vector<CriterionResult> criteria;

    const CriterionResult& criterion(std::string_view id) const;
    /// No criterion failed (not-testable ones are ignored).
    bool all_testable_pass() const;
};

struct CertifyOptions {
    int continuity_states = 100;
    int invariance_states = 200;
    int monotonicity_pairs = 200;
    int ascent_starts = 4;
    int ascent_iterations = 200;
    double extremum_tolerance = 1e-2;
    double value_tolerance = 1e-9;
};

inline constexpr std::string_view monotonicity_id = "decoherence_monotonicity";

CriteriaVerdict certify(const MeasureFunctional& measure, int n, int samples, std::uint64_t seed,
                        const CertifyOptions& options = {});

nlohmann::json to_json(const CriteriaVerdict& verdict);

/// l1 coherence, measurable from the pattern via the new visibility or pairwise blocking.
MeasureFunctional coherence_functional();

/// Fringe contrast of the pattern produced under a fixed phase model.
MeasureFunctional contrast_functional(PhaseModel<double> phases);

} // namespace fringelab
