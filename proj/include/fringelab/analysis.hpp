#pragma once

// Scenario-level reports: all measures with duality checks, and the pairwise
// blocking protocol run through the interference engine.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fringelab/core_model.hpp"
#include "fringelab/duality.hpp"
#include "fringelab/measures.hpp"

namespace fringelab {

struct Analysis {
    int paths = 0;
    MeasureReport<double> measures;                       ///< reduced (decohered) state
    std::optional<MeasureReport<double>> pre_decoherence; ///< only when a Gram matrix is present
    std::vector<DualityCheck<double>> duality;
};

Analysis analyze(const Scenario<double>& s, const ExtremizeOptions& options = {});

struct PairwiseRow {
    int i = 0;
    int j = 0;
    double weight = 0;                ///< rho_ii + rho_jj
    std::optional<double> visibility; ///< absent for a dark pair
    std::string note;
};

struct PairwiseResult {
    std::vector<PairwiseRow> rows;
    double reconstructed = 0;          ///< 1/(n-1) sum weight * V_ij
    std::optional<double> average;     ///< 2/(n(n-1)) sum V_ij, absent with dark pairs
    double direct = 0;                 ///< l1 coherence of the reduced state
    bool agree = false;                ///< |reconstructed - direct| <= 1e-9
};

/// Blocks every pair of paths in turn and measures the two-path contrast with the engine.
PairwiseResult pairwise(const Scenario<double>& s);

nlohmann::json to_json(const MeasureReport<double>& report);
nlohmann::json to_json(const DualityCheck<double>& check);
nlohmann::json to_json(const Analysis& analysis);
nlohmann::json to_json(const PairwiseResult& result);

void print(std::ostream& out, const Analysis& analysis);
void print(std::ostream& out, const PairwiseResult& result);

} // namespace fringelab
