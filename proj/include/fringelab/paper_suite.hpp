#pragma once

// Regression of every exact value claimed for the built-in scenarios.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fringelab/core_model.hpp"

namespace fringelab {

struct SuiteCheck {
    int id = 0;
    std::string name;
    std::string expected;
    std::string observed;
    bool pass = false;
};

struct SuiteOptions {
    /// Replaces the offsets of the piflip4 scenario (negative control).
    std::optional<RealVector<double>> piflip_offsets;
    double tolerance = 1e-9;
};

struct SuiteResult {
    std::vector<SuiteCheck> checks;

    int passed() const;
    bool all_pass() const { return passed() == static_cast<int>(checks.size()); }
};

/// The lambda grid used for the three-path checks.
const std::vector<double>& suite_lambdas();

SuiteResult run_paper_suite(const SuiteOptions& options = {});

void print(std::ostream& out, const SuiteResult& result);
nlohmann::json to_json(const SuiteResult& result);

} // namespace fringelab
