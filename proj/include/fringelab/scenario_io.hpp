#pragma once

// Scenario documents (JSON) and the built-in scenarios used by the regression suite.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fringelab/core_model.hpp"

namespace fringelab {

/// Malformed or invalid scenario document; the message names the offending key path.
class ScenarioParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Angle given as a number or as a multiple of pi written exactly: "pi", "-pi", "pi/3",
/// "2pi/3", "2*pi/3".
double parse_angle(const nlohmann::json& value, const std::string& where);

/// Complex entries as {"re", "im"} objects, rows as arrays.
nlohmann::json complex_to_json(std::complex<double> z);
nlohmann::json matrix_to_json(const ComplexMatrix<double>& m);

Scenario<double> parse_scenario(const nlohmann::json& doc);
Scenario<double> load_scenario(const std::filesystem::path& path);
nlohmann::json scenario_to_json(const Scenario<double>& s);

/// bimonte3, mw4, piflip4, ancilla4, dark, pure2. `lambda` parameterizes bimonte3.
std::optional<Scenario<double>> builtin_scenario(std::string_view name, double lambda = 0.5);
const std::vector<std::string>& builtin_names();

/// Three-path state with rho_12 = rho_23 = -lambda/3, rho_13 = lambda/3.
DensityMatrix<double> bimonte_state(double lambda);
/// Ancilla overlaps with <chi_1|chi_2> = 1 and path 3 orthogonal to both.
GramMatrix<double> bimonte_gram();
/// Equal superposition of four paths (every entry 1/4).
DensityMatrix<double> maximally_coherent4();
/// Path detector that only tells whether the quanton took path 4.
GramMatrix<double> path4_detector();

} // namespace fringelab
