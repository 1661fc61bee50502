#include "fringelab/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

namespace fringelab {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw ScenarioParseError(where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object())
        fail(where, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end())
        fail(where, std::string("missing key '") + key + "'");
    return *it;
}

std::string child(const std::string& where, const char* key)
{
    return where.empty() ? std::string(key) : where + "." + key;
}

std::string element(const std::string& where, std::size_t i)
{
    return where + "[" + std::to_string(i) + "]";
}

double parse_number(const json& v, const std::string& where)
{
    if (!v.is_number())
        fail(where, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        fail(where, "expected a finite number");
    return x;
}

std::complex<double> parse_complex(const json& v, const std::string& where)
{
    if (v.is_number())
        return {parse_number(v, where), 0.0};
    if (!v.is_object())
        fail(where, "expected {\"re\": x, \"im\": y} or a number");
    const double re = parse_number(require(v, "re", where), child(where, "re"));
    const double im = v.contains("im") ? parse_number(v["im"], child(where, "im")) : 0.0;
    return {re, im};
}

ComplexVector<double> parse_vector(const json& v, Eigen::Index size, const std::string& where)
{
    if (!v.is_array())
        fail(where, "expected an array");
    if (static_cast<Eigen::Index>(v.size()) != size)
        fail(where, "expected " + std::to_string(size) + " entries, got "
                        + std::to_string(v.size()));
    ComplexVector<double> out(size);
    for (std::size_t i = 0; i < v.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = parse_complex(v[i], element(where, i));
    return out;
}

ComplexMatrix<double> parse_matrix(const json& v, Eigen::Index n, const std::string& where)
{
    if (!v.is_array())
        fail(where, "expected an array of rows");
    if (static_cast<Eigen::Index>(v.size()) != n)
        fail(where, "expected " + std::to_string(n) + " rows, got " + std::to_string(v.size()));
    ComplexMatrix<double> out(n, n);
    for (std::size_t r = 0; r < v.size(); ++r)
        out.row(static_cast<Eigen::Index>(r)) = parse_vector(v[r], n, element(where, r)).transpose();
    return out;
}

RealVector<double> parse_angles(const json& v, Eigen::Index n, const std::string& where)
{
    if (!v.is_array())
        fail(where, "expected an array of angles");
    if (static_cast<Eigen::Index>(v.size()) != n)
        fail(where, "expected " + std::to_string(n) + " angles, got " + std::to_string(v.size()));
    RealVector<double> out(n);
    for (std::size_t i = 0; i < v.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = parse_angle(v[i], element(where, i));
    return out;
}

std::string type_of(const json& obj, const std::string& where, const char* fallback)
{
    if (!obj.is_object())
        fail(where, "expected an object");
    if (!obj.contains("type"))
        return fallback;
    if (!obj["type"].is_string())
        fail(child(where, "type"), "expected a string");
    return obj["type"].get<std::string>();
}

DensityMatrix<double> parse_state(const json& v, Eigen::Index n)
{
    const std::string type = type_of(v, "state", "");
    try {
        if (type == "pure")
            return DensityMatrix<double>::from_pure_amplitudes(
                parse_vector(require(v, "amplitudes", "state"), n, "state.amplitudes"));
        if (type == "density")
            return DensityMatrix<double>(
                parse_matrix(require(v, "entries", "state"), n, "state.entries"));
    } catch (const InvalidArgument& e) {
        fail("state", e.what());
    }
    fail("state.type", "expected \"pure\" or \"density\", got \"" + type + "\"");
}

GramMatrix<double> parse_gram(const json& v, Eigen::Index n)
{
    const std::string type = type_of(v, "gram", "matrix");
    try {
        if (type == "ancilla_states") {
            const json& dim_value = require(v, "dim", "gram");
            if (!dim_value.is_number_integer() || dim_value.get<long long>() < 1)
                fail("gram.dim", "expected a positive integer");
            const auto dim = static_cast<Eigen::Index>(dim_value.get<long long>());
            const json& states = require(v, "states", "gram");
            if (!states.is_array() || static_cast<Eigen::Index>(states.size()) != n)
                fail("gram.states", "expected " + std::to_string(n) + " ancilla vectors");
            ComplexMatrix<double> columns(dim, n);
            for (std::size_t k = 0; k < states.size(); ++k)
                columns.col(static_cast<Eigen::Index>(k)) =
                    parse_vector(states[k], dim, element("gram.states", k));
            return GramMatrix<double>::from_ancilla_states(columns);
        }
        if (type == "matrix" || type == "gram" || type == "density")
            return GramMatrix<double>(parse_matrix(require(v, "entries", "gram"), n, "gram.entries"));
    } catch (const InvalidArgument& e) {
        fail("gram", e.what());
    }
    fail("gram.type", "expected \"matrix\" or \"ancilla_states\", got \"" + type + "\"");
}

PhaseModel<double> parse_phase_model(const json& doc, Eigen::Index n)
{
    if (!doc.contains("phase_model"))
        return IndependentPhases<double>::zeros(n);
    const json& v = doc["phase_model"];
    const std::string type = type_of(v, "phase_model", "");
    if (type == "independent") {
        if (!v.contains("thetas"))
            return IndependentPhases<double>::zeros(n);
        return IndependentPhases<double>{parse_angles(v["thetas"], n, "phase_model.thetas")};
    }
    if (type == "linear") {
        LinearPhases<double> lin = LinearPhases<double>::zeros(n);
        if (v.contains("offsets"))
            lin.offsets = parse_angles(v["offsets"], n, "phase_model.offsets");
        if (v.contains("theta"))
            lin.theta = parse_angle(v["theta"], "phase_model.theta");
        return lin;
    }
    fail("phase_model.type", "expected \"independent\" or \"linear\", got \"" + type + "\"");
}

json angles_to_json(const RealVector<double>& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v[i]);
    return out;
}

} // namespace

nlohmann::json complex_to_json(std::complex<double> z)
{
    return nlohmann::json{{"re", z.real()}, {"im", z.imag()}};
}

nlohmann::json matrix_to_json(const ComplexMatrix<double>& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

double parse_angle(const nlohmann::json& value, const std::string& where)
{
    if (value.is_number())
        return parse_number(value, where);
    if (!value.is_string())
        fail(where, "expected an angle in radians or a multiple of \"pi\"");
    static const std::regex pattern(
        R"(^\s*([+-])?\s*([0-9]+(?:\.[0-9]*)?)?\s*\*?\s*pi\s*(?:/\s*([0-9]+(?:\.[0-9]*)?))?\s*$)");
    const std::string text = value.get<std::string>();
    std::smatch match;
    if (!std::regex_match(text, match, pattern))
        fail(where, "cannot parse angle \"" + text + "\"");
    double angle = std::numbers::pi;
    if (match[2].matched)
        angle *= std::stod(match[2].str());
    if (match[3].matched) {
        const double denominator = std::stod(match[3].str());
        if (denominator == 0.0)
            fail(where, "zero denominator in \"" + text + "\"");
        angle /= denominator;
    }
    return match[1].matched && match[1].str() == "-" ? -angle : angle;
}

Scenario<double> parse_scenario(const nlohmann::json& doc)
{
    if (!doc.is_object())
        fail("<root>", "expected a scenario object");
    const json& n_value = require(doc, "n", "<root>");
    if (!n_value.is_number_integer() || n_value.get<long long>() < 1)
        fail("n", "expected a positive integer path count");
    const auto n = static_cast<Eigen::Index>(n_value.get<long long>());

    DensityMatrix<double> state = parse_state(require(doc, "state", "<root>"), n);
    std::optional<GramMatrix<double>> gram;
    if (doc.contains("gram") && !doc["gram"].is_null())
        gram = parse_gram(doc["gram"], n);
    PhaseModel<double> phases = parse_phase_model(doc, n);
    double alpha_sq = 1.0;
    if (doc.contains("alpha_sq"))
        alpha_sq = parse_number(doc["alpha_sq"], "alpha_sq");
    try {
        return Scenario<double>(std::move(state), std::move(gram), std::move(phases), alpha_sq);
    } catch (const InvalidArgument& e) {
        fail("<root>", e.what());
    }
}

Scenario<double> load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioParseError(path.string() + ": cannot open scenario file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ScenarioParseError(path.string() + ": " + e.what());
    }
    try {
        return parse_scenario(doc);
    } catch (const ScenarioParseError& e) {
        throw ScenarioParseError(path.string() + ": " + e.what());
    }
}

nlohmann::json scenario_to_json(const Scenario<double>& s)
{
    json doc;
    doc["n"] = s.size();
    doc["state"] = {{"type", "density"}, {"entries", matrix_to_json(s.state().matrix())}};
    if (s.gram())
        doc["gram"] = {{"type", "matrix"}, {"entries", matrix_to_json(s.gram()->matrix())}};
    if (const auto* lin = std::get_if<LinearPhases<double>>(&s.phases()))
        doc["phase_model"] = {
            {"type", "linear"}, {"theta", lin->theta}, {"offsets", angles_to_json(lin->offsets)}};
    else
        doc["phase_model"] = {
            {"type", "independent"},
            {"thetas", angles_to_json(std::get<IndependentPhases<double>>(s.phases()).thetas)}};
    doc["alpha_sq"] = s.alpha_sq();
    return doc;
}

DensityMatrix<double> bimonte_state(double lambda)
{
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw InvalidArgument("bimonte3 needs lambda in [0, 1]");
    ComplexMatrix<double> m(3, 3);
    m << 1, -lambda, lambda,
        -lambda, 1, -lambda,
        lambda, -lambda, 1;
    return DensityMatrix<double>(m / 3.0);
}

GramMatrix<double> bimonte_gram()
{
    ComplexMatrix<double> g(3, 3);
    g << 1, 1, 0,
        1, 1, 0,
        0, 0, 1;
    return GramMatrix<double>(g);
}

DensityMatrix<double> maximally_coherent4()
{
    return DensityMatrix<double>::from_pure_amplitudes(ComplexVector<double>::Constant(4, 0.5));
}

GramMatrix<double> path4_detector()
{
    ComplexMatrix<double> states = ComplexMatrix<double>::Zero(2, 4);
    states(0, 0) = states(0, 1) = states(0, 2) = 1.0;
    states(1, 3) = 1.0;
    return GramMatrix<double>::from_ancilla_states(states);
}

const std::vector<std::string>& builtin_names()
{
    static const std::vector<std::string> names{"bimonte3", "mw4",  "piflip4",
                                                "ancilla4", "dark", "pure2"};
    return names;
}

std::optional<Scenario<double>> builtin_scenario(std::string_view name, double lambda)
{
    if (name == "bimonte3")
        return Scenario<double>(bimonte_state(lambda), bimonte_gram(),
                                IndependentPhases<double>::zeros(3));
    if (name == "mw4")
        return Scenario<double>(maximally_coherent4(), path4_detector(),
                                LinearPhases<double>::zeros(4));
    if (name == "piflip4") {
        LinearPhases<double> phases = LinearPhases<double>::zeros(4);
        phases.offsets[3] = std::numbers::pi;
        return Scenario<double>(maximally_coherent4(), std::nullopt, phases);
    }
    if (name == "ancilla4") {
        ComplexMatrix<double> m(4, 4);
        m << 1, 1, 1, 0,
            1, 1, 1, 0,
            1, 1, 1, 0,
            0, 0, 0, 1;
        return Scenario<double>(DensityMatrix<double>(m / 4.0), std::nullopt,
                                LinearPhases<double>::zeros(4));
    }
    if (name == "dark")
        return Scenario<double>(DensityMatrix<double>::diagonal(RealVector<double>::Constant(4, 0.25)),
                                std::nullopt, LinearPhases<double>::zeros(4));
    if (name == "pure2")
        return Scenario<double>(DensityMatrix<double>::from_pure_amplitudes(
                                    ComplexVector<double>::Constant(2, std::sqrt(0.5))),
                                std::nullopt, IndependentPhases<double>::zeros(2));
    return std::nullopt;
}

} // namespace fringelab
