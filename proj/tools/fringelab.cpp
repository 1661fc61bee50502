// fringelab: interference patterns, wave-nature measures and the built-in regression suite.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fringelab/analysis.hpp"
#include "fringelab/interference.hpp"
#include "fringelab/paper_suite.hpp"
#include "fringelab/scenario_io.hpp"

namespace {

enum ExitCode { ok = 0, parse_error = 1, unsupported = 2, regression = 3 };

struct Options {
    std::string scenario;
    int grid = 360;
    bool json = false;
    std::string out;
    double lambda = 0.5;
};

fringelab::Scenario<double> resolve(const Options& o)
{
    if (o.scenario.empty())
        throw fringelab::ScenarioParseError("a scenario (built-in name or file path) is required");
    if (auto s = fringelab::builtin_scenario(o.scenario, o.lambda))
        return *s;
    if (!std::filesystem::exists(o.scenario)) {
        std::string names;
        for (const auto& n : fringelab::builtin_names())
            names += " " + n;
        throw fringelab::ScenarioParseError("'" + o.scenario
                                            + "' is neither a file nor a built-in scenario (built-ins:"
                                            + names + ")");
    }
    return fringelab::load_scenario(o.scenario);
}

/// Writes to --out when given, stdout otherwise.
template <typename Emit>
void emit(const Options& o, Emit&& body)
{
    if (o.out.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream file(o.out);
    if (!file)
        throw fringelab::InvalidArgument("cannot open '" + o.out + "' for writing");
    body(file);
}

int cmd_pattern(const Options& o)
{
    const auto pattern = fringelab::sweep(resolve(o), o.grid);
    emit(o, [&](std::ostream& out) { pattern.write_csv(out); });
    return ok;
}

int cmd_analyze(const Options& o)
{
    const auto analysis = fringelab::analyze(resolve(o));
    emit(o, [&](std::ostream& out) {
        if (o.json)
            out << fringelab::to_json(analysis).dump(2) << '\n';
        else
            fringelab::print(out, analysis);
    });
    return ok;
}

int cmd_pairwise(const Options& o)
{
    const auto result = fringelab::pairwise(resolve(o));
    emit(o, [&](std::ostream& out) {
        if (o.json)
            out << fringelab::to_json(result).dump(2) << '\n';
        else
            fringelab::print(out, result);
    });
    return result.agree ? ok : regression;
}

int cmd_paper_suite(const Options& o)
{
    const auto result = fringelab::run_paper_suite();
    emit(o, [&](std::ostream& out) {
        if (o.json)
            out << fringelab::to_json(result).dump(2) << '\n';
        else
            fringelab::print(out, result);
    });
    return result.all_pass() ? ok : regression;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"n-path interference simulator and wave-nature measures"};
    app.require_subcommand(1);
    Options o;

    const auto common = [&](CLI::App* sub, bool with_scenario) {
        if (with_scenario)
            sub->add_option("scenario", o.scenario, "built-in scenario name or scenario file");
        sub->add_option("--grid", o.grid, "number of theta samples")->check(CLI::PositiveNumber);
        sub->add_flag("--json", o.json, "JSON output");
        sub->add_option("--out", o.out, "output file (default: stdout)");
        sub->add_option("--lambda", o.lambda, "coherence parameter of bimonte3")
            ->check(CLI::Range(0.0, 1.0));
    };
    auto* pattern = app.add_subcommand("pattern", "intensity over one theta period as CSV");
    auto* analyze = app.add_subcommand("analyze", "measures and duality checks");
    auto* pairwise = app.add_subcommand("pairwise", "two-path blocking protocol");
    auto* suite = app.add_subcommand("paper-suite", "regression of the built-in exact values");
    common(pattern, true);
    common(analyze, true);
    common(pairwise, true);
    common(suite, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : parse_error;
    }

    try {
        if (pattern->parsed())
            return cmd_pattern(o);
        if (analyze->parsed())
            return cmd_analyze(o);
        if (pairwise->parsed())
            return cmd_pairwise(o);
        return cmd_paper_suite(o);
    } catch (const fringelab::UnsupportedOperation& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return unsupported;
    } catch (const std::domain_error& e) {
        std::cerr << "not computable: " << e.what() << '\n';
        return unsupported;
    } catch (const fringelab::ScenarioParseError& e) {
        std::cerr << "scenario error: " << e.what() << '\n';
        return parse_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return parse_error;
    }
}
