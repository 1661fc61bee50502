#include "fringelab/analysis.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace fringelab {

namespace {

using json = nlohmann::json;

json phases_to_json(const PhaseConfiguration<double>& p)
{
    json out;
    out["phases"] = json::array();
    for (Eigen::Index i = 0; i < p.phases.size(); ++i)
        out["phases"].push_back(p.phases[i]);
    out["theta"] = p.parameter ? json(*p.parameter) : json(nullptr);
    return out;
}

std::string format(double x)
{
    std::ostringstream s;
    s << std::setprecision(12) << x;
    return s.str();
}

std::string format(const std::optional<double>& x)
{
    return x ? format(*x) : std::string("n/a");
}

void print_report(std::ostream& out, const MeasureReport<double>& r, const std::string& indent)
{
    out << indent << "I_max = " << format(r.extrema.i_max) << ", I_min = " << format(r.extrema.i_min)
        << ", I_inc = " << format(r.extrema.i_inc) << '\n';
    if (r.extrema.argmax.parameter)
        out << indent << "argmax theta = " << format(*r.extrema.argmax.parameter)
            << ", argmin theta = " << format(*r.extrema.argmin.parameter) << '\n';
    out << indent << "V   (contrast)          = " << format(r.v_traditional) << '\n';
    out << indent << "V_C (new visibility)    = " << format(r.v_new);
    if (!r.v_new)
        out << "  (" << r.v_new_reason << ')';
    out << '\n';
    out << indent << "C   (l1 coherence)      = " << format(r.coherence) << '\n';
    out << indent << "D_Q (distinguishability) = " << format(r.d_q);
    if (!r.d_q)
        out << "  (" << r.d_q_reason << ')';
    out << '\n';
    out << indent << "absorbable phases: " << (r.absorbable_phases ? "yes" : "no") << '\n';
}

} // namespace

Analysis analyze(const Scenario<double>& s, const ExtremizeOptions& options)
{
    if (s.size() < 2)
        throw UndefinedMeasure("analysis needs at least two paths");
    Analysis a;
    a.paths = static_cast<int>(s.size());
    a.measures = measure_report(s, options);
    if (s.gram()) {
        MeasureReport<double> bare = measure_report(s.with_gram(std::nullopt), options);
        bare.d_q.reset();
        bare.d_q_reason = "before the path detector acts";
        a.pre_decoherence = std::move(bare);
    }
    if (a.measures.d_q) {
        a.duality.push_back(check(Relation::dq_c, a.measures.coherence, *a.measures.d_q));
        if (a.paths == 3)
            a.duality.push_back(
                check(Relation::threeslit, a.measures.v_traditional, *a.measures.d_q));
    }
    return a;
}

PairwiseResult pairwise(const Scenario<double>& s)
{
    const int n = static_cast<int>(s.size());
    if (n < 2)
        throw UndefinedMeasure("pairwise protocol needs at least two paths");
    const DensityMatrix<double> rho = s.reduced_state();
    PairwiseResult result;
    double weighted = 0;
    double unweighted = 0;
    bool any_dark = false;
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            PairwiseRow row{i, j, rho.population({i}) + rho.population({j}), std::nullopt, {}};
            try {
                const Scenario<double> pair(block_paths(rho, PathIndex{i}, PathIndex{j}),
                                            std::nullopt, IndependentPhases<double>::zeros(2),
                                            s.alpha_sq());
                const ExtremaResult<double> e = extremize(pair);
                row.visibility = visibility_traditional(e.i_max, e.i_min);
                weighted += row.weight * *row.visibility;
                unweighted += *row.visibility;
            } catch (const DegenerateBlock& e) {
                row.note = "dark pair, weight 0";
                any_dark = true;
            }
            result.rows.push_back(std::move(row));
        }
    }
    result.reconstructed = weighted / double(n - 1);
    if (!any_dark)
        result.average = 2.0 * unweighted / double(n * (n - 1));
    result.direct = l1_coherence(rho);
    result.agree = std::abs(result.reconstructed - result.direct) <= 1e-9;
    return result;
}

nlohmann::json to_json(const MeasureReport<double>& r)
{
    json out;
    out["v_traditional"] = r.v_traditional;
    out["v_new"] = r.v_new ? json(*r.v_new) : json(nullptr);
    out["coherence"] = r.coherence;
    out["d_q"] = r.d_q ? json(*r.d_q) : json(nullptr);
    out["absorbable_phases"] = r.absorbable_phases;
    json reason = json::object();
    if (!r.v_new)
        reason["v_new"] = r.v_new_reason;
    if (!r.d_q)
        reason["d_q"] = r.d_q_reason;
    if (!reason.empty())
        out["reason"] = reason;
    out["intensity"] = {{"max", r.extrema.i_max},
                        {"min", r.extrema.i_min},
                        {"inc", r.extrema.i_inc},
                        {"argmax", phases_to_json(r.extrema.argmax)},
                        {"argmin", phases_to_json(r.extrema.argmin)}};
    return out;
}

nlohmann::json to_json(const DualityCheck<double>& c)
{
    return {{"relation", std::string(relation_name(c.relation))},
            {"lhs", c.lhs},
            {"slack", c.slack},
            {"holds", c.holds},
            {"saturated", c.saturated}};
}

nlohmann::json to_json(const Analysis& a)
{
    json out;
    out["n"] = a.paths;
    out["measures"] = to_json(a.measures);
    out["pre_decoherence"] = a.pre_decoherence ? to_json(*a.pre_decoherence) : json(nullptr);
    out["duality"] = json::array();
    for (const auto& c : a.duality)
        out["duality"].push_back(to_json(c));
    return out;
}

nlohmann::json to_json(const PairwiseResult& r)
{
    json out;
    out["pairs"] = json::array();
    for (const auto& row : r.rows) {
        json entry{{"i", row.i}, {"j", row.j}, {"weight", row.weight},
                   {"visibility", row.visibility ? json(*row.visibility) : json(nullptr)}};
        if (!row.note.empty())
            entry["note"] = row.note;
        out["pairs"].push_back(std::move(entry));
    }
    out["reconstructed_coherence"] = r.reconstructed;
    out["average_visibility"] = r.average ? json(*r.average) : json(nullptr);
    out["direct_coherence"] = r.direct;
    out["agree"] = r.agree;
    return out;
}

void print(std::ostream& out, const Analysis& a)
{
    out << "paths: " << a.paths << '\n';
    if (a.pre_decoherence) {
        out << "before decoherence:\n";
        print_report(out, *a.pre_decoherence, "  ");
        out << "after decoherence:\n";
    } else {
        out << "measures:\n";
    }
    print_report(out, a.measures, "  ");
    if (!a.duality.empty()) {
        out << "duality:\n";
        for (const auto& c : a.duality)
            out << "  " << relation_name(c.relation) << ": lhs = " << format(c.lhs)
                << ", slack = " << format(c.slack) << (c.holds ? ", holds" : ", VIOLATED")
                << (c.saturated ? ", saturated" : "") << '\n';
    }
}

void print(std::ostream& out, const PairwiseResult& r)
{
    out << "pair   weight          V_ij\n";
    for (const auto& row : r.rows) {
        out << '(' << row.i << ',' << row.j << ")  " << std::left << std::setw(14)
            << format(row.weight) << "  " << format(row.visibility);
        if (!row.note.empty())
            out << "  (" << row.note << ')';
        out << std::right << '\n';
    }
    out << "reconstructed C (weighted pairs) = " << format(r.reconstructed) << '\n';
    out << "average pair visibility          = " << format(r.average) << '\n';
    out << "direct l1 coherence              = " << format(r.direct) << '\n';
    out << (r.agree ? "reconstruction agrees with direct coherence\n"
                    : "MISMATCH between reconstruction and direct coherence\n");
}

} // namespace fringelab
