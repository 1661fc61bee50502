#include "fringelab/paper_suite.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "fringelab/analysis.hpp"
#include "fringelab/interference.hpp"
#include "fringelab/measures.hpp"
#include "fringelab/scenario_io.hpp"

namespace fringelab {

namespace {

constexpr double pi = std::numbers::pi;

std::string num(double x)
{
    std::ostringstream s;
    s << std::setprecision(12) << x;
    return s.str();
}

class Recorder {
public:
    explicit Recorder(double tolerance) : tol_(tolerance) {}

    bool near(double observed, double expected) const
    {
        return std::abs(observed - expected) <= tol_;
    }

    void add(std::string name, std::string expected, std::string observed, bool pass)
    {
        SuiteCheck c;
        c.id = static_cast<int>(result_.checks.size()) + 1;
        c.name = std::move(name);
        c.expected = std::move(expected);
        c.observed = std::move(observed);
        c.pass = pass;
        result_.checks.push_back(std::move(c));
    }

    SuiteResult take() { return std::move(result_); }

private:
    double tol_;
    SuiteResult result_;
};

Scenario<double> require(std::string_view name, double lambda = 0.5)
{
    auto s = builtin_scenario(name, lambda);
    if (!s)
        throw InvalidArgument("missing built-in scenario " + std::string(name));
    return *s;
}

double intensity_at(const Scenario<double>& s, double theta)
{
    auto lin = std::get<LinearPhases<double>>(s.phases());
    lin.theta = theta;
    return intensity(s.with_phases(lin));
}

double v_of(const ExtremaResult<double>& e) { return visibility_traditional(e.i_max, e.i_min); }

} // namespace

int SuiteResult::passed() const
{
    return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                          [](const SuiteCheck& c) { return c.pass; }));
}

const std::vector<double>& suite_lambdas()
{
    static const std::vector<double> grid{0.1, 0.3, 0.5, 0.75, 0.9, 1.0};
    return grid;
}

SuiteResult run_paper_suite(const SuiteOptions& options)
{
    Recorder rec(options.tolerance);

    // Three-path scenario over the lambda grid.
    std::vector<double> v_pre, v_post, vc_pre, vc_post, c_pre, c_post;
    for (double lambda : suite_lambdas()) {
        const Scenario<double> s = require("bimonte3", lambda);
        const Scenario<double> bare = s.with_gram(std::nullopt);
        const ExtremaResult<double> pre = extremize(bare);
        const ExtremaResult<double> post = extremize(s);
        v_pre.push_back(v_of(pre));
        v_post.push_back(v_of(post));
        vc_pre.push_back(pre.absorbable ? visibility_new(pre, 3) : NAN);
        vc_post.push_back(post.absorbable ? visibility_new(post, 3) : NAN);
        c_pre.push_back(l1_coherence(bare.reduced_state()));
        c_post.push_back(l1_coherence(s.reduced_state()));
    }
    const auto lambdas = suite_lambdas();
    const auto series = [](const std::vector<double>& xs) {
        std::string out;
        for (double x : xs)
            out += (out.empty() ? "" : " ") + num(x);
        return out;
    };
    {
        std::vector<double> want;
        bool ok = true;
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            want.push_back(3 * lambdas[i] / (2 + lambdas[i]));
            ok = ok && rec.near(v_pre[i], want.back());
        }
        rec.add("bimonte3 V = 3l/(2+l)", series(want), series(v_pre), ok);
    }
    {
        std::vector<double> want;
        bool ok = true;
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            want.push_back(2 * lambdas[i] / 3);
            ok = ok && rec.near(v_post[i], want.back());
        }
        rec.add("bimonte3 decohered V' = 2l/3", series(want), series(v_post), ok);
    }
    {
        bool ok = true;
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            ok = ok && v_post[i] < v_pre[i] && v_pre[i] <= 1 + 1e-10 && v_post[i] <= 1 + 1e-10;
        rec.add("bimonte3 V' < V, both <= 1 (4l/3 refuted)", "true",
                ok ? "true" : "false", ok);
    }

    // Four-path maximally coherent, no detector.
    const Scenario<double> coherent = require("mw4").with_gram(std::nullopt);
    const ExtremaResult<double> ec = extremize(coherent);
    rec.add("four-path coherent I_max, I_min, V", "4 0 1",
            num(ec.i_max) + " " + num(ec.i_min) + " " + num(v_of(ec)),
            rec.near(ec.i_max, 4) && rec.near(ec.i_min, 0) && rec.near(v_of(ec), 1));

    // Ancilla-decohered four-path state.
    const ExtremaResult<double> ea = extremize(require("ancilla4"));
    const double v_ancilla = v_of(ea);
    {
        const double at_max = ea.argmax.parameter.value_or(NAN);
        const double at_min = ea.argmin.parameter.value_or(NAN);
        rec.add("ancilla4 I'_max @0, I'_min @2pi/3, V'",
                "2.5@0 0.25@" + num(2 * pi / 3) + " " + num(9.0 / 11),
                num(ea.i_max) + "@" + num(at_max) + " " + num(ea.i_min) + "@" + num(at_min) + " "
                    + num(v_ancilla),
                rec.near(ea.i_max, 2.5) && std::abs(at_max) <= 1e-6 && rec.near(ea.i_min, 0.25)
                    && std::abs(at_min - 2 * pi / 3) <= 1e-6 && rec.near(v_ancilla, 9.0 / 11));
    }

    // Pi-flip scenario.
    Scenario<double> flip = require("piflip4");
    if (options.piflip_offsets) {
        auto lin = std::get<LinearPhases<double>>(flip.phases());
        lin.offsets = *options.piflip_offsets;
        flip = flip.with_phases(lin);
    }
    {
        const double third = intensity_at(flip, pi / 3);
        const double two_thirds = intensity_at(flip, 2 * pi / 3);
        rec.add("piflip4 I(pi/3), I(2pi/3)", "1.75 0.25", num(third) + " " + num(two_thirds),
                rec.near(third, 1.75) && rec.near(two_thirds, 0.25));
    }
    const ExtremaResult<double> ef = extremize(flip);
    const double v_flip = v_of(ef);
    {
        const double at_max = ef.argmax.parameter.value_or(NAN);
        rec.add("piflip4 extrema: I_max = 7/4 @pi/3, V = 3/4",
                "1.75@" + num(pi / 3) + " 0.75",
                num(ef.i_max) + "@" + num(at_max) + " " + num(v_flip),
                rec.near(ef.i_max, 1.75) && std::abs(at_max - pi / 3) <= 1e-6
                    && rec.near(v_flip, 0.75));
    }
    rec.add("paradox V'(ancilla4) = 9/11 > V(piflip4)", "9/11 > V",
            num(v_ancilla) + " > " + num(v_flip),
            rec.near(v_ancilla, 9.0 / 11) && v_ancilla > v_flip);

    // Path detector on the coherent state.
    const Scenario<double> mw4 = require("mw4");
    const double c_mw_pre = l1_coherence(coherent.reduced_state());
    const double c_mw_post = l1_coherence(mw4.reduced_state());
    rec.add("mw4 C: 1 -> 1/2", "1 0.5", num(c_mw_pre) + " " + num(c_mw_post),
            rec.near(c_mw_pre, 1) && rec.near(c_mw_post, 0.5));

    {
        const ExtremaResult<double> em = extremize(mw4);
        const double vc_mw_pre = ec.absorbable ? visibility_new(ec, 4) : NAN;
        const double vc_mw_post = em.absorbable ? visibility_new(em, 4) : NAN;
        bool ok = rec.near(vc_mw_pre, c_mw_pre) && rec.near(vc_mw_post, c_mw_post);
        double worst = std::max(std::abs(vc_mw_pre - c_mw_pre), std::abs(vc_mw_post - c_mw_post));
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            ok = ok && rec.near(vc_pre[i], c_pre[i]) && rec.near(vc_post[i], c_post[i]);
            worst = std::max({worst, std::abs(vc_pre[i] - c_pre[i]),
                              std::abs(vc_post[i] - c_post[i])});
        }
        rec.add("V_C = C (mw4, bimonte3 grid)", "max |V_C - C| = 0",
                "max |V_C - C| = " + num(ok ? worst : NAN), ok);
    }

    {
        const PairwiseResult p = pairwise(mw4);
        const double avg = p.average.value_or(NAN);
        rec.add("mw4 pairwise average visibility", "0.5",
                num(avg) + " (reconstructed " + num(p.reconstructed) + ")",
                rec.near(avg, 0.5) && p.agree);
    }

    {
        const Analysis a = analyze(mw4);
        const auto it = std::find_if(a.duality.begin(), a.duality.end(),
                                     [](const auto& d) { return d.relation == Relation::dq_c; });
        const bool found = it != a.duality.end();
        rec.add("mw4 D_Q + C' = 1 saturated", "D_Q=0.5 lhs=1 saturated",
                found ? "D_Q=" + num(a.measures.d_q.value_or(NAN)) + " lhs=" + num(it->lhs)
                            + (it->saturated ? " saturated" : " unsaturated")
                      : "no dq_c check",
                found && it->saturated && rec.near(a.measures.d_q.value_or(NAN), 0.5));
    }

    return rec.take();
}

void print(std::ostream& out, const SuiteResult& result)
{
    for (const auto& c : result.checks) {
        out << (c.pass ? "PASS " : "FAIL ") << std::setw(2) << c.id << "  " << c.name << '\n'
            << "        expected: " << c.expected << '\n'
            << "        observed: " << c.observed << '\n';
    }
    out << result.passed() << '/' << result.checks.size() << " checks pass\n";
    if (!result.all_pass()) {
        out << "failures:";
        for (const auto& c : result.checks)
            if (!c.pass)
                out << ' ' << c.id;
        out << '\n';
    }
}

nlohmann::json to_json(const SuiteResult& result)
{
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : result.checks)
        checks.push_back({{"id", c.id},
                          {"name", c.name},
                          {"expected", c.expected},
                          {"observed", c.observed},
                          {"pass", c.pass}});
    return {{"checks", checks},
            {"passed", result.passed()},
            {"total", result.checks.size()},
            {"all_pass", result.all_pass()}};
}

} // namespace fringelab
