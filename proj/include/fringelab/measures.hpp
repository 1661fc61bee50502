#pragma once

// Wave-nature quantifiers: fringe contrast, the l1 coherence, the visibility measured
// against the incoherent baseline, the pairwise blocking protocol, and the
// unambiguous-discrimination distinguishability of pure quanton states.

#include <cmath>
#include <optional>
#include <string>

#include "fringelab/core_model.hpp"
#include "fringelab/interference.hpp"

namespace fringelab {

/// (I_max - I_min) / (I_max + I_min)
template <typename Real>
Real visibility_traditional(Real i_max, Real i_min)
{
    if (i_min < Real(-1e-10) || i_max < i_min - Real(1e-10))
        throw InvalidArgument("visibility needs I_max >= I_min >= 0");
    if (!(i_max + i_min > Real(0)))
        throw UndefinedMeasure("visibility undefined: I_max + I_min = 0");
    const Real v = (i_max - i_min) / (i_max + i_min);
    return std::clamp(v, Real(0), Real(1));
}

/// C = 1/(n-1) sum_{j != k} |rho_jk|
template <typename Real>
Real l1_coherence(const DensityMatrix<Real>& rho)
{
    const Eigen::Index n = rho.size();
    if (n < 2)
        throw UndefinedMeasure("coherence undefined for a single path");
    const auto& m = rho.matrix();
    Real off = 0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            if (j != k)
                off += std::abs(m(j, k));
    return off / Real(n - 1);
}

/// V_C = (I_max - I_inc) / ((n-1) I_inc)
template <typename Real>
Real visibility_new(Real i_max, Real i_inc, Eigen::Index n)
{
    if (n < 2)
        throw UndefinedMeasure("new visibility undefined for a single path");
    if (!(i_inc > Real(0)))
        throw UndefinedMeasure("new visibility needs a positive incoherent intensity");
    return (i_max - i_inc) / (Real(n - 1) * i_inc);
}

/// V_C from an extremization; refuses when the primary maximum cannot line up every
/// interference term, since I_max then no longer reflects the coherences.
template <typename Real>
Real visibility_new(const ExtremaResult<Real>& extrema, Eigen::Index n)
{
    if (!extrema.absorbable)
        throw MeasureInapplicable("phases are constrained so that not all interference terms "
                                  "can peak together; I_max does not measure coherence");
    return visibility_new(extrema.i_max, extrema.i_inc, n);
}

/// V_ij = 2 |rho_ij| / (rho_ii + rho_jj): contrast with all paths but i, j blocked.
template <typename Real>
Real two_path_visibility(const DensityMatrix<Real>& rho, PathIndex i, PathIndex j)
{
    if (i.value == j.value)
        throw InvalidArgument("two-path visibility needs two distinct paths");
    const Real weight = rho.population(i) + rho.population(j);
    if (!(weight > Real(0)))
        throw DegenerateBlock("paths " + std::to_string(i.value) + " and "
                              + std::to_string(j.value) + " carry no population");
    return Real(2) * std::abs(rho(i, j)) / weight;
}

/// 1/(n-1) sum_{pairs} (rho_ii + rho_jj) V_ij. Dark pairs contribute with weight 0.
template <typename Real>
Real pairwise_coherence(const DensityMatrix<Real>& rho)
{
    const int n = static_cast<int>(rho.size());
    if (n < 2)
        throw UndefinedMeasure("pairwise coherence undefined for a single path");
    Real sum = 0;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            const Real weight = rho.population({i}) + rho.population({j});
            if (weight > Real(0))
                sum += weight * two_path_visibility(rho, PathIndex{i}, PathIndex{j});
        }
    return sum / Real(n - 1);
}

/// Unweighted mean of V_ij over all n(n-1)/2 pairs; equals C for equal populations.
template <typename Real>
Real pairwise_average_visibility(const DensityMatrix<Real>& rho)
{
    const int n = static_cast<int>(rho.size());
    if (n < 2)
        throw UndefinedMeasure("pairwise visibility undefined for a single path");
    Real sum = 0;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            sum += two_path_visibility(rho, PathIndex{i}, PathIndex{j});
    return Real(2) * sum / Real(n * (n - 1));
}

/// D_Q = 1 - 1/(n-1) sum_{j != k} sqrt(rho_jj rho_kk) |Gamma_jk| for a pure quanton.
template <typename Real>
Real distinguishability_pure(const DensityMatrix<Real>& rho, const GramMatrix<Real>& gram)
{
    const Eigen::Index n = rho.size();
    if (gram.size() != n)
        throw InvalidArgument("Gram matrix size does not match path count");
    if (n < 2)
        throw UndefinedMeasure("distinguishability undefined for a single path");
    if (!rho.is_pure())
        throw MeasureInapplicable("distinguishability formula is defined here for pure "
                                  "quanton states only");
    const auto& m = rho.matrix();
    const auto& g = gram.matrix();
    Real sum = 0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            if (j != k)
                sum += std::sqrt(std::max(m(j, j).real() * m(k, k).real(), Real(0)))
                       * std::abs(g(j, k));
    return std::clamp(Real(1) - sum / Real(n - 1), Real(0), Real(1));
}

template <typename Real = double>
struct MeasureReport {
    Real v_traditional = 0;
    std::optional<Real> v_new;
    Real coherence = 0;
    std::optional<Real> d_q;
    bool absorbable_phases = false;
    std::string v_new_reason;  ///< why v_new is absent
    std::string d_q_reason;    ///< why d_q is absent
    ExtremaResult<Real> extrema;
};

/// Every quantifier for the scenario's reduced (decohered) state.
template <typename Real>
MeasureReport<Real> measure_report(const Scenario<Real>& s, const ExtremizeOptions& options = {})
{
    MeasureReport<Real> report;
    const DensityMatrix<Real> reduced = s.reduced_state();
    report.extrema = extremize(s, options);
    report.v_traditional = visibility_traditional(report.extrema.i_max, report.extrema.i_min);
    report.coherence = l1_coherence(reduced);
    report.absorbable_phases = report.extrema.absorbable;
    try {
        report.v_new = visibility_new(report.extrema, s.size());
    } catch (const MeasureInapplicable& e) {
        report.v_new_reason = e.what();
    }
    if (!s.gram()) {
        report.d_q_reason = "no path detector (Gram matrix) supplied";
    } else {
        try {
            report.d_q = distinguishability_pure(s.state(), *s.gram());
        } catch (const MeasureInapplicable& e) {
            report.d_q_reason = e.what();
        }
    }
    return report;
}

} // namespace fringelab
