#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "fringelab/errors.hpp"

namespace fringelab {

/// Wave-particle duality relations, all of the form lhs <= 1.
enum class Relation {
    englert,    ///< D^2 + V^2
    gy,         ///< P^2 + V^2
    threeslit,  ///< D_Q + 2V / (3 - V)
    dq_c,       ///< D_Q + C
    d2_c2,      ///< D^2 + C^2
    p2_c2,      ///< P^2 + C^2
};

inline constexpr std::array<Relation, 6> all_relations{Relation::englert, Relation::gy,
                                                       Relation::threeslit, Relation::dq_c,
                                                       Relation::d2_c2, Relation::p2_c2};

inline std::string_view relation_name(Relation r)
{
    switch (r) {
    case Relation::englert: return "englert";
    case Relation::gy: return "gy";
    case Relation::threeslit: return "threeslit";
    case Relation::dq_c: return "dq_c";
    case Relation::d2_c2: return "d2_c2";
    case Relation::p2_c2: return "p2_c2";
    }
    return "unknown";
}

inline std::optional<Relation> parse_relation(std::string_view name)
{
    for (Relation r : all_relations)
        if (relation_name(r) == name)
            return r;
    return std::nullopt;
}

namespace duality_tolerance {
inline constexpr double holds = 1e-10;
inline constexpr double saturated = 1e-9;
} // namespace duality_tolerance

template <typename Real = double>
struct DualityCheck {
    Relation relation;
    Real lhs;
    Real bound = 1;
    Real slack;       ///< bound - lhs
    bool holds;       ///< slack >= -1e-10
    bool saturated;   ///< |slack| < 1e-9
};

/// Evaluate one relation for a wave quantity (V or C) and a particle quantity (D, P or D_Q).
template <typename Real>
DualityCheck<Real> check(Relation relation, Real wave, Real particle)
{
    const auto in_range = [](Real x) {
        return x >= Real(-duality_tolerance::holds) && x <= Real(1 + duality_tolerance::holds);
    };
    if (!in_range(wave) || !in_range(particle))
        throw InvalidArgument("duality inputs must lie in [0, 1]");
    Real lhs = 0;
    switch (relation) {
    case Relation::englert:
    case Relation::gy:
    case Relation::d2_c2:
    case Relation::p2_c2:
        lhs = particle * particle + wave * wave;
        break;
    case Relation::dq_c:
        lhs = particle + wave;
        break;
    case Relation::threeslit:
        lhs = particle + Real(2) * wave / (Real(3) - wave);
        break;
    }
    const Real slack = Real(1) - lhs;
    return {relation, lhs, Real(1), slack, slack >= Real(-duality_tolerance::holds),
            std::abs(slack) < Real(duality_tolerance::saturated)};
}

} // namespace fringelab
