#pragma once

#include "mha/integration.hpp"

#include <map>
#include <string>

namespace mha {

// Finite groupoid: units are arrows too (the id-injection is explicit in
// the arrow list). Arrows compose as functions, compose(g, h) defined when
// source(g) = target(h).
struct FiniteGroupoid {
    std::vector<std::string> units;
    std::vector<std::string> arrows; // units first, then the rest
    std::vector<Index> source, target; // arrow -> unit index
    std::vector<Index> unit_arrow;     // unit -> its identity arrow
    std::map<std::pair<Index, Index>, Index> compose; // (left, right) -> result
    std::vector<Index> inverse;

    Index arrow_count() const { return static_cast<Index>(arrows.size()); }
    bool composable(Index left, Index right) const {
        return source[left] == target[right];
    }

    // Throws std::invalid_argument naming the failing triple when the
    // groupoid axioms do not hold.
    void validate() const;

    static FiniteGroupoid cyclic_group(Index order);      // one unit
    static FiniteGroupoid pair_groupoid(Index points);    // arrows i->j
    static FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b);
};

struct UnitMeasure {
    std::vector<Scalar> weights; // per unit, must be strictly positive

    static UnitMeasure uniform(Index units);
};

// Function algebra of the groupoid with the pointwise product, bases pulled
// back along source and target, comultiplication dual to composition.
// When `with_star` is set the algebra carries pointwise conjugation.
AlgebroidBuildResult build_groupoid_algebroid(const FiniteGroupoid& G, bool with_star = false);

// Adds the weight data: phi integrates along target fibres, psi along
// source fibres, and the base weight restricts the unit-space sum.
MeasuredBuildResult build_groupoid_measure(const FiniteGroupoid& G, const UnitMeasure& mu,
                                           bool with_star = false);

// Closed-form description of the dual: convolution algebra by direct
// enumeration, with antipode twisted by the Radon-Nikodym function.
void verify_groupoid_dual(const MeasuredAlgebroid& M, const FiniteGroupoid& G,
                          const UnitMeasure& mu, VerificationReport& report);

} // namespace mha
