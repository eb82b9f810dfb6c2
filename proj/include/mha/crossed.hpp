#pragma once

#include "mha/integration.hpp"

namespace mha {

// Finite-dimensional Hopf algebra with integrals, used as the acting
// symmetry of the two-sided crossed product.
struct FiniteHopfAlgebra {
    StructureAlgebra H;      // unital
    Matrix comult;           // dim^2 x dim
    Functional counit;
    Matrix antipode, antipode_inv;
    Functional left_integral, right_integral;
    Vec modular_element;     // delta_H with sum phi(h1) h2 = delta_H phi(h)
    Matrix sigma_phi;        // modular automorphism of the left integral
};

struct FiniteGroup {
    std::vector<std::string> elements;
    std::vector<std::vector<Index>> table; // table[i][j] = i * j
    std::vector<Index> inverse;
    Index order() const { return static_cast<Index>(elements.size()); }
    void validate() const;
    static FiniteGroup cyclic(Index n);
};

FiniteHopfAlgebra group_hopf(const FiniteGroup& G);
FiniteHopfAlgebra function_hopf(const FiniteGroup& G);
bool verify_hopf(const FiniteHopfAlgebra& H, VerificationReport& report);

// Coupled pair (B, C) with mutually inverse-compatible anti-isomorphisms
// and an H-action: right on B, left on C.
struct CoupledActionData {
    StructureAlgebra B, C;
    Matrix S_B, S_C;             // C.dim x B.dim and B.dim x C.dim
    std::vector<Matrix> right_action; // x -> x <| e_h, one B-matrix per H basis
    std::vector<Matrix> left_action;  // y -> e_h |> y, one C-matrix per H basis
    Vec mu_B, mu_C;

    Vec act_right(const Vec& x, const Vec& h) const; // x <| h
    Vec act_left(const Vec& h, const Vec& y) const;  // h |> y
};

bool verify_coupled_action(const FiniteHopfAlgebra& H, const CoupledActionData& D,
                           VerificationReport& report);

// The two-sided crossed product on C (x) H (x) B.
struct CrossedProduct {
    AlgebroidBuildResult built;
    // flat index helpers into the basis y (x) h (x) x
    Index nB = 0, nH = 0, nC = 0;
    Index flat(Index y, Index h, Index x) const { return (y * nH + h) * nB + x; }
};

CrossedProduct build_crossed_product(const FiniteHopfAlgebra& H, const CoupledActionData& D);

MeasuredBuildResult build_crossed_measure(const FiniteHopfAlgebra& H, const CoupledActionData& D);

// Closed-form dual: rank-one operators on B tensored with the dual Hopf
// algebra, compared entry by entry with the computed dual.
void verify_crossed_dual(const MeasuredAlgebroid& M, const FiniteHopfAlgebra& H,
                         const CoupledActionData& D, VerificationReport& report);

// The standard swap example: H the group algebra of Z/2 acting on the
// functions on two points, C = B.
struct SwapModel {
    FiniteHopfAlgebra H;
    CoupledActionData D;
};
SwapModel z2_swap_model();

} // namespace mha
