#pragma once

#include "mha/algebroid.hpp"

namespace mha {

// Pair of faithful functionals on the bases, intertwined by the base
// anti-isomorphisms and agreeing through both counits.
struct BaseWeight {
    Vec mu_B; // row over B coordinates
    Vec mu_C; // row over C coordinates
};

bool verify_base_weight(const HopfAlgebroid& h, const BaseWeight& mu, VerificationReport& report);

// Functional on A together with its four factorizations through the base
// weight: omega(x a) = mu_B(x . B_left(a)), omega(a x) = mu_B(B_right(a) x),
// omega(y a) = mu_C(y . C_left(a)), omega(a y) = mu_C(C_right(a) y).
struct AdaptedFunctional {
    Functional omega;
    Matrix B_left, B_right; // B.dim x n
    Matrix C_left, C_right; // C.dim x n
};

// Always solvable here (finite dimension, faithful base weight); the maps
// are unique and their module properties are certified.
std::optional<AdaptedFunctional> factorize(const HopfAlgebroid& h, const BaseWeight& mu,
                                           const Functional& omega);

enum class IntegralSide { Left, Right };

struct Integral {
    AdaptedFunctional f;
    IntegralSide side = IntegralSide::Left;
    bool full = false;
    bool faithful = false;
};

bool is_left_integral(const HopfAlgebroid& h, const AdaptedFunctional& f);
bool is_right_integral(const HopfAlgebroid& h, const AdaptedFunctional& f);
bool is_full(const HopfAlgebroid& h, const AdaptedFunctional& f, IntegralSide side);

// Space of all invariant functionals of the given side, inside the dual of
// A. With a full faithful integral present its dimension is dim B (left)
// or dim C (right).
Subspace integral_space(const HopfAlgebroid& h, const BaseWeight& mu, IntegralSide side);

// phi o S and phi o S^{-1} with factorizations transported through the
// antipode and cross-checked against a fresh factorization.
std::optional<Integral> antipode_transport(const HopfAlgebroid& h, const BaseWeight& mu,
                                           const Integral& integral, bool use_inverse = false);

// Left and right convolution operators of an adapted functional; for each
// basis element a of A the value is a two-sided multiplier.
struct ConvolutionOperators {
    std::vector<Multiplier> lambda; // lambda(upsilon)(e_i)
    std::vector<Multiplier> rho;    // rho(upsilon)(e_i)
    Matrix lambda_op;               // a -> lambda(upsilon)(a) as element (unital)
    Matrix rho_op;                  // a -> rho(upsilon)(a) as element
    bool two_sided = false;         // multiplier compatibility held everywhere
};

ConvolutionOperators convolution_operators(const HopfAlgebroid& h, const AdaptedFunctional& f);

struct ModularData {
    Matrix sigma_phi, sigma_phi_inv;
    Matrix sigma_psi, sigma_psi_inv;
    Vec delta, delta_dag, delta_inv; // elements of A = M(A)
    Multiplier delta_mult, delta_dag_mult;
    Matrix theta; // B.dim x B.dim, phi_B(a) -> Bphi(a)
};

struct MeasuredAlgebroid {
    HopfAlgebroid h;
    BaseWeight mu;
    Integral phi, psi;
    ModularData modular;
};

struct MeasuredBuildResult {
    std::optional<MeasuredAlgebroid> m;
    VerificationReport report;
};

// Runs the full integration battery on (h, mu, phi, psi): invariance and
// strong invariance, fullness, faithfulness, uniqueness, modular data and
// the convolution-operator identities. Populates the report and returns
// the assembled measured structure when everything needed for duality is
// in place.
MeasuredBuildResult verify_measured(const HopfAlgebroid& h, const BaseWeight& mu,
                                    const Functional& phi, const Functional& psi);

std::optional<ModularData> modular_data(const HopfAlgebroid& h, const BaseWeight& mu,
                                        const Integral& phi, const Integral& psi);

// upsilon (x)_tag omega as a functional on the balanced quotient; nullopt
// when the bilinear formula fails to annihilate the relation subspace.
std::optional<Functional> functional_tensor(const HopfAlgebroid& h, const AdaptedFunctional& u,
                                            const AdaptedFunctional& w, Tensor tag);

void check_uniqueness_theorems(const MeasuredAlgebroid& M, VerificationReport& report);

// Module action of A on its dual: (a.w)(c) = w(c a), (w.a)(c) = w(a c).
Functional dual_act_left(const StructureAlgebra& A, const Vec& a, const Functional& w);
Functional dual_act_right(const StructureAlgebra& A, const Functional& w, const Vec& a);

} // namespace mha
