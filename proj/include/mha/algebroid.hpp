#pragma once

#include "mha/algebra.hpp"
#include "mha/report.hpp"

#include <functional>
#include <map>
#include <optional>

namespace mha {

// Subalgebra of A presented by a basis of elements of A. Coordinates are
// recovered through a precomputed left inverse of the inclusion.
class SubAlgebra {
public:
    SubAlgebra() = default;
    SubAlgebra(const StructureAlgebra& ambient, std::vector<Vec> basis_vectors,
               const std::string& label_prefix);

    Index dim() const { return algebra_.dim(); }
    const StructureAlgebra& algebra() const { return algebra_; }
    const Matrix& inclusion() const { return inclusion_; }

    Vec include(const Vec& sub_coords) const { return inclusion_.apply(sub_coords); }
    Vec coords(const Vec& ambient_element) const; // requires membership
    bool contains(const Vec& ambient_element) const { return span_.contains(ambient_element); }
    Vec basis_element(Index i) const { return inclusion_.column(i); }

private:
    Matrix inclusion_;     // n x m
    Matrix left_inverse_;  // m x n
    Subspace span_{0};
    StructureAlgebra algebra_;
};

// Base data of compatible left and right quantum graphs: commuting
// subalgebras B, C of M(A) = A together with mutually inverse-compatible
// anti-isomorphisms between them. S_B and S_C are stored in subalgebra
// coordinates.
struct QuantumGraphPair {
    StructureAlgebra A;
    SubAlgebra B, C;
    Matrix S_B, S_C;         // C.dim x B.dim and B.dim x C.dim
    Matrix S_B_inv, S_C_inv; // solved at construction

    static QuantumGraphPair make(StructureAlgebra A, std::vector<Vec> B_basis,
                                 std::vector<Vec> C_basis, Matrix S_B, Matrix S_C);

    // Element-level transports; defined on span(B) resp. span(C).
    Vec apply_S_B(const Vec& b_element) const;
    Vec apply_S_C(const Vec& c_element) const;
    Vec apply_S_B_inv(const Vec& c_element) const;
    Vec apply_S_C_inv(const Vec& b_element) const;

    bool verify(VerificationReport& report) const;
};

// The ten balanced tensor products of A with itself. Several tags name the
// same quotient of A(x)A once both base inclusions are identity maps; each
// tag still gets its own entry so callers can address them by name.
enum class Tensor { ool, oor, oos, oob, ooS, ooB, oot, ooc, ooT, ooC };

const char* tensor_name(Tensor t);

struct BalancedTensorVariant {
    Tensor tag;
    QuotientSpace space;
};

std::map<Tensor, BalancedTensorVariant> build_balanced_tensors(const QuantumGraphPair& g);

// A linear map between quotients of tensor powers of A, given by its value
// on ambient basis elements. The quotient-level matrix exists only when the
// lift annihilates the domain relations; `descends` reports that.
struct QuotientMap {
    Matrix matrix; // cod.dim x dom.dim
    bool descends = false;
};

QuotientMap induce_map(const QuotientSpace& dom, const QuotientSpace& cod,
                       const std::function<Vec(Index)>& lift_on_basis);

// Regular multiplier Hopf algebroid with the comultiplications represented
// through their canonical maps on balanced quotients. delta_B and delta_C
// are lifted representatives A -> A(x)A of the comultiplications; the
// canonical maps are induced from them and certified to descend.
struct HopfAlgebroid {
    QuantumGraphPair g;
    std::map<Tensor, BalancedTensorVariant> tensors;
    Matrix delta_B, delta_C; // n^2 x n lifted representatives

    Matrix T_lambda, T_rho, lT, rT;                 // quotient-level canonical maps
    Matrix T_lambda_inv, T_rho_inv, lT_inv, rT_inv; // present once bijectivity holds

    Matrix counit_B, counit_C; // B.dim x n, C.dim x n
    Matrix antipode, antipode_inv;

    // Lifted canonical maps on A(x)A, cached as matrices whose column
    // (i,j) holds the value on e_i (x) e_j:
    //   T_rho:    Delta_B(e_i)(1 (x) e_j)
    //   T_lambda: Delta_B(e_j)(e_i (x) 1)
    //   lT:       (e_i (x) 1) Delta_C(e_j)
    //   rT:       (1 (x) e_j) Delta_C(e_i)
    Matrix T_rho_lift, T_lambda_lift, lT_lift, rT_lift;

    Index dim() const { return g.A.dim(); }
    const QuotientSpace& q(Tensor t) const { return tensors.at(t).space; }
    void compute_lifts();

    Vec lift_T_rho(Index i, Index j) const { return T_rho_lift.column(i * dim() + j); }
    Vec lift_T_lambda(Index i, Index j) const { return T_lambda_lift.column(i * dim() + j); }
    Vec lift_lT(Index i, Index j) const { return lT_lift.column(i * dim() + j); }
    Vec lift_rT(Index i, Index j) const { return rT_lift.column(i * dim() + j); }

    Vec apply_antipode(const Vec& v) const { return antipode.apply(v); }
    Vec apply_counit_B(const Vec& v) const { return g.B.include(counit_B.apply(v)); }
    Vec apply_counit_C(const Vec& v) const { return g.C.include(counit_C.apply(v)); }
};

// Construction: builds balanced tensors and canonical maps from the lifted
// comultiplication data, then solves for counits and antipode. Throws on
// malformed input (dimension mismatches); mathematical failures are
// reported, not thrown.
struct AlgebroidBuildResult {
    std::optional<HopfAlgebroid> algebroid;
    VerificationReport report;
};

AlgebroidBuildResult build_hopf_algebroid(QuantumGraphPair g, Matrix delta_B, Matrix delta_C);

// Canonical maps induced on the balanced quotients, with descent checks.
struct CanonicalMaps {
    QuotientMap T_lambda, T_rho, lT, rT;
};
CanonicalMaps canonical_maps_from_comult(const QuantumGraphPair& g,
                                         const std::map<Tensor, BalancedTensorVariant>& tensors,
                                         const Matrix& delta_B, const Matrix& delta_C);

// Unique counits making the counit diagrams commute; nullopt when the
// linear system is inconsistent or the solution is not unique.
struct CounitSolution {
    Matrix counit_B, counit_C;
    bool unique = false;
};
std::optional<CounitSolution> solve_counits(const HopfAlgebroid& h);

struct AntipodeSolution {
    Matrix antipode;
    bool unique = false;
};
std::optional<AntipodeSolution> solve_antipode(const HopfAlgebroid& h);

// The full axiom battery. Every check is an exact matrix identity between
// maps of balanced quotients. Right-handed checks run the left-handed
// battery on the bi-opposite structure.
VerificationReport verify_axioms(const HopfAlgebroid& h);
void verify_axioms_into(const HopfAlgebroid& h, VerificationReport& report);

// Bi-opposite: opposite algebra, swapped bases, flipped comultiplications.
// Left-handed statements about it are the right-handed statements about h.
HopfAlgebroid bi_opposite(const HopfAlgebroid& h);

// Restriction to the counit images B0 = eps_B(A), C0 = eps_C(A). For unital
// A the counits are onto and the reduction returns the input unchanged.
struct CounitReduction {
    HopfAlgebroid algebroid;
    bool reduced = false; // true when B0 or C0 is proper
    VerificationReport report;
};
CounitReduction counit_image_reduction(const HopfAlgebroid& h);

// Star admissibility for *-structures, including the canonical-map form of
// the compatibility between the two comultiplications.
void check_star_structure(const HopfAlgebroid& h, VerificationReport& report);

} // namespace mha
