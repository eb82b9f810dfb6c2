#pragma once

#include "mha/linalg.hpp"

#include <optional>
#include <vector>

namespace mha {

// Finite-dimensional associative algebra over exact scalars, given by
// structure constants e_i e_j = sum_k c[i][j][k] e_k. The optional star is a
// conjugate-linear involution stored as the matrix of v -> star(conj(v)).
class StructureAlgebra {
public:
    StructureAlgebra() = default;
    StructureAlgebra(LabeledSpace space, std::vector<Matrix> left_mult_tables,
                     std::optional<Matrix> star = std::nullopt);

    // mult[i] is the matrix of left multiplication by e_i.
    static StructureAlgebra from_triples(
        LabeledSpace space,
        const std::vector<std::tuple<Index, Index, Index, Scalar>>& triples,
        std::optional<Matrix> star = std::nullopt);

    Index dim() const { return space_.dim(); }
    const LabeledSpace& space() const { return space_; }

    Vec mul(const Vec& a, const Vec& b) const;
    Matrix left_mult(const Vec& a) const;  // b -> a b
    Matrix right_mult(const Vec& a) const; // b -> b a
    const Matrix& basis_left_mult(Index i) const { return left_tables_[i]; }
    const Matrix& basis_right_mult(Index i) const { return right_tables_[i]; }

    bool has_unit() const { return unit_.has_value(); }
    const Vec& unit() const { return *unit_; }

    bool has_star() const { return star_.has_value(); }
    Vec star(const Vec& v) const; // star_matrix * conj(v)
    const Matrix& star_matrix() const { return *star_; }

    bool is_associative() const;
    bool star_is_involution() const;      // **(v) = v
    bool star_is_antimultiplicative() const; // (ab)* = b* a*

    std::vector<std::tuple<Index, Index, Index, Scalar>> mult_triples() const;

private:
    void solve_unit();

    LabeledSpace space_;
    std::vector<Matrix> left_tables_;
    std::vector<Matrix> right_tables_;
    std::optional<Matrix> star_;
    std::optional<Vec> unit_;
};

struct AlgebraHealth {
    bool nondegenerate = false;
    bool idempotent = false;
    bool unital = false;
    // At finite dimension local units force a unit, so this mirrors
    // `unital`; kept as its own field because callers quote it separately.
    bool local_units = false;
};

AlgebraHealth check_algebra_health(const StructureAlgebra& A);

// Functional on A as a coefficient row; evaluation is bilinear.
struct Functional {
    Vec coeffs;

    Functional() = default;
    explicit Functional(Vec c) : coeffs(std::move(c)) {}
    Index dim() const { return static_cast<Index>(coeffs.size()); }
    Scalar operator()(const Vec& v) const { return dot(coeffs, v); }
};

// Bimodule actions with the fixed convention (a.w.b)(c) = w(bca):
// (a.w)(c) = w(ca) and (w.b)(c) = w(bc).
Functional act_left(const StructureAlgebra& A, const Vec& a, const Functional& w);
Functional act_right(const StructureAlgebra& A, const Functional& w, const Vec& b);

bool is_faithful(const StructureAlgebra& A, const Functional& w);

// Automorphism s with w(ab) = w(b s(a)); exists iff A.w = w.A. Certified
// multiplicative and invertible before returning.
std::optional<Matrix> modular_automorphism_of(const StructureAlgebra& A, const Functional& w);

// Multiplier of A as a compatible pair (L, R): L is left multiplication,
// R right multiplication, with R(a) b = a L(b) and the module identities
// L(ab) = L(a) b, R(ab) = a R(b).
struct Multiplier {
    Matrix left_action;
    Matrix right_action;

    static Multiplier from_element(const StructureAlgebra& A, const Vec& v);
    bool is_compatible(const StructureAlgebra& A) const;
    // For unital A a multiplier is the element L(1).
    Vec element(const StructureAlgebra& A) const { return left_action.apply(A.unit()); }
};

// The algebra of all compatible pairs, with the embedding a -> (La, Ra).
struct MultiplierAlgebra {
    StructureAlgebra algebra;          // abstract multiplier algebra
    std::vector<Multiplier> basis;     // realization of each basis element
    Matrix embedding;                  // dim M(A) x dim A, injective
    bool embedding_is_isomorphism = false;
};

MultiplierAlgebra multiplier_algebra(const StructureAlgebra& A);

// A as a one-sided module over a subalgebra image; used by the balanced
// tensor machinery. `action(x)` is the matrix of m -> x.m (left) or
// m -> m.x (right) for x running over the acting algebra's basis.
struct ModuleStructure {
    enum class Side { Left, Right };
    Side side = Side::Left;
    Index acting_dim = 0;
    Index carrier_dim = 0;
    std::vector<Matrix> action; // one carrier x carrier matrix per acting basis vector

    bool respects_multiplication(const StructureAlgebra& acting) const;
};

} // namespace mha
