#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mha/algebra.hpp"

using namespace mha;

namespace {

StructureAlgebra functions_on_two_points() {
    // C(Z/2) with the pointwise product: e_i e_j = [i = j] e_i.
    return StructureAlgebra::from_triples(LabeledSpace::make(2, "e"),
                                          {{0, 0, 0, Scalar(1)}, {1, 1, 1, Scalar(1)}});
}

StructureAlgebra group_algebra_z2() {
    return StructureAlgebra::from_triples(LabeledSpace::make(2, "g"),
                                          {{0, 0, 0, Scalar(1)},
                                           {0, 1, 1, Scalar(1)},
                                           {1, 0, 1, Scalar(1)},
                                           {1, 1, 0, Scalar(1)}});
}

} // namespace

TEST_CASE("algebra health on the spec examples") {
    // one-dimensional idempotent algebra
    auto idem = StructureAlgebra::from_triples(LabeledSpace::make(1, "e"),
                                               {{0, 0, 0, Scalar(1)}});
    auto h = check_algebra_health(idem);
    CHECK(h.nondegenerate);
    CHECK(h.idempotent);
    CHECK(h.unital);
    CHECK(h.local_units);

    // square-zero: everything degenerate
    auto nil = StructureAlgebra::from_triples(LabeledSpace::make(1, "e"), {});
    auto h2 = check_algebra_health(nil);
    CHECK_FALSE(h2.nondegenerate);
    CHECK_FALSE(h2.idempotent);
    CHECK_FALSE(h2.unital);

    // functions on two points: unit is e_0 + e_1
    auto c2 = functions_on_two_points();
    auto h3 = check_algebra_health(c2);
    CHECK(h3.nondegenerate);
    CHECK(h3.idempotent);
    CHECK(h3.unital);
    CHECK(c2.unit() == add(unit_vec(2, 0), unit_vec(2, 1)));
    CHECK(c2.is_associative());
}

TEST_CASE("multiplier algebra") {
    auto c2 = functions_on_two_points();
    auto m = multiplier_algebra(c2);
    CHECK(m.algebra.dim() == 2);
    CHECK(m.embedding_is_isomorphism);
    for (const auto& b : m.basis) CHECK(b.is_compatible(c2));

    auto z2 = group_algebra_z2();
    auto mz = multiplier_algebra(z2);
    CHECK(mz.algebra.dim() == 2);
    CHECK(mz.embedding_is_isomorphism);

    auto nil = StructureAlgebra::from_triples(LabeledSpace::make(1, "e"), {});
    CHECK_THROWS(multiplier_algebra(nil));
}

TEST_CASE("faithful functionals") {
    auto c2 = functions_on_two_points();
    CHECK_FALSE(is_faithful(c2, Functional(Vec(2))));
    CHECK(is_faithful(c2, Functional{{Scalar(1), Scalar(1)}}));
    CHECK_FALSE(is_faithful(c2, Functional{{Scalar(1), Scalar(0)}}));
}

TEST_CASE("modular automorphisms") {
    auto c2 = functions_on_two_points();
    Functional counting{{Scalar(1), Scalar(1)}};
    auto sigma = modular_automorphism_of(c2, counting);
    REQUIRE(sigma.has_value());
    CHECK(*sigma == Matrix::identity(2));

    auto z2 = group_algebra_z2();
    Functional haar{{Scalar(1), Scalar(0)}}; // coefficient of the identity
    CHECK(is_faithful(z2, haar));
    auto sigma2 = modular_automorphism_of(z2, haar);
    REQUIRE(sigma2.has_value());
    CHECK(*sigma2 == Matrix::identity(2));

    CHECK_THROWS(modular_automorphism_of(c2, Functional(Vec(2))));
}

TEST_CASE("bimodule convention (a.w.b)(c) = w(b c a)") {
    auto z2 = group_algebra_z2();
    Functional haar{{Scalar(1), Scalar(0)}};
    Vec g = unit_vec(2, 1);
    Functional gw = act_left(z2, g, haar);   // c -> haar(c g)
    CHECK(gw(unit_vec(2, 1)) == Scalar(1));  // haar(g g) = haar(e) = 1
    CHECK(gw(unit_vec(2, 0)) == Scalar(0));
    Functional wg = act_right(z2, haar, g);  // c -> haar(g c)
    CHECK(wg(unit_vec(2, 1)) == Scalar(1));
}

TEST_CASE("star structure on a Gaussian-rational algebra") {
    auto star = Matrix::identity(2);
    auto c2 = StructureAlgebra::from_triples(
        LabeledSpace::make(2, "e"), {{0, 0, 0, Scalar(1)}, {1, 1, 1, Scalar(1)}}, star);
    CHECK(c2.star_is_involution());
    CHECK(c2.star_is_antimultiplicative());
    Vec v = {Scalar::i(), Scalar(1)};
    CHECK(c2.star(v) == Vec{-Scalar::i(), Scalar(1)});
}
