#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mha/groupoid.hpp"

#include <iostream>

using namespace mha;

namespace {

void dump_failures(const VerificationReport& r) {
    for (const auto& c : r.checks)
        if (!c.pass)
            std::cout << "FAILED " << c.name << (c.witness ? ": " + *c.witness : "") << "\n";
    if (r.stopped_at) std::cout << "stopped at " << *r.stopped_at << "\n";
}

} // namespace

TEST_CASE("trivial groupoid") {
    FiniteGroupoid G = FiniteGroupoid::cyclic_group(1);
    auto built = build_groupoid_algebroid(G);
    REQUIRE(built.algebroid.has_value());
    auto report = verify_axioms(*built.algebroid);
    dump_failures(report);
    CHECK(report.regular);
}

TEST_CASE("Z/2 as a one-unit groupoid") {
    FiniteGroupoid G = FiniteGroupoid::cyclic_group(2);
    auto built = build_groupoid_algebroid(G);
    REQUIRE(built.algebroid.has_value());
    const HopfAlgebroid& h = *built.algebroid;

    // base is trivial: every balanced product is all of A (x) A
    CHECK(h.g.B.dim() == 1);
    CHECK(h.q(Tensor::ool).dim() == 4);
    CHECK(h.q(Tensor::oos).dim() == 4);

    // Delta(d_e) = d_e (x) d_e + d_g (x) d_g; cutting the second leg with
    // d_e leaves d_e (x) d_e.
    Vec expected_delta(4);
    expected_delta[0] = Scalar(1);
    expected_delta[3] = Scalar(1);
    CHECK(h.delta_B.column(0) == expected_delta);
    Vec expected(4);
    expected[0] = Scalar(1);
    CHECK(h.lift_T_rho(0, 0) == expected);

    // the antipode is the identity and the counits evaluate at the unit
    CHECK(h.antipode == Matrix::identity(2));
    CHECK(h.counit_B.at(0, 0) == Scalar(1));
    CHECK(h.counit_B.at(0, 1) == Scalar(0));

    auto report = verify_axioms(h);
    dump_failures(report);
    CHECK(report.regular);
}

TEST_CASE("pair groupoid on two points") {
    FiniteGroupoid G = FiniteGroupoid::pair_groupoid(2);
    auto built = build_groupoid_algebroid(G);
    REQUIRE(built.algebroid.has_value());
    const HopfAlgebroid& h = *built.algebroid;
    CHECK(h.dim() == 4);
    CHECK(h.g.B.dim() == 2);
    // composable pairs: 2 * 4
    CHECK(h.q(Tensor::ool).dim() == 8);
    CHECK(rank(h.T_lambda) == 8);
    auto report = verify_axioms(h);
    dump_failures(report);
    CHECK(report.regular);
}

TEST_CASE("Z/2 groupoid measured structure") {
    FiniteGroupoid G = FiniteGroupoid::cyclic_group(2);
    auto result = build_groupoid_measure(G, UnitMeasure::uniform(1));
    dump_failures(result.report);
    REQUIRE(result.m.has_value());
    const MeasuredAlgebroid& M = *result.m;

    // phi = psi = the fibre sum; delta is the unit
    CHECK(M.phi.f.omega.coeffs == Vec{Scalar(1), Scalar(1)});
    CHECK(M.psi.f.omega.coeffs == M.phi.f.omega.coeffs);
    CHECK(M.modular.delta == M.h.g.A.unit());
    CHECK(M.modular.sigma_phi == Matrix::identity(2));

    // integral space is one-dimensional (base is trivial)
    CHECK(integral_space(M.h, M.mu, IntegralSide::Left).dim() == 1);
}

TEST_CASE("pair groupoid with non-uniform weights") {
    FiniteGroupoid G = FiniteGroupoid::pair_groupoid(2);
    UnitMeasure mu;
    mu.weights = {Scalar(1), Scalar(2)};
    auto result = build_groupoid_measure(G, mu);
    dump_failures(result.report);
    REQUIRE(result.m.has_value());
    const MeasuredAlgebroid& M = *result.m;

    // arrows are ordered a11, a22, a21 (1 -> 2), a12 (2 -> 1); delta is the
    // pointwise quotient of source and target weights.
    Index a21 = 2; // source p1, target p2
    CHECK(M.modular.delta[a21] == Scalar(1, 2));
    CHECK(integral_space(M.h, M.mu, IntegralSide::Left).dim() == 2);
    CHECK(integral_space(M.h, M.mu, IntegralSide::Right).dim() == 2);

    VerificationReport extra;
    check_uniqueness_theorems(M, extra);
    dump_failures(extra);
    CHECK(extra.all_passed());
}

TEST_CASE("counit image reduction is the identity on unital models") {
    FiniteGroupoid G = FiniteGroupoid::cyclic_group(2);
    auto built = build_groupoid_algebroid(G);
    REQUIRE(built.algebroid.has_value());
    auto red = counit_image_reduction(*built.algebroid);
    CHECK_FALSE(red.reduced);
    CHECK(red.report.regular);
}

TEST_CASE("groupoid axiom violations are rejected with the failing triple") {
    FiniteGroupoid G = FiniteGroupoid::cyclic_group(2);
    G.compose[{1, 1}] = 1; // g g = g breaks the inverse law
    CHECK_THROWS_AS(build_groupoid_algebroid(G), std::invalid_argument);
}
