#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mha/linalg.hpp"

#include <random>

using namespace mha;

TEST_CASE("scalar arithmetic is exact") {
    Scalar a(1, 3), b(2, 5);
    CHECK((a + b - b) == a);
    CHECK((a * b).str() == "2/15");
    CHECK(Scalar::parse("3/2").str() == "3/2");
    CHECK(Scalar::parse("-1").str() == "-1");
    Scalar g = Scalar::parse("1/2+3/4*i");
    CHECK(g.real() == mpq_class(1, 2));
    CHECK(g.imag() == mpq_class(3, 4));
    CHECK(g.conj().str() == "1/2-3/4*i");
    CHECK((g * g.conj()).is_real());
    CHECK(Scalar::parse("-2/3*i").str() == "0-2/3*i");
    CHECK((g / g).is_one());
}

TEST_CASE("rref on the spec examples") {
    // zero 2x2: rank 0, kernel is the whole plane
    Matrix z(2, 2);
    auto rz = rref(z);
    CHECK(rz.rank == 0);
    CHECK(rz.kernel.dim() == 2);

    // identity 3x3: rank 3, kernel trivial
    auto ri = rref(Matrix::identity(3));
    CHECK(ri.rank == 3);
    CHECK(ri.kernel.dim() == 0);

    // [[1,2],[2,4]]: rank 1, kernel spanned by (-2, 1)
    Matrix m(2, 2);
    m.at(0, 0) = Scalar(1);
    m.at(0, 1) = Scalar(2);
    m.at(1, 0) = Scalar(2);
    m.at(1, 1) = Scalar(4);
    auto rm = rref(m);
    CHECK(rm.rank == 1);
    CHECK(rm.kernel.dim() == 1);
    Vec k = {Scalar(-2), Scalar(1)};
    CHECK(rm.kernel.contains(k));
    CHECK(rm.rank + rm.kernel.dim() == m.cols());
}

TEST_CASE("quotient_by on the spec examples") {
    LabeledSpace plane = LabeledSpace::make(2, "e");
    // no relations: quotient is the ambient space
    QuotientSpace q0 = quotient_by(plane, {});
    CHECK(q0.dim() == 2);
    CHECK(q0.project(unit_vec(2, 0)) == unit_vec(2, 0));

    // relation (1,-1): both basis vectors map to the same class
    QuotientSpace q1 = quotient_by(plane, {{Scalar(1), Scalar(-1)}});
    CHECK(q1.dim() == 1);
    CHECK(q1.project(unit_vec(2, 0)) == q1.project(unit_vec(2, 1)));

    // relations spanning everything: zero quotient
    QuotientSpace q2 = quotient_by(plane, {unit_vec(2, 0), unit_vec(2, 1)});
    CHECK(q2.dim() == 0);

    CHECK_THROWS(quotient_by(plane, {Vec{Scalar(1)}}));
}

TEST_CASE("solve on the spec examples") {
    // identity: unique solution
    Vec v = {Scalar(4), Scalar(-7, 3)};
    auto s = solve(Matrix::identity(2), v);
    CHECK(s.consistent);
    CHECK(s.particular == v);
    CHECK(s.kernel.dim() == 0);

    // zero map, nonzero target: empty
    auto s2 = solve(Matrix(2, 2), v);
    CHECK_FALSE(s2.consistent);

    // [[1,1]] with target (3): particular (3,0) + kernel span (1,-1)
    Matrix row(1, 2);
    row.at(0, 0) = Scalar(1);
    row.at(0, 1) = Scalar(1);
    auto s3 = solve(row, Vec{Scalar(3)});
    CHECK(s3.consistent);
    CHECK(row.apply(s3.particular) == Vec{Scalar(3)});
    CHECK(s3.kernel.dim() == 1);
    CHECK(s3.kernel.contains(Vec{Scalar(1), Scalar(-1)}));
}

namespace {
Matrix random_matrix(std::mt19937& rng, Index rows, Index cols) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m.at(r, c) = Scalar(num(rng), den(rng));
    return m;
}
} // namespace

TEST_CASE("properties on random small matrices") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 40; ++trial) {
        Index rows = 1 + trial % 5, cols = 1 + (trial * 7) % 5;
        Matrix m = random_matrix(rng, rows, cols);
        CHECK(rank(m) == rank(m.transpose()));

        // solve(m, m v) contains v
        Vec v(cols);
        std::uniform_int_distribution<int> num(-3, 3);
        for (Index c = 0; c < cols; ++c) v[c] = Scalar(num(rng));
        auto s = solve(m, m.apply(v));
        REQUIRE(s.consistent);
        CHECK(s.kernel.contains(sub(v, s.particular)));

        // quotient round trip: projection of section is the identity
        std::vector<Vec> rels;
        for (Index r = 0; r < rows; ++r) rels.push_back(m.row(r));
        QuotientSpace q = quotient_by(LabeledSpace::make(cols, "e"), rels);
        Matrix ps = q.projection_matrix() * q.section_matrix();
        CHECK(ps == Matrix::identity(q.dim()));
        // kernel of the projection is exactly the relation span
        CHECK(q.dim() == cols - span_of(cols, rels).dim());
        for (const auto& r : rels) CHECK(is_zero(q.project(r)));
    }
}
