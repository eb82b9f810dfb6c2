#pragma once

#include "mha/scalar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mha {

using Index = int;

struct LabeledSpace {
    std::vector<std::string> labels;

    LabeledSpace() = default;
    explicit LabeledSpace(std::vector<std::string> l) : labels(std::move(l)) {}
    static LabeledSpace make(Index n, const std::string& prefix);

    Index dim() const { return static_cast<Index>(labels.size()); }
    bool labels_distinct() const;
};

// Labels of a tensor product space, "a(x)b" in lexicographic pair order.
LabeledSpace tensor_space(const LabeledSpace& a, const LabeledSpace& b);

using Vec = std::vector<Scalar>;

Vec zero_vec(Index n);
Vec unit_vec(Index n, Index i);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Scalar& c, const Vec& v);
void add_scaled(Vec& target, const Scalar& c, const Vec& v);
bool is_zero(const Vec& v);
Scalar dot(const Vec& a, const Vec& b); // bilinear, no conjugation
Vec conj(const Vec& v);

struct Entry {
    Index col;
    Scalar val;
    friend bool operator==(const Entry& a, const Entry& b) {
        return a.col == b.col && a.val == b.val;
    }
};
using SparseVec = std::vector<Entry>; // strictly increasing col

SparseVec to_sparse(const Vec& v);
Vec to_dense(const SparseVec& v, Index n);

class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(Index rows, Index cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols) {}
    static Matrix identity(Index n);
    static Matrix from_columns(Index rows, const std::vector<Vec>& cols);
    static Matrix from_rows(Index cols, const std::vector<Vec>& rows);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Scalar& at(Index r, Index c) { return a_[std::size_t(r) * cols_ + c]; }
    const Scalar& at(Index r, Index c) const { return a_[std::size_t(r) * cols_ + c]; }

    Vec row(Index r) const;
    Vec column(Index c) const;
    void set_column(Index c, const Vec& v);

    Vec apply(const Vec& v) const;         // M v
    Vec apply_to_row(const Vec& row) const; // row M  (covector transport)
    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }
    Matrix transpose() const;
    bool is_zero() const;
    bool is_identity() const;

private:
    Index rows_, cols_;
    std::vector<Scalar> a_;
};

// Row space in reduced echelon form: each stored row has leading coefficient
// one at its pivot column, pivot columns are zero in every other row, and
// rows are kept sorted by pivot. Supports incremental insertion.
class Subspace {
public:
    explicit Subspace(Index ambient) : ambient_(ambient) {}

    Index ambient() const { return ambient_; }
    Index dim() const { return static_cast<Index>(rows_.size()); }

    bool insert(SparseVec v); // true if the dimension grew
    bool insert_dense(const Vec& v);

    // Canonical representative of v modulo the span (pivot coordinates
    // eliminated). Linear in v.
    Vec reduce(Vec v) const;
    void reduce_inplace(Vec& v) const;
    SparseVec reduce_sparse(const SparseVec& v) const;
    bool contains(const Vec& v) const;
    bool contains(const Subspace& other) const;
    bool same_space(const Subspace& other) const;

    const std::vector<Index>& pivots() const { return pivots_; }
    const std::vector<SparseVec>& rows() const { return rows_; }
    Matrix basis_matrix() const; // dim x ambient

private:
    Index ambient_;
    std::vector<SparseVec> rows_;  // sorted by pivot
    std::vector<Index> pivots_;
};

Subspace span_of(Index ambient, const std::vector<Vec>& vectors);

struct RrefResult {
    Index rank = 0;
    Subspace kernel;          // of v -> M v, subspace of k^cols
    Subspace image;           // column span, subspace of k^rows
    std::vector<Index> pivot_columns;
    RrefResult(Index cols, Index rows) : kernel(cols), image(rows) {}
};

RrefResult rref(const Matrix& m);
Index rank(const Matrix& m);

struct SolveResult {
    bool consistent = false;
    Vec particular;   // one solution of M v = rhs when consistent
    Subspace kernel;  // full solution set = particular + kernel
    SolveResult(Index cols) : kernel(cols) {}
};

SolveResult solve(const Matrix& m, const Vec& rhs);

// Sparse variant for large row systems: solves rows . v = rhs by
// incremental echelon insertion of augmented rows. `rank` refers to the
// coefficient part, so uniqueness is rank == vars.
struct RowSolveResult {
    bool consistent = false;
    Vec particular;
    Index rank = 0;
};
RowSolveResult solve_rows(Index vars, const std::vector<SparseVec>& rows, const Vec& rhs);
// Solves M X = RHS column by column; nullopt if any column is inconsistent.
std::optional<Matrix> solve_matrix(const Matrix& m, const Matrix& rhs);
std::optional<Matrix> inverse(const Matrix& m);

// Quotient of an ambient space by the span of relation vectors, with a
// projection and a section. The section picks the non-pivot coordinates, so
// projection . section = id and ker(projection) = relations.
class QuotientSpace {
public:
    QuotientSpace() : ambient_dim_(0), relations_(0) {}
    QuotientSpace(LabeledSpace ambient, Subspace relations);

    Index ambient_dim() const { return ambient_dim_; }
    Index dim() const { return static_cast<Index>(free_.size()); }
    const LabeledSpace& ambient_space() const { return ambient_; }
    const Subspace& relations() const { return relations_; }

    Vec project(const Vec& ambient_vector) const;  // length dim()
    Vec project_sparse(const SparseVec& ambient_vector) const;
    bool projects_to_zero(const SparseVec& ambient_vector) const;
    Vec lift(const Vec& class_vector) const;       // canonical representative
    Matrix projection_matrix() const;              // dim x ambient
    Matrix section_matrix() const;                 // ambient x dim

private:
    LabeledSpace ambient_;
    Index ambient_dim_;
    Subspace relations_;
    std::vector<Index> free_; // non-pivot coordinates, increasing
};

QuotientSpace quotient_by(const LabeledSpace& ambient, const std::vector<Vec>& relations);

} // namespace mha
