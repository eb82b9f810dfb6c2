#include "mha/linalg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace mha {

LabeledSpace LabeledSpace::make(Index n, const std::string& prefix) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (Index i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
    return LabeledSpace(std::move(labels));
}

bool LabeledSpace::labels_distinct() const {
    std::set<std::string> seen(labels.begin(), labels.end());
    return seen.size() == labels.size();
}

LabeledSpace tensor_space(const LabeledSpace& a, const LabeledSpace& b) {
    std::vector<std::string> labels;
    labels.reserve(std::size_t(a.dim()) * b.dim());
    for (const auto& x : a.labels)
        for (const auto& y : b.labels) labels.push_back(x + "(x)" + y);
    return LabeledSpace(std::move(labels));
}

Vec zero_vec(Index n) { return Vec(n); }

Vec unit_vec(Index n, Index i) {
    Vec v(n);
    v[i] = Scalar(1);
    return v;
}

Vec add(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

Vec scale(const Scalar& c, const Vec& v) {
    Vec r(v);
    for (auto& x : r) x *= c;
    return r;
}

void add_scaled(Vec& target, const Scalar& c, const Vec& v) {
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (!v[i].is_zero()) target[i] += c * v[i];
    }
}

bool is_zero(const Vec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

Scalar dot(const Vec& a, const Vec& b) {
    Scalar s;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
    return s;
}

Vec conj(const Vec& v) {
    Vec r(v);
    for (auto& x : r) x = x.conj();
    return r;
}

SparseVec to_sparse(const Vec& v) {
    SparseVec s;
    for (Index i = 0; i < static_cast<Index>(v.size()); ++i)
        if (!v[i].is_zero()) s.push_back({i, v[i]});
    return s;
}

Vec to_dense(const SparseVec& v, Index n) {
    Vec d(n);
    for (const auto& e : v) d[e.col] = e.val;
    return d;
}

Matrix Matrix::identity(Index n) {
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
    return m;
}

Matrix Matrix::from_columns(Index rows, const std::vector<Vec>& cols) {
    Matrix m(rows, static_cast<Index>(cols.size()));
    for (Index c = 0; c < m.cols(); ++c)
        for (Index r = 0; r < rows; ++r) m.at(r, c) = cols[c][r];
    return m;
}

Matrix Matrix::from_rows(Index cols, const std::vector<Vec>& rows) {
    Matrix m(static_cast<Index>(rows.size()), cols);
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
    return m;
}

Vec Matrix::row(Index r) const {
    Vec v(cols_);
    for (Index c = 0; c < cols_; ++c) v[c] = at(r, c);
    return v;
}

Vec Matrix::column(Index c) const {
    Vec v(rows_);
    for (Index r = 0; r < rows_; ++r) v[r] = at(r, c);
    return v;
}

void Matrix::set_column(Index c, const Vec& v) {
    for (Index r = 0; r < rows_; ++r) at(r, c) = v[r];
}

Vec Matrix::apply(const Vec& v) const {
    Vec out(rows_);
    for (Index c = 0; c < cols_; ++c) {
        if (v[c].is_zero()) continue;
        for (Index r = 0; r < rows_; ++r) {
            const Scalar& m = at(r, c);
            if (!m.is_zero()) out[r] += m * v[c];
        }
    }
    return out;
}

Vec Matrix::apply_to_row(const Vec& row) const {
    Vec out(cols_);
    for (Index r = 0; r < rows_; ++r) {
        if (row[r].is_zero()) continue;
        for (Index c = 0; c < cols_; ++c) {
            const Scalar& m = at(r, c);
            if (!m.is_zero()) out[c] += row[r] * m;
        }
    }
    return out;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
    Matrix out(rows_, o.cols_);
    for (Index r = 0; r < rows_; ++r)
        for (Index k = 0; k < cols_; ++k) {
            const Scalar& v = at(r, k);
            if (v.is_zero()) continue;
            for (Index c = 0; c < o.cols_; ++c) {
                const Scalar& w = o.at(k, c);
                if (!w.is_zero()) out.at(r, c) += v * w;
            }
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
    Matrix out(*this);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] += o.a_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& o) const {
    Matrix out(*this);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] -= o.a_[i];
    return out;
}

bool Matrix::operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (Index r = 0; r < rows_; ++r)
        for (Index c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
    return out;
}

bool Matrix::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

bool Matrix::is_identity() const {
    if (rows_ != cols_) return false;
    return *this == identity(rows_);
}

namespace {

// One-pass reduction against fully reduced echelon rows: eliminating a
// pivot coordinate only introduces free coordinates, so the pivot hits of
// the incoming vector are exactly the eliminations required.
void reduce_work(std::map<Index, Scalar>& work, const std::vector<SparseVec>& rows,
                 const std::vector<Index>& pivots) {
    std::vector<std::pair<std::size_t, Scalar>> hits;
    for (const auto& [col, val] : work) {
        auto it = std::lower_bound(pivots.begin(), pivots.end(), col);
        if (it != pivots.end() && *it == col)
            hits.emplace_back(static_cast<std::size_t>(it - pivots.begin()), val);
    }
    for (const auto& [row_idx, c] : hits) {
        for (const auto& e : rows[row_idx]) {
            auto it = work.find(e.col);
            if (it == work.end()) {
                Scalar t = c * e.val;
                if (!t.is_zero()) work.emplace(e.col, -t);
            } else {
                it->second -= c * e.val;
                if (it->second.is_zero()) work.erase(it);
            }
        }
    }
}

} // namespace

bool Subspace::insert(SparseVec v) {
    std::map<Index, Scalar> work;
    for (const auto& e : v)
        if (!e.val.is_zero()) work[e.col] = e.val;
    reduce_work(work, rows_, pivots_);
    if (work.empty()) return false;

    Index pivot = work.begin()->first;
    Scalar lead = work.begin()->second;
    SparseVec row;
    row.reserve(work.size());
    for (auto& [col, val] : work) row.push_back({col, val / lead});

    // Eliminate the new pivot from all existing rows to stay fully reduced.
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        auto it = std::lower_bound(rows_[r].begin(), rows_[r].end(), pivot,
                                   [](const Entry& e, Index c) { return e.col < c; });
        if (it == rows_[r].end() || it->col != pivot) continue;
        Scalar c = it->val;
        std::map<Index, Scalar> merged;
        for (const auto& e : rows_[r]) merged[e.col] = e.val;
        for (const auto& e : row) {
            auto w = merged.find(e.col);
            if (w == merged.end()) {
                Scalar t = c * e.val;
                if (!t.is_zero()) merged.emplace(e.col, -t);
            } else {
                w->second -= c * e.val;
                if (w->second.is_zero()) merged.erase(w);
            }
        }
        rows_[r].clear();
        for (auto& [col, val] : merged) rows_[r].push_back({col, val});
    }

    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pivot);
    std::size_t idx = static_cast<std::size_t>(pos - pivots_.begin());
    pivots_.insert(pos, pivot);
    rows_.insert(rows_.begin() + idx, std::move(row));
    return true;
}

bool Subspace::insert_dense(const Vec& v) { return insert(to_sparse(v)); }

void Subspace::reduce_inplace(Vec& v) const {
    for (std::size_t r = 0; r < pivots_.size(); ++r) {
        const Scalar& c = v[pivots_[r]];
        if (c.is_zero()) continue;
        Scalar f = c; // v[pivot] is modified inside the loop below
        for (const auto& e : rows_[r]) v[e.col] -= f * e.val;
    }
}

SparseVec Subspace::reduce_sparse(const SparseVec& v) const {
    std::map<Index, Scalar> work;
    for (const auto& e : v)
        if (!e.val.is_zero()) work[e.col] = e.val;
    reduce_work(work, rows_, pivots_);
    SparseVec out;
    out.reserve(work.size());
    for (auto& [col, val] : work) out.push_back({col, val});
    return out;
}

Vec Subspace::reduce(Vec v) const {
    reduce_inplace(v);
    return v;
}

bool Subspace::contains(const Vec& v) const { return is_zero(reduce(v)); }

bool Subspace::contains(const Subspace& other) const {
    for (const auto& row : other.rows_)
        if (!contains(to_dense(row, ambient_))) return false;
    return true;
}

bool Subspace::same_space(const Subspace& other) const {
    return dim() == other.dim() && contains(other);
}

Matrix Subspace::basis_matrix() const {
    Matrix m(dim(), ambient_);
    for (Index r = 0; r < dim(); ++r)
        for (const auto& e : rows_[r]) m.at(r, e.col) = e.val;
    return m;
}

Subspace span_of(Index ambient, const std::vector<Vec>& vectors) {
    Subspace s(ambient);
    for (const auto& v : vectors) s.insert_dense(v);
    return s;
}

RrefResult rref(const Matrix& m) {
    RrefResult out(m.cols(), m.rows());
    // Row-reduce a working copy, first-nonzero-in-column-order pivoting.
    Matrix w(m);
    std::vector<Index> pivot_cols;
    std::vector<Index> pivot_rows;
    Index r = 0;
    for (Index c = 0; c < w.cols() && r < w.rows(); ++c) {
        Index pr = -1;
        for (Index rr = r; rr < w.rows(); ++rr)
            if (!w.at(rr, c).is_zero()) {
                pr = rr;
                break;
            }
        if (pr < 0) continue;
        if (pr != r)
            for (Index cc = 0; cc < w.cols(); ++cc) std::swap(w.at(pr, cc), w.at(r, cc));
        Scalar inv = w.at(r, c).inverse();
        for (Index cc = c; cc < w.cols(); ++cc) w.at(r, cc) *= inv;
        for (Index rr = 0; rr < w.rows(); ++rr) {
            if (rr == r || w.at(rr, c).is_zero()) continue;
            Scalar f = w.at(rr, c);
            for (Index cc = c; cc < w.cols(); ++cc) w.at(rr, cc) -= f * w.at(r, cc);
        }
        pivot_cols.push_back(c);
        ++r;
    }
    out.rank = r;
    out.pivot_columns = pivot_cols;
    // Kernel: one vector per free column.
    std::vector<bool> is_pivot(m.cols(), false);
    for (Index c : pivot_cols) is_pivot[c] = true;
    for (Index f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vec v(m.cols());
        v[f] = Scalar(1);
        for (Index k = 0; k < out.rank; ++k) v[pivot_cols[k]] = -w.at(k, f);
        out.kernel.insert_dense(v);
    }
    // Image: spanned by the pivot columns of the original matrix.
    for (Index c : pivot_cols) out.image.insert_dense(m.column(c));
    return out;
}

Index rank(const Matrix& m) { return rref(m).rank; }

SolveResult solve(const Matrix& m, const Vec& rhs) {
    SolveResult out(m.cols());
    Matrix aug(m.rows(), m.cols() + 1);
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols()) = rhs[r];
    }
    RrefResult red = rref(aug);
    for (Index c : red.pivot_columns)
        if (c == m.cols()) return out; // inconsistent
    // Re-run reduction to read a particular solution off the echelon form.
    Matrix w(aug);
    std::vector<Index> pivot_cols;
    Index r = 0;
    for (Index c = 0; c < m.cols() && r < w.rows(); ++c) {
        Index pr = -1;
        for (Index rr = r; rr < w.rows(); ++rr)
            if (!w.at(rr, c).is_zero()) {
                pr = rr;
                break;
            }
        if (pr < 0) continue;
        if (pr != r)
            for (Index cc = 0; cc <= m.cols(); ++cc) std::swap(w.at(pr, cc), w.at(r, cc));
        Scalar inv = w.at(r, c).inverse();
        for (Index cc = c; cc <= m.cols(); ++cc) w.at(r, cc) *= inv;
        for (Index rr = 0; rr < w.rows(); ++rr) {
            if (rr == r || w.at(rr, c).is_zero()) continue;
            Scalar f = w.at(rr, c);
            for (Index cc = c; cc <= m.cols(); ++cc) w.at(rr, cc) -= f * w.at(r, cc);
        }
        pivot_cols.push_back(c);
        ++r;
    }
    out.consistent = true;
    out.particular = Vec(m.cols());
    for (Index k = 0; k < static_cast<Index>(pivot_cols.size()); ++k)
        out.particular[pivot_cols[k]] = w.at(k, m.cols());
    out.kernel = rref(m).kernel;
    return out;
}

RowSolveResult solve_rows(Index vars, const std::vector<SparseVec>& rows, const Vec& rhs) {
    RowSolveResult out;
    Subspace ech(vars + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        SparseVec aug = rows[r];
        if (!rhs[r].is_zero()) aug.push_back({vars, rhs[r]});
        ech.insert(std::move(aug));
    }
    Index coeff_rank = 0;
    for (Index p : ech.pivots()) {
        if (p == vars) return out; // 0 = nonzero
        ++coeff_rank;
    }
    out.consistent = true;
    out.rank = coeff_rank;
    out.particular = Vec(vars);
    // Fully reduced echelon of the augmented system: with free variables
    // set to zero, each pivot variable equals the augmented entry.
    for (std::size_t r = 0; r < ech.rows().size(); ++r) {
        Index pivot = ech.pivots()[r];
        for (const auto& e : ech.rows()[r])
            if (e.col == vars) out.particular[pivot] = e.val;
    }
    return out;
}

std::optional<Matrix> solve_matrix(const Matrix& m, const Matrix& rhs) {
    Matrix out(m.cols(), rhs.cols());
    for (Index c = 0; c < rhs.cols(); ++c) {
        SolveResult s = solve(m, rhs.column(c));
        if (!s.consistent) return std::nullopt;
        out.set_column(c, s.particular);
    }
    return out;
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    auto inv = solve_matrix(m, Matrix::identity(m.rows()));
    if (!inv) return std::nullopt;
    if (rank(m) != m.rows()) return std::nullopt;
    return inv;
}

QuotientSpace::QuotientSpace(LabeledSpace ambient, Subspace relations)
    : ambient_(std::move(ambient)), ambient_dim_(ambient_.dim()), relations_(std::move(relations)) {
    if (relations_.ambient() != ambient_dim_)
        throw std::invalid_argument("QuotientSpace: relation dimension mismatch");
    std::vector<bool> is_pivot(ambient_dim_, false);
    for (Index p : relations_.pivots()) is_pivot[p] = true;
    for (Index i = 0; i < ambient_dim_; ++i)
        if (!is_pivot[i]) free_.push_back(i);
}

Vec QuotientSpace::project_sparse(const SparseVec& ambient_vector) const {
    SparseVec red = relations_.reduce_sparse(ambient_vector);
    Vec out(dim());
    // red is supported on free coordinates; map them to class coordinates.
    for (const auto& e : red) {
        auto it = std::lower_bound(free_.begin(), free_.end(), e.col);
        out[static_cast<Index>(it - free_.begin())] = e.val;
    }
    return out;
}

bool QuotientSpace::projects_to_zero(const SparseVec& ambient_vector) const {
    return relations_.reduce_sparse(ambient_vector).empty();
}

Vec QuotientSpace::project(const Vec& ambient_vector) const {
    Vec red = relations_.reduce(ambient_vector);
    Vec out(dim());
    for (Index j = 0; j < dim(); ++j) out[j] = red[free_[j]];
    return out;
}

Vec QuotientSpace::lift(const Vec& class_vector) const {
    Vec out(ambient_dim_);
    for (Index j = 0; j < dim(); ++j) out[free_[j]] = class_vector[j];
    return out;
}

Matrix QuotientSpace::projection_matrix() const {
    Matrix p(dim(), ambient_dim_);
    for (Index i = 0; i < ambient_dim_; ++i) {
        Vec col = project(unit_vec(ambient_dim_, i));
        for (Index j = 0; j < dim(); ++j) p.at(j, i) = col[j];
    }
    return p;
}

Matrix QuotientSpace::section_matrix() const {
    Matrix s(ambient_dim_, dim());
    for (Index j = 0; j < dim(); ++j) s.at(free_[j], j) = Scalar(1);
    return s;
}

QuotientSpace quotient_by(const LabeledSpace& ambient, const std::vector<Vec>& relations) {
    for (const auto& r : relations)
        if (static_cast<Index>(r.size()) != ambient.dim())
            throw std::invalid_argument("quotient_by: relation vector has wrong dimension");
    return QuotientSpace(ambient, span_of(ambient.dim(), relations));
}

} // namespace mha
