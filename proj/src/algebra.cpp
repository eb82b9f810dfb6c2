#include "mha/algebra.hpp"

#include <stdexcept>
#include <tuple>

namespace mha {

StructureAlgebra::StructureAlgebra(LabeledSpace space, std::vector<Matrix> left_mult_tables,
                                   std::optional<Matrix> star)
    : space_(std::move(space)), left_tables_(std::move(left_mult_tables)), star_(std::move(star)) {
    if (static_cast<Index>(left_tables_.size()) != space_.dim())
        throw std::invalid_argument("StructureAlgebra: one left table per basis vector required");
    if (!space_.labels_distinct())
        throw std::invalid_argument("StructureAlgebra: duplicate basis labels");
    Index n = space_.dim();
    right_tables_.assign(n, Matrix(n, n));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index k = 0; k < n; ++k) {
                // (e_j e_i)_k lands in right table i at (k, j)
                const Scalar& c = left_tables_[j].at(k, i);
                if (!c.is_zero()) right_tables_[i].at(k, j) = c;
            }
    solve_unit();
}

StructureAlgebra StructureAlgebra::from_triples(
    LabeledSpace space, const std::vector<std::tuple<Index, Index, Index, Scalar>>& triples,
    std::optional<Matrix> star) {
    Index n = space.dim();
    std::vector<Matrix> tables(n, Matrix(n, n));
    for (const auto& [i, j, k, c] : triples) {
        if (i < 0 || i >= n || j < 0 || j >= n || k < 0 || k >= n)
            throw std::invalid_argument("StructureAlgebra: triple index out of range");
        tables[i].at(k, j) += c;
    }
    return StructureAlgebra(std::move(space), std::move(tables), std::move(star));
}

Vec StructureAlgebra::mul(const Vec& a, const Vec& b) const {
    Vec out(dim());
    for (Index i = 0; i < dim(); ++i) {
        if (a[i].is_zero()) continue;
        Vec part = left_tables_[i].apply(b);
        add_scaled(out, a[i], part);
    }
    return out;
}

Matrix StructureAlgebra::left_mult(const Vec& a) const {
    Matrix m(dim(), dim());
    for (Index i = 0; i < dim(); ++i) {
        if (a[i].is_zero()) continue;
        for (Index r = 0; r < dim(); ++r)
            for (Index c = 0; c < dim(); ++c) {
                const Scalar& v = left_tables_[i].at(r, c);
                if (!v.is_zero()) m.at(r, c) += a[i] * v;
            }
    }
    return m;
}

Matrix StructureAlgebra::right_mult(const Vec& a) const {
    Matrix m(dim(), dim());
    for (Index i = 0; i < dim(); ++i) {
        if (a[i].is_zero()) continue;
        for (Index r = 0; r < dim(); ++r)
            for (Index c = 0; c < dim(); ++c) {
                const Scalar& v = right_tables_[i].at(r, c);
                if (!v.is_zero()) m.at(r, c) += a[i] * v;
            }
    }
    return m;
}

Vec StructureAlgebra::star(const Vec& v) const {
    if (!star_) throw std::logic_error("StructureAlgebra: no star structure");
    return star_->apply(conj(v));
}

bool StructureAlgebra::is_associative() const {
    for (Index i = 0; i < dim(); ++i)
        for (Index j = 0; j < dim(); ++j) {
            Vec ij = left_tables_[i].apply(unit_vec(dim(), j));
            for (Index k = 0; k < dim(); ++k) {
                Vec lhs = mul(ij, unit_vec(dim(), k));
                Vec rhs = left_tables_[i].apply(mul(unit_vec(dim(), j), unit_vec(dim(), k)));
                if (lhs != rhs) return false;
            }
        }
    return true;
}

bool StructureAlgebra::star_is_involution() const {
    if (!star_) return false;
    for (Index i = 0; i < dim(); ++i) {
        Vec v = star(star(unit_vec(dim(), i)));
        if (v != unit_vec(dim(), i)) return false;
    }
    return true;
}

bool StructureAlgebra::star_is_antimultiplicative() const {
    if (!star_) return false;
    for (Index i = 0; i < dim(); ++i)
        for (Index j = 0; j < dim(); ++j) {
            Vec lhs = star(mul(unit_vec(dim(), i), unit_vec(dim(), j)));
            Vec rhs = mul(star(unit_vec(dim(), j)), star(unit_vec(dim(), i)));
            if (lhs != rhs) return false;
        }
    return true;
}

std::vector<std::tuple<Index, Index, Index, Scalar>> StructureAlgebra::mult_triples() const {
    std::vector<std::tuple<Index, Index, Index, Scalar>> out;
    for (Index i = 0; i < dim(); ++i)
        for (Index j = 0; j < dim(); ++j)
            for (Index k = 0; k < dim(); ++k) {
                const Scalar& c = left_tables_[i].at(k, j);
                if (!c.is_zero()) out.emplace_back(i, j, k, c);
            }
    return out;
}

void StructureAlgebra::solve_unit() {
    // u with u e_j = e_j for all j and e_j u = e_j for all j.
    Index n = dim();
    Matrix system(2 * n * n, n);
    Vec rhs(2 * n * n);
    for (Index i = 0; i < n; ++i) {
        // column i: contributions of u_i
        for (Index j = 0; j < n; ++j) {
            Vec ei_ej = left_tables_[i].apply(unit_vec(n, j)); // e_i e_j
            Vec ej_ei = mul(unit_vec(n, j), unit_vec(n, i));   // e_j e_i
            for (Index k = 0; k < n; ++k) {
                system.at(j * n + k, i) = ei_ej[k];
                system.at(n * n + j * n + k, i) = ej_ei[k];
            }
        }
    }
    for (Index j = 0; j < n; ++j) {
        rhs[j * n + j] = Scalar(1);
        rhs[n * n + j * n + j] = Scalar(1);
    }
    SolveResult s = solve(system, rhs);
    if (s.consistent) unit_ = s.particular;
}

AlgebraHealth check_algebra_health(const StructureAlgebra& A) {
    AlgebraHealth h;
    Index n = A.dim();
    // Non-degenerate: a -> La and a -> Ra injective.
    Matrix left_stack(n * n, n), right_stack(n * n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            Vec ei_ej = A.mul(unit_vec(n, i), unit_vec(n, j));
            Vec ej_ei = A.mul(unit_vec(n, j), unit_vec(n, i));
            for (Index k = 0; k < n; ++k) {
                left_stack.at(j * n + k, i) = ei_ej[k];
                right_stack.at(j * n + k, i) = ej_ei[k];
            }
        }
    }
    h.nondegenerate = rank(left_stack) == n && rank(right_stack) == n;
    // Idempotent: span of all products is everything.
    Subspace products(n);
    for (Index i = 0; i < n && products.dim() < n; ++i)
        for (Index j = 0; j < n && products.dim() < n; ++j)
            products.insert_dense(A.mul(unit_vec(n, i), unit_vec(n, j)));
    h.idempotent = products.dim() == n;
    h.unital = A.has_unit();
    h.local_units = h.unital;
    return h;
}

Functional act_left(const StructureAlgebra& A, const Vec& a, const Functional& w) {
    // (a.w)(c) = w(ca)
    return Functional(A.right_mult(a).apply_to_row(w.coeffs));
}

Functional act_right(const StructureAlgebra& A, const Functional& w, const Vec& b) {
    // (w.b)(c) = w(bc)
    return Functional(A.left_mult(b).apply_to_row(w.coeffs));
}

bool is_faithful(const StructureAlgebra& A, const Functional& w) {
    Index n = A.dim();
    Matrix left(n, n), right(n, n);
    for (Index i = 0; i < n; ++i) {
        left.set_column(i, act_left(A, unit_vec(n, i), w).coeffs);
        right.set_column(i, act_right(A, w, unit_vec(n, i)).coeffs);
    }
    return rank(left) == n && rank(right) == n;
}

std::optional<Matrix> modular_automorphism_of(const StructureAlgebra& A, const Functional& w) {
    if (!is_faithful(A, w)) throw std::invalid_argument("modular_automorphism_of: functional not faithful");
    Index n = A.dim();
    // Solve s(a).w = w.a columnwise: for each basis a, find s(a) from the
    // faithful pairing, then certify multiplicativity and invertibility.
    Matrix pairing(n, n); // column d: coefficients of d.w
    for (Index d = 0; d < n; ++d) pairing.set_column(d, act_left(A, unit_vec(n, d), w).coeffs);
    Matrix sigma(n, n);
    for (Index a = 0; a < n; ++a) {
        SolveResult s = solve(pairing, act_right(A, w, unit_vec(n, a)).coeffs);
        if (!s.consistent || s.kernel.dim() != 0) return std::nullopt;
        sigma.set_column(a, s.particular);
    }
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            Vec lhs = sigma.apply(A.mul(unit_vec(n, i), unit_vec(n, j)));
            Vec rhs = A.mul(sigma.column(i), sigma.column(j));
            if (lhs != rhs) return std::nullopt;
        }
    if (rank(sigma) != n) return std::nullopt;
    return sigma;
}

Multiplier Multiplier::from_element(const StructureAlgebra& A, const Vec& v) {
    return Multiplier{A.left_mult(v), A.right_mult(v)};
}

bool Multiplier::is_compatible(const StructureAlgebra& A) const {
    Index n = A.dim();
    for (Index i = 0; i < n; ++i) {
        Vec Ri = right_action.apply(unit_vec(n, i));
        Vec Li = left_action.apply(unit_vec(n, i));
        for (Index j = 0; j < n; ++j) {
            // R(e_i) e_j = e_i L(e_j)
            if (A.mul(Ri, unit_vec(n, j)) != A.mul(unit_vec(n, i), left_action.apply(unit_vec(n, j))))
                return false;
            // L(e_i e_j) = L(e_i) e_j and R(e_i e_j) = e_i R(e_j)
            Vec prod = A.mul(unit_vec(n, i), unit_vec(n, j));
            if (left_action.apply(prod) != A.mul(Li, unit_vec(n, j))) return false;
            if (right_action.apply(prod) != A.mul(unit_vec(n, i), right_action.apply(unit_vec(n, j))))
                return false;
        }
    }
    return true;
}

MultiplierAlgebra multiplier_algebra(const StructureAlgebra& A) {
    AlgebraHealth h = check_algebra_health(A);
    if (!h.nondegenerate || !h.idempotent)
        throw std::invalid_argument("multiplier_algebra: algebra must be non-degenerate and idempotent");
    Index n = A.dim();
    // Unknown pair (L, R) in End(A) + End(A), subject to
    //   R(a) b = a L(b),  L(ab) = L(a) b,  R(ab) = a R(b)  on basis pairs.
    Index vars = 2 * n * n; // L row-major, then R row-major
    auto Lvar = [n](Index r, Index c) { return r * n + c; };
    auto Rvar = [n](Index r, Index c) { return n * n + r * n + c; };
    std::vector<Vec> rows;
    auto new_rows = [&](Index count) {
        std::vector<Vec> block(count, Vec(vars));
        return block;
    };
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            Vec prod = A.mul(unit_vec(n, i), unit_vec(n, j));
            // R(e_i) e_j - e_i L(e_j) = 0   (n scalar rows)
            auto block = new_rows(n);
            for (Index k = 0; k < n; ++k) {
                // coefficient of R(.,i): row k of right_mult(e_j) applied to R e_i
                for (Index r = 0; r < n; ++r) {
                    Vec er_ej = A.mul(unit_vec(n, r), unit_vec(n, j));
                    block[k][Rvar(r, i)] += er_ej[k];
                    Vec ei_er = A.mul(unit_vec(n, i), unit_vec(n, r));
                    block[k][Lvar(r, j)] -= ei_er[k];
                }
            }
            for (auto& row : block) rows.push_back(std::move(row));
            // L(e_i e_j) - L(e_i) e_j = 0
            block = new_rows(n);
            for (Index k = 0; k < n; ++k) {
                for (Index r = 0; r < n; ++r) {
                    block[k][Lvar(k, r)] += prod[r];
                    Vec er_ej = A.mul(unit_vec(n, r), unit_vec(n, j));
                    block[k][Lvar(r, i)] -= er_ej[k];
                }
            }
            for (auto& row : block) rows.push_back(std::move(row));
            // R(e_i e_j) - e_i R(e_j) = 0
            block = new_rows(n);
            for (Index k = 0; k < n; ++k) {
                for (Index r = 0; r < n; ++r) {
                    block[k][Rvar(k, r)] += prod[r];
                    Vec ei_er = A.mul(unit_vec(n, i), unit_vec(n, r));
                    block[k][Rvar(r, j)] -= ei_er[k];
                }
            }
            for (auto& row : block) rows.push_back(std::move(row));
        }
    Matrix system = Matrix::from_rows(vars, rows);
    Subspace pairs = rref(system).kernel;
    Index m = pairs.dim();

    std::vector<Multiplier> basis;
    basis.reserve(m);
    for (Index b = 0; b < m; ++b) {
        Vec flat = to_dense(pairs.rows()[b], vars);
        Multiplier mult{Matrix(n, n), Matrix(n, n)};
        for (Index r = 0; r < n; ++r)
            for (Index c = 0; c < n; ++c) {
                mult.left_action.at(r, c) = flat[Lvar(r, c)];
                mult.right_action.at(r, c) = flat[Rvar(r, c)];
            }
        basis.push_back(std::move(mult));
    }

    // Structure constants: (st)_L = s_L t_L, (st)_R = t_R s_R; coordinates
    // recovered through the echelon basis of the pair space.
    Matrix coords = pairs.basis_matrix().transpose(); // vars x m
    auto to_coords = [&](const Multiplier& t) {
        Vec flat(vars);
        for (Index r = 0; r < n; ++r)
            for (Index c = 0; c < n; ++c) {
                flat[Lvar(r, c)] = t.left_action.at(r, c);
                flat[Rvar(r, c)] = t.right_action.at(r, c);
            }
        SolveResult s = solve(coords, flat);
        if (!s.consistent) throw std::logic_error("multiplier_algebra: product escapes the pair space");
        return s.particular;
    };
    std::vector<std::tuple<Index, Index, Index, Scalar>> triples;
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) {
            Multiplier prod{basis[i].left_action * basis[j].left_action,
                            basis[j].right_action * basis[i].right_action};
            Vec c = to_coords(prod);
            for (Index k = 0; k < m; ++k)
                if (!c[k].is_zero()) triples.emplace_back(i, j, k, c[k]);
        }

    MultiplierAlgebra out;
    out.algebra = StructureAlgebra::from_triples(LabeledSpace::make(m, "t"), triples);
    out.basis = std::move(basis);
    out.embedding = Matrix(m, n);
    for (Index i = 0; i < n; ++i)
        out.embedding.set_column(i, to_coords(Multiplier::from_element(A, unit_vec(n, i))));
    out.embedding_is_isomorphism = (m == n) && rank(out.embedding) == n;
    return out;
}

bool ModuleStructure::respects_multiplication(const StructureAlgebra& acting) const {
    for (Index x = 0; x < acting_dim; ++x)
        for (Index y = 0; y < acting_dim; ++y) {
            Vec xy = acting.mul(unit_vec(acting_dim, x), unit_vec(acting_dim, y));
            Matrix prod_action(carrier_dim, carrier_dim);
            for (Index k = 0; k < acting_dim; ++k)
                if (!xy[k].is_zero())
                    for (Index r = 0; r < carrier_dim; ++r)
                        for (Index c = 0; c < carrier_dim; ++c)
                            prod_action.at(r, c) += xy[k] * action[k].at(r, c);
            Matrix composed = side == Side::Left ? action[x] * action[y] : action[y] * action[x];
            if (composed != prod_action) return false;
        }
    return true;
}

} // namespace mha
