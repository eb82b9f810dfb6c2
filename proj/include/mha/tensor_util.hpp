#pragma once

#include "mha/algebra.hpp"

namespace mha {

// Flat index conventions for tensor powers of an n-dimensional space:
// pair (i,j) -> i*n + j, triple (i,j,k) -> (i*n + j)*n + k.
inline Index pair_index(Index n, Index i, Index j) { return i * n + j; }

Vec kron(const Vec& a, const Vec& b);
Vec flip_tensor(Index n, const Vec& t);

// Multiply one leg of t in A(x)A by u, from the left or from the right.
Vec tensor_mul(const StructureAlgebra& A, const Vec& t, int leg, bool from_left, const Vec& u);

} // namespace mha
