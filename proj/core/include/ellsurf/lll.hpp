#pragma once
// Exact-rational LLL on a Gram matrix (no coordinates needed), delta = 3/4,
// with MLLL-style handling of dependent/zero vectors: kernel vectors are
// isolated and the positive-definite block is Lovasz-reduced.

#include <vector>

#include "ellsurf/intmat.hpp"
#include "ellsurf/numeric.hpp"

namespace ellsurf {

struct RatMat {
  size_t rows = 0, cols = 0;
  std::vector<Rat> a;
  RatMat() = default;
  RatMat(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}
  Rat& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  const Rat& operator()(size_t i, size_t j) const { return a[i * cols + j]; }
  friend bool operator==(const RatMat& x, const RatMat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

struct LllResult {
  IntMat U;        // unimodular: new basis = U * old basis
  RatMat gram;     // transformed Gram U G U^T
  size_t rank;     // rank of the form; rows [rank..n) of U span the kernel
  std::vector<Rat> gso_norms;  // |b_i*|^2 of the reduced independent block
};

// G must be symmetric positive semidefinite (checked for symmetry; PSD is the
// caller's contract).  Throws on non-symmetric input.
LllResult lll_gram(const RatMat& G);

// convenience: exact rank of a symmetric PSD rational Gram matrix
size_t gram_rank(const RatMat& G);

// characteristic polynomial of a square rational matrix (Hessenberg method),
// monic, ascending coefficients
std::vector<Rat> rat_charpoly(const RatMat& M);

}  // namespace ellsurf
