#pragma once
// Big-integer matrices with Hermite and Smith normal forms.

#include <vector>

#include "ellsurf/numeric.hpp"

namespace ellsurf {

struct IntMat {
  size_t rows = 0, cols = 0;
  std::vector<Int> a;  // row-major

  IntMat() = default;
  IntMat(size_t r, size_t c) : rows(r), cols(c), a(r * c, Int(0)) {}
  static IntMat identity(size_t n) {
    IntMat m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  Int& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  const Int& operator()(size_t i, size_t j) const { return a[i * cols + j]; }
  friend bool operator==(const IntMat& x, const IntMat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
  IntMat mul(const IntMat& o) const;
  IntMat transpose() const;
  Int det() const;  // Bareiss, square only
};

// Row-style Hermite normal form: returns H (in row echelon, pivots positive,
// entries above pivots reduced) and unimodular U with U*M = H.
struct HnfResult {
  IntMat H, U;
  size_t rank = 0;
};
HnfResult hnf(const IntMat& M);

// Smith normal form: U*M*V = D, diag d1 | d2 | ..., U,V unimodular.
struct SnfResult {
  IntMat U, D, V;
};
SnfResult snf(const IntMat& M);

}  // namespace ellsurf
