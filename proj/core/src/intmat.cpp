#include "ellsurf/intmat.hpp"

#include <stdexcept>

namespace ellsurf {

IntMat IntMat::mul(const IntMat& o) const {
  if (cols != o.rows) throw std::invalid_argument("IntMat::mul: shape mismatch");
  IntMat r(rows, o.cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t k = 0; k < cols; ++k) {
      const Int& x = (*this)(i, k);
      if (x == 0) continue;
      for (size_t j = 0; j < o.cols; ++j) r(i, j) += x * o(k, j);
    }
  return r;
}

IntMat IntMat::transpose() const {
  IntMat r(cols, rows);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Int IntMat::det() const {
  if (rows != cols) throw std::invalid_argument("IntMat::det: not square");
  size_t n = rows;
  if (n == 0) return 1;
  IntMat m = *this;
  Int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      size_t piv = k + 1;
      while (piv < n && m(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      for (size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

HnfResult hnf(const IntMat& M) {
  HnfResult res;
  res.H = M;
  res.U = IntMat::identity(M.rows);
  IntMat& H = res.H;
  IntMat& U = res.U;
  size_t r = 0;
  for (size_t col = 0; col < M.cols && r < M.rows; ++col) {
    // eliminate below row r in this column by gcd steps
    while (true) {
      size_t piv = r;
      bool any = false;
      for (size_t i = r; i < M.rows; ++i)
        if (H(i, col) != 0) {
          if (!any || abs(H(i, col)) < abs(H(piv, col)) || H(piv, col) == 0) piv = i;
          any = true;
        }
      if (!any) break;
      if (piv != r)
        for (size_t j = 0; j < M.cols; ++j) {
          std::swap(H(piv, j), H(r, j));
        }
      if (piv != r)
        for (size_t j = 0; j < M.rows; ++j) std::swap(U(piv, j), U(r, j));
      bool clean = true;
      for (size_t i = r + 1; i < M.rows; ++i) {
        if (H(i, col) == 0) continue;
        Int q = H(i, col) / H(r, col);
        // round toward making remainder small
        if (q != 0) {
          for (size_t j = 0; j < M.cols; ++j) H(i, j) -= q * H(r, j);
          for (size_t j = 0; j < M.rows; ++j) U(i, j) -= q * U(r, j);
        }
        if (H(i, col) != 0) clean = false;
      }
      if (clean) break;
    }
    if (H(r, col) == 0) continue;
    if (H(r, col) < 0) {
      for (size_t j = 0; j < M.cols; ++j) H(r, j) = -H(r, j);
      for (size_t j = 0; j < M.rows; ++j) U(r, j) = -U(r, j);
    }
    // reduce entries above the pivot
    for (size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), H(i, col).get_mpz_t(), H(r, col).get_mpz_t());
      if (q != 0) {
        for (size_t j = 0; j < M.cols; ++j) H(i, j) -= q * H(r, j);
        for (size_t j = 0; j < M.rows; ++j) U(i, j) -= q * U(r, j);
      }
    }
    ++r;
  }
  res.rank = r;
  return res;
}

SnfResult snf(const IntMat& M) {
  SnfResult res;
  res.D = M;
  res.U = IntMat::identity(M.rows);
  res.V = IntMat::identity(M.cols);
  IntMat& D = res.D;
  IntMat& U = res.U;
  IntMat& V = res.V;
  size_t n = std::min(M.rows, M.cols);
  for (size_t k = 0; k < n; ++k) {
    // find a nonzero pivot in the remaining block
    size_t pi = k, pj = k;
    bool found = false;
    Int best = 0;
    for (size_t i = k; i < M.rows; ++i)
      for (size_t j = k; j < M.cols; ++j)
        if (D(i, j) != 0 && (!found || abs(D(i, j)) < best)) {
          found = true;
          best = abs(D(i, j));
          pi = i;
          pj = j;
        }
    if (!found) break;
    if (pi != k)
      for (size_t j = 0; j < M.cols; ++j) std::swap(D(pi, j), D(k, j));
    if (pi != k)
      for (size_t j = 0; j < M.rows; ++j) std::swap(U(pi, j), U(k, j));
    if (pj != k) {
      for (size_t i = 0; i < M.rows; ++i) std::swap(D(i, pj), D(i, k));
      for (size_t i = 0; i < M.cols; ++i) std::swap(V(i, pj), V(i, k));
    }
    bool again = true;
    while (again) {
      again = false;
      for (size_t i = k + 1; i < M.rows; ++i) {
        if (D(i, k) == 0) continue;
        Int q = D(i, k) / D(k, k);
        for (size_t j = 0; j < M.cols; ++j) D(i, j) -= q * D(k, j);
        for (size_t j = 0; j < M.rows; ++j) U(i, j) -= q * U(k, j);
        if (D(i, k) != 0) {
          // swap to bring smaller pivot up
          for (size_t j = 0; j < M.cols; ++j) std::swap(D(i, j), D(k, j));
          for (size_t j = 0; j < M.rows; ++j) std::swap(U(i, j), U(k, j));
          again = true;
        }
      }
      for (size_t j = k + 1; j < M.cols; ++j) {
        if (D(k, j) == 0) continue;
        Int q = D(k, j) / D(k, k);
        for (size_t i = 0; i < M.rows; ++i) D(i, j) -= q * D(i, k);
        for (size_t i = 0; i < M.cols; ++i) V(i, j) -= q * V(i, k);
        if (D(k, j) != 0) {
          for (size_t i = 0; i < M.rows; ++i) std::swap(D(i, j), D(i, k));
          for (size_t i = 0; i < M.cols; ++i) std::swap(V(i, j), V(i, k));
          again = true;
        }
      }
      if (!again) {
        // ensure pivot divides the rest of the block
        for (size_t i = k + 1; i < M.rows && !again; ++i)
          for (size_t j = k + 1; j < M.cols && !again; ++j)
            if (D(i, j) % D(k, k) != 0) {
              for (size_t jj = 0; jj < M.cols; ++jj) D(k, jj) += D(i, jj);
              for (size_t jj = 0; jj < M.rows; ++jj) U(k, jj) += U(i, jj);
              again = true;
            }
      }
    }
    if (D(k, k) < 0) {
      for (size_t j = 0; j < M.cols; ++j) D(k, j) = -D(k, j);
      for (size_t j = 0; j < M.rows; ++j) U(k, j) = -U(k, j);
    }
  }
  return res;
}

}  // namespace ellsurf
