#include "ellsurf/lll.hpp"

#include <stdexcept>

namespace ellsurf {

namespace {

// Gram-based GSO: returns mu (lower triangular) and B (squared GSO norms)
// for the vectors whose pairwise Gram is G, in the given order.
void gso(const RatMat& G, std::vector<std::vector<Rat>>& mu, std::vector<Rat>& B) {
  size_t n = G.rows;
  mu.assign(n, std::vector<Rat>(n, Rat(0)));
  B.assign(n, Rat(0));
  // s[i][j] = <b_i, b_j*>
  std::vector<std::vector<Rat>> s(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j <= i; ++j) {
      Rat v = G(i, j);
      for (size_t k = 0; k < j; ++k) v -= mu[j][k] * s[i][k];
      s[i][j] = v;
      if (j < i) mu[i][j] = B[j].is_zero() ? Rat(0) : v / B[j];
    }
    B[i] = s[i][i];
  }
}

// standard exact LLL (delta = 3/4) on a positive-definite Gram; returns T with
// new = T * old
IntMat lll_posdef(RatMat G, std::vector<Rat>* gso_out) {
  size_t n = G.rows;
  IntMat T = IntMat::identity(n);
  if (n == 0) {
    if (gso_out) gso_out->clear();
    return T;
  }
  std::vector<std::vector<Rat>> mu;
  std::vector<Rat> B;
  gso(G, mu, B);
  Rat delta(3, 4);
  auto nearest = [](const Rat& x) {
    // nearest integer, ties toward zero
    Int n2 = x.num() * 2, d2 = x.den() * 2;
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
    Rat fr = x - Rat(q);
    if (fr > Rat(1, 2)) q += 1;
    return q;
  };
  auto row_op = [&](size_t i, size_t j, const Int& q) {
    // b_i -= q b_j; update T and G (row pass then column pass so the diagonal
    // picks up both contributions)
    if (q == 0) return;
    for (size_t k = 0; k < n; ++k) T(i, k) -= q * T(j, k);
    Rat rq(q);
    for (size_t k = 0; k < n; ++k) G(i, k) -= rq * G(j, k);
    for (size_t k = 0; k < n; ++k) G(k, i) -= rq * G(k, j);
  };
  size_t k = 1;
  size_t guard = 0;
  while (k < n) {
    if (++guard > 100000 * n + 10000) throw std::runtime_error("lll: iteration guard tripped");
    gso(G, mu, B);  // exact and simple; desk-scale sizes
    // size-reduce against k-1
    Int q = nearest(mu[k][k - 1]);
    row_op(k, k - 1, q);
    gso(G, mu, B);
    Rat lhs = B[k];
    Rat rhs = (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1];
    if (lhs < rhs) {
      // swap rows k, k-1
      for (size_t j = 0; j < n; ++j) std::swap(T(k, j), T(k - 1, j));
      for (size_t j = 0; j < n; ++j) std::swap(G(k, j), G(k - 1, j));
      for (size_t j = 0; j < n; ++j) std::swap(G(j, k), G(j, k - 1));
      k = k > 1 ? k - 1 : 1;
    } else {
      for (size_t l = k - 1; l-- > 0;) {
        Int q2 = nearest(mu[k][l]);
        row_op(k, l, q2);
        gso(G, mu, B);
      }
      ++k;
    }
  }
  if (gso_out) {
    gso(G, mu, B);
    *gso_out = B;
  }
  return T;
}

}  // namespace

std::vector<Rat> rat_charpoly(const RatMat& M_in) {
  size_t n = M_in.rows;
  if (M_in.cols != n) throw std::invalid_argument("rat_charpoly: not square");
  if (n == 0) return {Rat(1)};
  RatMat H = M_in;
  // reduce to upper Hessenberg by similarity transformations
  for (size_t k = 1; k + 1 < n; ++k) {
    size_t piv = k;
    while (piv < n && H(piv, k - 1).is_zero()) ++piv;
    if (piv == n) continue;
    if (piv != k) {
      for (size_t j = 0; j < n; ++j) std::swap(H(piv, j), H(k, j));
      for (size_t i = 0; i < n; ++i) std::swap(H(i, piv), H(i, k));
    }
    Rat inv = H(k, k - 1).inv();
    for (size_t i = k + 1; i < n; ++i) {
      Rat f = H(i, k - 1) * inv;
      if (f.is_zero()) continue;
      for (size_t j = 0; j < n; ++j) H(i, j) -= f * H(k, j);
      for (size_t j = 0; j < n; ++j) H(j, k) += f * H(j, i);
    }
  }
  // charpoly recurrence on the Hessenberg form
  // p_0 = 1; p_m(x) = (x - H(m-1,m-1)) p_{m-1} - sum_{i<m-1} H(i,m-1) (prod subdiag) p_i
  std::vector<std::vector<Rat>> p(n + 1);
  p[0] = {Rat(1)};
  for (size_t m = 1; m <= n; ++m) {
    // (x - H(m-1,m-1)) * p[m-1]
    std::vector<Rat> cur(p[m - 1].size() + 1, Rat(0));
    for (size_t i = 0; i < p[m - 1].size(); ++i) {
      cur[i + 1] += p[m - 1][i];
      cur[i] -= H(m - 1, m - 1) * p[m - 1][i];
    }
    Rat prod(1);
    for (size_t i = m - 1; i-- > 0;) {
      prod *= H(i + 1, i);
      Rat coef = H(i, m - 1) * prod;
      if (coef.is_zero()) continue;
      for (size_t j = 0; j < p[i].size(); ++j) cur[j] -= coef * p[i][j];
    }
    p[m] = std::move(cur);
  }
  return p[n];
}

size_t gram_rank(const RatMat& G) {
  // greedy independent prefix: O(n * rank^2) pairings
  size_t n = G.rows;
  std::vector<size_t> ind;
  std::vector<std::vector<Rat>> pmu;
  std::vector<Rat> pB;
  for (size_t v = 0; v < n; ++v) {
    size_t r = ind.size();
    std::vector<Rat> s(r), m(r);
    for (size_t j = 0; j < r; ++j) {
      Rat val = G(v, ind[j]);
      for (size_t kk = 0; kk < j; ++kk) val -= pmu[j][kk] * s[kk];
      s[j] = val;
      m[j] = pB[j].is_zero() ? Rat(0) : val / pB[j];
    }
    Rat res = G(v, v);
    for (size_t j = 0; j < r; ++j) res -= m[j] * s[j];
    if (!res.is_zero()) {
      pmu.push_back(m);
      pB.push_back(res);
      ind.push_back(v);
    }
  }
  return ind.size();
}

LllResult lll_gram(const RatMat& G) {
  size_t n = G.rows;
  if (G.cols != n) throw std::invalid_argument("lll_gram: not square");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < i; ++j)
      if (!(G(i, j) == G(j, i))) throw std::invalid_argument("lll_gram: not symmetric");

  // greedy independent prefix via GSO; express every vector over the prefix
  std::vector<size_t> ind;
  std::vector<std::vector<Rat>> coords(n);  // coords over ind
  // maintain GSO of the prefix: mu over prefix, B, and s[i][j]=<b_ind_i, b_j*>
  std::vector<std::vector<Rat>> pmu;
  std::vector<Rat> pB;
  for (size_t v = 0; v < n; ++v) {
    size_t r = ind.size();
    // compute <v, b_j*> over current prefix
    std::vector<Rat> s(r, Rat(0)), m(r, Rat(0));
    for (size_t j = 0; j < r; ++j) {
      Rat val = G(v, ind[j]);
      for (size_t kk = 0; kk < j; ++kk) val -= pmu[j][kk] * s[kk];
      s[j] = val;
      m[j] = pB[j].is_zero() ? Rat(0) : val / pB[j];
    }
    Rat res = G(v, v);
    for (size_t j = 0; j < r; ++j) res -= m[j] * s[j];
    if (!res.is_zero()) {
      pmu.push_back(m);
      pB.push_back(res);
      ind.push_back(v);
      coords[v].assign(ind.size(), Rat(0));
      coords[v].back() = Rat(1);
    } else {
      // dependent: v = sum m_j b_j* = sum c_j b_ind_j; back-substitute
      std::vector<Rat> c = m;
      for (size_t j = r; j-- > 0;)
        for (size_t kk = 0; kk < j; ++kk) c[kk] -= c[j] * pmu[j][kk];
      coords[v] = c;
    }
  }
  size_t r = ind.size();
  for (auto& c : coords) c.resize(r, Rat(0));

  // lattice generated by all rows: HNF of cleared coordinate matrix
  Int D = 1;
  for (auto& c : coords)
    for (auto& x : c) D = lcm(D, x.den());
  IntMat M(n, r);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < r; ++j) M(i, j) = coords[i][j].num() * (D / coords[i][j].den());
  HnfResult h = hnf(M);
  if (h.rank != r) throw std::runtime_error("lll_gram: internal rank mismatch");

  // Gram of the new rank-r basis rows (H/D in ind-coordinates)
  RatMat Gind(r, r);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) Gind(i, j) = G(ind[i], ind[j]);
  RatMat Gb(r, r);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) {
      Rat acc(0);
      for (size_t a = 0; a < r; ++a) {
        if (h.H(i, a) == 0) continue;
        for (size_t b = 0; b < r; ++b) {
          if (h.H(j, b) == 0) continue;
          acc += Rat(h.H(i, a)) * Rat(h.H(j, b)) * Gind(a, b);
        }
      }
      Gb(i, j) = acc / Rat(Int(D * D));
    }

  LllResult out;
  IntMat T = lll_posdef(Gb, &out.gso_norms);

  // assemble U = blockdiag(T, I) * W where W = h.U
  IntMat U(n, n);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < n; ++j) {
      Int acc = 0;
      for (size_t a = 0; a < r; ++a) acc += T(i, a) * h.U(a, j);
      U(i, j) = acc;
    }
  for (size_t i = r; i < n; ++i)
    for (size_t j = 0; j < n; ++j) U(i, j) = h.U(i, j);
  out.U = U;
  out.rank = r;
  // out.gram = U G U^T via two O(n^3) passes
  RatMat P(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t a = 0; a < n; ++a) {
      if (U(i, a) == 0) continue;
      Rat ua(U(i, a));
      for (size_t j = 0; j < n; ++j) P(i, j) += ua * G(a, j);
    }
  out.gram = RatMat(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j <= i; ++j) {
      Rat acc(0);
      for (size_t a = 0; a < n; ++a)
        if (U(j, a) != 0) acc += P(i, a) * Rat(U(j, a));
      out.gram(i, j) = acc;
      out.gram(j, i) = acc;
    }
  return out;
}

}  // namespace ellsurf
