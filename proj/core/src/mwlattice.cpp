#include "ellsurf/mwlattice.hpp"

#include <map>
#include <random>

namespace ellsurf {

namespace {

// plain affine elliptic-curve arithmetic over F_q for specialized fibres
struct ECPoint {
  bool zero = true;
  FqElem x, y;
};

struct EC {
  FqElem a1, a2, a3, a4, a6;

  bool on(const ECPoint& P) const {
    if (P.zero) return true;
    FqElem lhs = P.y * P.y + a1 * P.x * P.y + a3 * P.y;
    FqElem rhs = P.x * P.x * P.x + a2 * P.x * P.x + a4 * P.x + a6;
    return lhs == rhs;
  }
  ECPoint neg(const ECPoint& P) const {
    if (P.zero) return P;
    return {false, P.x, -P.y - a1 * P.x - a3};
  }
  ECPoint add(const ECPoint& P, const ECPoint& Q) const {
    if (P.zero) return Q;
    if (Q.zero) return P;
    FqElem lam = P.x.zero(), nu = P.x.zero();
    if (!(P.x == Q.x)) {
      lam = (Q.y - P.y) / (Q.x - P.x);
      nu = (P.y * Q.x - Q.y * P.x) / (Q.x - P.x);
    } else {
      FqElem neg_y = -P.y - a1 * P.x - a3;
      if (Q.y == neg_y) return {};
      FqElem two = P.x.one() + P.x.one(), three = two + P.x.one();
      FqElem den = two * P.y + a1 * P.x + a3;
      lam = (three * P.x * P.x + two * a2 * P.x + a4 - a1 * P.y) / den;
      nu = (-(P.x * P.x * P.x) + a4 * P.x + two * a6 - a3 * P.y) / den;
    }
    FqElem x3 = lam * lam + a1 * lam - a2 - P.x - Q.x;
    FqElem y3 = -(lam + a1) * x3 - nu - a3;
    return {false, x3, y3};
  }
  ECPoint mul(ECPoint P, Int n) const {
    if (n < 0) {
      P = neg(P);
      n = -n;
    }
    ECPoint r{};
    while (n > 0) {
      if (mpz_odd_p(n.get_mpz_t())) r = add(r, P);
      P = add(P, P);
      n >>= 1;
    }
    return r;
  }
};

std::string key_of(const ECPoint& P) {
  if (P.zero) return "O";
  return P.x.str() + "|" + P.y.str();
}

// order of P given the factored group order N
Int point_order(const EC& C, const ECPoint& P, const Int& N,
                const std::vector<std::pair<Int, unsigned>>& fac) {
  Int o = N;
  for (auto& [p, e] : fac) {
    for (unsigned i = 0; i < e; ++i) {
      Int cand = o / p;
      if (C.mul(P, cand).zero)
        o = cand;
      else
        break;
    }
  }
  return o;
}

}  // namespace

SpecializationResult specialization_oracle(const WModel<FqElem>& E,
                                           const std::vector<SectionPt<FqElem>>& secs,
                                           const std::vector<FqElem>& taus) {
  SpecializationResult out;
  size_t r = secs.size();
  const FqPtr& F = E.base().F;
  std::uint64_t q = F->q_fits();
  if (q == 0 || q > 10000)
    throw std::invalid_argument("specialization_oracle: q above the BSGS bound 10^4");
  auto inv = invariants(E);
  std::vector<std::array<std::vector<Int>, 1>> dummy;
  std::vector<std::vector<Int>> conditions;  // each row: r coefficients
  std::vector<Int> moduli;

  for (auto& tau : taus) {
    if (inv.disc.eval(tau).is_zero()) {
      out.notes.push_back("tau skipped: singular specialization");
      continue;
    }
    EC C{E.a1.eval(tau), E.a2.eval(tau), E.a3.eval(tau), E.a4.eval(tau), E.a6.eval(tau)};
    // specialize sections (pole -> O)
    std::vector<ECPoint> pts;
    bool ok = true;
    for (auto& s : secs) {
      if (s.zero) {
        pts.push_back({});
        continue;
      }
      FqElem dx = s.x.den.eval(tau);
      FqElem dy = s.y.den.eval(tau);
      if (dx.is_zero() || dy.is_zero()) {
        pts.push_back({});  // reduces to the zero section
        continue;
      }
      ECPoint P{false, s.x.num.eval(tau) / dx, s.y.num.eval(tau) / dy};
      if (!C.on(P)) {
        ok = false;
        break;
      }
      pts.push_back(P);
    }
    if (!ok) {
      out.notes.push_back("tau skipped: section not specializable");
      continue;
    }
    // group order by naive point counting
    auto elems = [&] {
      std::vector<FqElem> v;
      std::vector<std::uint64_t> co(F->k, 0);
      while (true) {
        v.push_back(FqElem::make(F, co));
        size_t i = 0;
        for (; i < F->k; ++i) {
          if (++co[i] < F->p) break;
          co[i] = 0;
        }
        if (i == F->k) break;
      }
      return v;
    }();
    Int N = 1;  // the point at infinity
    FqElem half = (FqElem(F, 2)).inv();
    for (auto& x : elems) {
      // complete the square: y' = y + (a1 x + a3)/2; count y'^2 = g(x)
      FqElem g = x * x * x + C.a2 * x * x + C.a4 * x + C.a6;
      FqElem corr = (C.a1 * x + C.a3) * half;
      g = g + corr * corr;
      if (g.is_zero())
        N += 1;
      else if (fq_sqrt(g).has_value())
        N += 2;
    }
    auto fac = factor_int(N);
    std::mt19937_64 rng(rng_seed() ^ fnv1a(key_of({false, tau, tau})));
    auto random_point = [&]() -> ECPoint {
      while (true) {
        FqElem x = elems[rng() % elems.size()];
        FqElem g = x * x * x + C.a2 * x * x + C.a4 * x + C.a6;
        FqElem corr = (C.a1 * x + C.a3) * half;
        g = g + corr * corr;
        auto s = fq_sqrt(g);
        if (!s) continue;
        FqElem y = *s - corr;
        ECPoint P{false, x, y};
        if (rng() & 1) P = C.neg(P);
        return P;
      }
    };
    // exponent n1 of the group: per-prime maximal orders with witness points,
    // combined into one point of order exactly n1
    std::map<std::string, std::pair<unsigned, ECPoint>> witness;  // prime -> (exp, pt)
    Int n1 = 1;
    for (int tries = 0; tries < 80; ++tries) {
      ECPoint P = random_point();
      Int o = point_order(C, P, N, fac);
      for (auto& [p, emax] : fac) {
        unsigned e = 0;
        Int oo = o;
        while (oo % p == 0) {
          oo /= p;
          ++e;
        }
        auto& w = witness[p.get_str()];
        if (e > w.first) w = {e, P};
      }
      Int ex = 1;
      for (auto& [p, emax] : fac) {
        unsigned e = witness[p.get_str()].first;
        for (unsigned i = 0; i < e; ++i) ex *= p;
      }
      n1 = ex;
      if (n1 * n1 % N == 0 && !witness.empty()) {
        // cheap sufficiency test: n2 = N / n1 must divide n1; keep sampling a
        // few more rounds to be safe
        if (tries > 20) break;
      }
    }
    ECPoint g1{};
    for (auto& [p, emax] : fac) {
      auto& w = witness[p.get_str()];
      if (w.first == 0) continue;
      Int ppart = 1;
      for (unsigned i = 0; i < w.first; ++i) ppart *= p;
      // project the witness onto its p-primary part
      ECPoint comp = C.mul(w.second, point_order(C, w.second, N, fac) / ppart);
      g1 = C.add(g1, comp);
    }
    if (!(point_order(C, g1, N, fac) == n1)) {
      out.notes.push_back("tau skipped: exponent witness combination failed");
      continue;
    }
    Int n2 = N / n1;
    if (n2 != 0 && n1 % n2 != 0) {
      out.notes.push_back("tau skipped: undersampled group exponent");
      continue;
    }
    // complement generator via closure-size check
    ECPoint g2{};
    if (n2 > 1) {
      // subgroup <g1> as a hash set
      std::map<std::string, Int> cyc;
      ECPoint cur{};
      for (Int i = 0; i < n1; ++i) {
        cyc[key_of(cur)] = i;
        cur = C.add(cur, g1);
      }
      for (int tries = 0; tries < 400; ++tries) {
        ECPoint P = random_point();
        // P is a complement iff (n1/n2) P never lands in <g1> before n2 steps
        bool good = true;
        ECPoint acc{};
        ECPoint stepper = C.mul(P, n1 / n2);
        for (Int j = 1; j < n2; ++j) {
          acc = C.add(acc, stepper);
          if (cyc.count(key_of(acc))) {
            good = false;
            break;
          }
        }
        if (good) {
          g2 = P;
          break;
        }
      }
      if (g2.zero) {
        out.notes.push_back("tau skipped: no complement generator found");
        continue;
      }
    }
    // discrete logs by BSGS inside <g1> after peeling g2
    Int bs = isqrt(n1) + 1;
    std::map<std::string, Int> baby;
    {
      ECPoint cur{};
      for (Int i = 0; i < bs; ++i) {
        baby[key_of(cur)] = i;
        cur = C.add(cur, g1);
      }
    }
    ECPoint giant = C.neg(C.mul(g1, bs));
    auto dl_cyclic = [&](ECPoint P) -> std::optional<Int> {
      ECPoint cur = P;
      for (Int j = 0; j * bs <= n1 + bs; ++j) {
        auto it = baby.find(key_of(cur));
        if (it != baby.end()) return j * bs + it->second;
        cur = C.add(cur, giant);
      }
      return std::nullopt;
    };
    std::vector<Int> row1(r), row2(r);
    bool all_ok = true;
    for (size_t i = 0; i < r && all_ok; ++i) {
      bool done = false;
      for (Int j = 0; j < std::max(n2, Int(1)); ++j) {
        ECPoint cand = C.add(pts[i], C.neg(C.mul(g2, j)));
        auto dl = dl_cyclic(cand);
        if (dl) {
          row1[i] = *dl;
          row2[i] = j;
          done = true;
          break;
        }
      }
      if (!done) all_ok = false;
    }
    if (!all_ok) {
      out.notes.push_back("tau skipped: discrete log failed");
      continue;
    }
    conditions.push_back(row1);
    moduli.push_back(n1);
    if (n2 > 1) {
      conditions.push_back(row2);
      moduli.push_back(n2);
    }
    if (std::getenv("ELLSURF_DEBUG_SPEC")) {
      std::string line = "tau=" + tau.str() + " N=" + N.get_str() + " n1=" + n1.get_str() +
                         " n2=" + n2.get_str() + " row1=";
      for (auto& x : row1) line += x.get_str() + ",";
      if (n2 > 1) {
        line += " row2=";
        for (auto& x : row2) line += x.get_str() + ",";
      }
      out.notes.push_back(line);
    }
  }

  // kernel of Z^r -> prod Z/moduli via SNF of [D | diag(moduli)]
  size_t ncond = conditions.size();
  if (ncond == 0) {
    out.kernel = IntMat::identity(r);
    out.rank_lower_bound = 0;
    return out;
  }
  IntMat M(ncond, r + ncond);
  for (size_t i = 0; i < ncond; ++i) {
    for (size_t j = 0; j < r; ++j) M(i, j) = conditions[i][j];
    M(i, r + i) = moduli[i];
  }
  auto s = snf(M);
  // right kernel: columns of V with zero diagonal in D
  size_t rank = 0;
  for (size_t i = 0; i < std::min(M.rows, M.cols); ++i)
    if (s.D(i, i) != 0) ++rank;
  IntMat ker(M.cols - rank, r);
  for (size_t c = rank; c < M.cols; ++c)
    for (size_t j = 0; j < r; ++j) ker(c - rank, j) = s.V(j, c);
  auto h = hnf(ker);
  IntMat kr(h.rank, r);
  for (size_t i = 0; i < h.rank; ++i)
    for (size_t j = 0; j < r; ++j) kr(i, j) = h.H(i, j);
  out.kernel = kr;
  out.rank_lower_bound = r - h.rank;
  return out;
}

}  // namespace ellsurf
