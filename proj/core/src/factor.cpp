#include "ellsurf/factor.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "ellsurf/config.hpp"

namespace ellsurf {

namespace {

// ------- integer polynomial helpers (dense ascending) -------

void ztrim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

long zdeg(const ZPoly& f) { return static_cast<long>(f.size()) - 1; }

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

ZPoly zmod_coeffs(ZPoly f, const Int& m) {
  for (auto& x : f) {
    x %= m;
    if (x < 0) x += m;
  }
  ztrim(f);
  return f;
}

ZPoly zsym_coeffs(ZPoly f, const Int& m) {
  for (auto& x : f) x = symrep(x, m);
  ztrim(f);
  return f;
}

// divrem by monic h, coefficients mod m
void zdivrem_monic_mod(const ZPoly& a, const ZPoly& h, const Int& m, ZPoly& q, ZPoly& r) {
  r = zmod_coeffs(a, m);
  q.clear();
  if (h.empty() || h.back() != 1) throw std::domain_error("zdivrem_monic_mod: h not monic");
  long dh = zdeg(h);
  if (zdeg(r) >= dh) q.assign(r.size() - h.size() + 1, Int(0));
  while (zdeg(r) >= dh) {
    Int lead = r.back();
    size_t shift = r.size() - h.size();
    q[shift] = lead;
    for (size_t i = 0; i < h.size(); ++i) {
      r[shift + i] = (r[shift + i] - lead * h[i]) % m;
      if (r[shift + i] < 0) r[shift + i] += m;
    }
    ztrim(r);
  }
}

Int zcontent(const ZPoly& f) {
  Int g = 0;
  for (auto& x : f) g = gcd(g, x);
  return g == 0 ? Int(1) : g;
}

ZPoly zprimitive(ZPoly f) {
  Int c = zcontent(f);
  if (!f.empty() && f.back() < 0) c = -c;
  for (auto& x : f) x /= c;
  return f;
}

bool zdivides(const ZPoly& d, const ZPoly& f) {
  // exact division test over Z (d primitive, nonzero)
  if (d.empty()) return false;
  ZPoly r = f;
  ztrim(r);
  while (zdeg(r) >= zdeg(d)) {
    if (r.back() % d.back() != 0) return false;
    Int coef = r.back() / d.back();
    size_t shift = r.size() - d.size();
    for (size_t i = 0; i < d.size(); ++i) r[shift + i] -= coef * d[i];
    ztrim(r);
    if (r.empty()) return true;
  }
  return r.empty();
}

ZPoly zdiv_exact(const ZPoly& f, const ZPoly& d) {
  ZPoly r = f, q(f.size() - d.size() + 1, Int(0));
  while (zdeg(r) >= zdeg(d)) {
    Int coef = r.back() / d.back();
    size_t shift = r.size() - d.size();
    q[shift] = coef;
    for (size_t i = 0; i < d.size(); ++i) r[shift + i] -= coef * d[i];
    ztrim(r);
  }
  if (!r.empty()) throw std::domain_error("zdiv_exact: not divisible");
  ztrim(q);
  return q;
}

// ------- F_q helpers -------

FqPoly fq_x_powmod_q(const FqPoly& f, const FqPoly& x, unsigned reps) {
  // x^(q^reps) mod f via repeated Frobenius powering x -> x^q
  const FqPtr& F = f.base.F;
  Int q = 1;
  for (std::uint32_t i = 0; i < F->k; ++i) q *= Int(static_cast<unsigned long>(F->p));
  FqPoly h = x % f;
  for (unsigned i = 0; i < reps; ++i) h = poly_powmod(h, q, f);
  return h;
}

std::vector<FqPoly> equal_degree_split(const FqPoly& f, unsigned d, std::mt19937_64& rng) {
  // f = product of distinct monic irreducibles of degree d; q odd
  std::vector<FqPoly> work{f.monic()}, done;
  const FqPtr& F = f.base.F;
  Int q = 1;
  for (std::uint32_t i = 0; i < F->k; ++i) q *= Int(static_cast<unsigned long>(F->p));
  Int e = 1;
  for (unsigned i = 0; i < d; ++i) e *= q;
  e = (e - 1) / 2;
  while (!work.empty()) {
    FqPoly g = work.back();
    work.pop_back();
    if (g.deg() == static_cast<long>(d)) {
      done.push_back(g);
      continue;
    }
    // random split
    FqPoly a(f.base);
    a.c.resize(g.deg(), f.base.zero());
    for (auto& x : a.c) {
      std::vector<std::uint64_t> co(F->k);
      for (auto& y : co) y = rng() % F->p;
      x = FqElem::make(F, std::move(co));
    }
    a.normalize();
    if (a.deg() < 1) {
      work.push_back(g);  // retry with a fresh random element
      continue;
    }
    FqPoly b = poly_powmod(a, e, g);
    if (b.is_zero()) {
      work.push_back(g);
      continue;
    }
    b.c[0] -= f.base.one();
    b.normalize();
    FqPoly h = poly_gcd(b, g);
    if (h.deg() > 0 && h.deg() < g.deg()) {
      work.push_back(h);
      work.push_back(exact_div(g, h).monic());
    } else {
      work.push_back(g);
    }
  }
  return done;
}

FqPoly fq_pth_root(const FqPoly& f) {
  // f = g(x^p): recover g; coefficient a -> a^(p^(k-1))
  const FqPtr& F = f.base.F;
  std::uint64_t p = F->p;
  FqPoly g(f.base);
  g.c.resize(f.c.size() / p + 1, f.base.zero());
  for (size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    if (i % p != 0) throw std::domain_error("fq_pth_root: not a p-th power shape");
    g.c[i / p] = f.c[i].frobenius_iter(F->k - 1);
  }
  g.normalize();
  return g;
}

int fqelem_cmp_vec(const std::vector<FqElem>& a, const std::vector<FqElem>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    int c = FqElem::cmp(a[i], b[i]);
    if (c) return c;
  }
  return 0;
}

}  // namespace

int qpoly_cmp(const QPoly& a, const QPoly& b) {
  if (a.deg() != b.deg()) return a.deg() < b.deg() ? -1 : 1;
  for (size_t i = a.c.size(); i-- > 0;) {
    if (a.c[i] < b.c[i]) return -1;
    if (b.c[i] < a.c[i]) return 1;
  }
  return 0;
}

int fqpoly_cmp(const FqPoly& a, const FqPoly& b) {
  if (a.deg() != b.deg()) return a.deg() < b.deg() ? -1 : 1;
  return fqelem_cmp_vec(a.c, b.c);
}

std::vector<std::pair<FqPoly, unsigned>> squarefree_decomp(const FqPoly& f_in) {
  if (f_in.is_zero()) throw std::domain_error("zero input");
  std::vector<std::pair<FqPoly, unsigned>> out;
  FqPoly f = f_in.monic();
  if (f.deg() == 0) return out;
  FqPoly d = f.derivative();
  if (d.is_zero()) {
    for (auto& [g, e] : squarefree_decomp(fq_pth_root(f)))
      out.push_back({g, e * static_cast<unsigned>(f.base.F->p)});
    return out;
  }
  FqPoly g = poly_gcd(f, d);
  FqPoly w = exact_div(f, g).monic();
  unsigned i = 1;
  while (w.deg() > 0) {
    FqPoly y = poly_gcd(w, g);
    FqPoly z = exact_div(w, y).monic();
    if (z.deg() > 0) out.push_back({z, i});
    w = y;
    g = exact_div(g, y).monic();
    ++i;
  }
  if (g.deg() > 0) {
    for (auto& [h, e] : squarefree_decomp(fq_pth_root(g)))
      out.push_back({h, e * static_cast<unsigned>(f.base.F->p)});
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return fqpoly_cmp(a.first, b.first) < 0;
  });
  return out;
}

std::vector<std::pair<QPoly, unsigned>> squarefree_decomp(const QPoly& f_in) {
  if (f_in.is_zero()) throw std::domain_error("zero input");
  std::vector<std::pair<QPoly, unsigned>> out;
  QPoly f = f_in.monic();
  if (f.deg() == 0) return out;
  QPoly d = f.derivative();
  QPoly g = poly_gcd(f, d);
  QPoly w = exact_div(f, g).monic();
  unsigned i = 1;
  while (w.deg() > 0) {
    QPoly y = poly_gcd(w, g);
    QPoly z = exact_div(w, y).monic();
    if (z.deg() > 0) out.push_back({z, i});
    w = y;
    g = exact_div(g, y).monic();
    ++i;
  }
  return out;
}

std::vector<FqElem> fq_roots(const FqPoly& f_in) {
  if (f_in.is_zero()) throw std::domain_error("zero input");
  FqPoly f = f_in.monic();
  // strip multiplicities
  FqPoly d = f.derivative();
  if (!d.is_zero()) {
    FqPoly g = poly_gcd(f, d);
    if (g.deg() > 0) f = exact_div(f, g).monic();
  }
  FqPoly x = FqPoly::x(f.base);
  FqPoly xq = fq_x_powmod_q(f, x, 1);
  FqPoly lin = poly_gcd(xq - x, f);
  std::vector<FqElem> roots;
  if (lin.deg() <= 0) return roots;
  std::mt19937_64 rng(rng_seed() ^ 0x900d5);
  for (auto& fac : equal_degree_split(lin, 1, rng)) roots.push_back(-fac.c[0]);
  std::sort(roots.begin(), roots.end(), [](const FqElem& a, const FqElem& b) {
    return FqElem::cmp(a, b) < 0;
  });
  return roots;
}

std::vector<std::pair<FqPoly, unsigned>> factor_fq(const FqPoly& f) {
  if (f.is_zero()) throw std::domain_error("zero input");
  std::vector<std::pair<FqPoly, unsigned>> out;
  std::mt19937_64 rng(rng_seed() ^ 0xfac70af9);
  for (auto& [sf, mult] : squarefree_decomp(f)) {
    // distinct degree
    FqPoly rem = sf;
    FqPoly x = FqPoly::x(f.base);
    FqPoly h = x % rem;
    unsigned d = 0;
    std::vector<std::pair<FqPoly, unsigned>> parts;  // (product, degree)
    while (rem.deg() > 0 && rem.deg() > 2 * static_cast<long>(d)) {
      ++d;
      h = fq_x_powmod_q(rem, h, 1);
      FqPoly g = poly_gcd(h - x, rem);
      if (g.deg() > 0) {
        parts.push_back({g, d});
        rem = exact_div(rem, g).monic();
        h = h % rem;
      }
    }
    if (rem.deg() > 0) parts.push_back({rem, static_cast<unsigned>(rem.deg())});
    for (auto& [prod, dd] : parts) {
      if (prod.deg() == static_cast<long>(dd)) {
        out.push_back({prod.monic(), mult});
      } else {
        for (auto& irr : equal_degree_split(prod, dd, rng)) out.push_back({irr, mult});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) {
    int c = fqpoly_cmp(a.first, b.first);
    if (c) return c < 0;
    return a.second < b.second;
  });
  return out;
}

bool fq_irreducible_poly(const FqPoly& f) {
  if (f.deg() < 1) return false;
  auto fs = factor_fq(f);
  return fs.size() == 1 && fs[0].second == 1 && fs[0].first.deg() == f.deg();
}

// ------- cyclotomic -------

QPoly cyclotomic(unsigned long n) {
  static std::map<unsigned long, QPoly> memo;
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  Rat one(1);
  QPoly xn1(one);
  xn1.c.assign(n + 1, Rat(0));
  xn1.c[0] = Rat(-1);
  xn1.c[n] = Rat(1);
  QPoly r = xn1;
  for (unsigned long d = 1; d < n; ++d)
    if (n % d == 0) r = exact_div(r, cyclotomic(d));
  memo[n] = r;
  return r;
}

// ------- Hensel lifting -------

namespace {

// one quadratic step: f = g*h mod m, s*g + t*h = 1 mod m, h monic ->
// same data mod m^2
void hensel_step(const ZPoly& f, ZPoly& g, ZPoly& h, ZPoly& s, ZPoly& t, const Int& m) {
  Int m2 = m * m;
  ZPoly e = zmod_coeffs(f, m2);
  {
    ZPoly gh = zmul(g, h);
    if (e.size() < gh.size()) e.resize(gh.size(), Int(0));
    for (size_t i = 0; i < gh.size(); ++i) e[i] = (e[i] - gh[i]) % m2;
    e = zmod_coeffs(e, m2);
  }
  ZPoly q, r;
  zdivrem_monic_mod(zmul(s, e), h, m2, q, r);
  ZPoly g1 = g;
  {
    ZPoly te = zmul(t, e), qg = zmul(q, g);
    size_t len = std::max({g1.size(), te.size(), qg.size()});
    g1.resize(len, Int(0));
    for (size_t i = 0; i < te.size(); ++i) g1[i] += te[i];
    for (size_t i = 0; i < qg.size(); ++i) g1[i] += qg[i];
    g1 = zmod_coeffs(g1, m2);
  }
  ZPoly h1 = h;
  {
    size_t len = std::max(h1.size(), r.size());
    h1.resize(len, Int(0));
    for (size_t i = 0; i < r.size(); ++i) h1[i] += r[i];
    h1 = zmod_coeffs(h1, m2);
  }
  // lift Bezout data
  ZPoly b;
  {
    ZPoly sg = zmul(s, g1), th = zmul(t, h1);
    size_t len = std::max(sg.size(), th.size());
    b.assign(len, Int(0));
    for (size_t i = 0; i < sg.size(); ++i) b[i] += sg[i];
    for (size_t i = 0; i < th.size(); ++i) b[i] += th[i];
    if (b.empty()) b.push_back(Int(-1)); else b[0] -= 1;
    b = zmod_coeffs(b, m2);
  }
  ZPoly c, d;
  zdivrem_monic_mod(zmul(s, b), h1, m2, c, d);
  ZPoly s1 = s;
  {
    size_t len = std::max(s1.size(), d.size());
    s1.resize(len, Int(0));
    for (size_t i = 0; i < d.size(); ++i) s1[i] -= d[i];
    s1 = zmod_coeffs(s1, m2);
  }
  ZPoly t1 = t;
  {
    ZPoly tb = zmul(t, b), cg = zmul(c, g1);
    size_t len = std::max({t1.size(), tb.size(), cg.size()});
    t1.resize(len, Int(0));
    for (size_t i = 0; i < tb.size(); ++i) t1[i] -= tb[i];
    for (size_t i = 0; i < cg.size(); ++i) t1[i] -= cg[i];
    t1 = zmod_coeffs(t1, m2);
  }
  g = g1; h = h1; s = s1; t = t1;
}

// xgcd over Z/p for polynomials (p prime): returns g,u,v with u*a+v*b=g
void zp_xgcd(const ZPoly& a, const ZPoly& b, const Int& p, ZPoly& g, ZPoly& u, ZPoly& v) {
  ZPoly r0 = zmod_coeffs(a, p), r1 = zmod_coeffs(b, p);
  ZPoly s0{Int(1)}, s1, t0, t1{Int(1)};
  while (!r1.empty()) {
    // divide r0 by r1 mod p
    ZPoly q;
    ZPoly rem = r0;
    Int li = invmod(r1.back(), p);
    if (zdeg(rem) >= zdeg(r1)) q.assign(rem.size() - r1.size() + 1, Int(0));
    while (zdeg(rem) >= zdeg(r1)) {
      Int coef = rem.back() * li % p;
      size_t shift = rem.size() - r1.size();
      q[shift] = coef;
      for (size_t i = 0; i < r1.size(); ++i) {
        rem[shift + i] = (rem[shift + i] - coef * r1[i]) % p;
        if (rem[shift + i] < 0) rem[shift + i] += p;
      }
      ztrim(rem);
    }
    ztrim(q);
    auto comb = [&](const ZPoly& x0, const ZPoly& x1) {
      ZPoly qx = zmul(q, x1);
      ZPoly x2 = x0;
      if (x2.size() < qx.size()) x2.resize(qx.size(), Int(0));
      for (size_t i = 0; i < qx.size(); ++i) x2[i] -= qx[i];
      return zmod_coeffs(x2, p);
    };
    ZPoly s2 = comb(s0, s1), t2 = comb(t0, t1);
    r0 = r1; r1 = rem;
    s0 = s1; s1 = s2;
    t0 = t1; t1 = t2;
  }
  g = r0; u = s0; v = t0;
}

// recursive multifactor lifting of monic f = prod(monic factors) mod p to mod p^(2^rounds)
void hensel_tree(const ZPoly& f, std::vector<ZPoly>& facs, size_t lo, size_t hi, const Int& p,
                 unsigned rounds) {
  if (hi - lo <= 1) {
    facs[lo] = zmod_coeffs(f, [&] {
      Int m = p;
      for (unsigned i = 0; i < rounds; ++i) m *= m;
      return m;
    }());
    return;
  }
  size_t mid = lo + (hi - lo) / 2;
  ZPoly g{Int(1)}, h{Int(1)};
  for (size_t i = lo; i < mid; ++i) g = zmod_coeffs(zmul(g, facs[i]), p);
  for (size_t i = mid; i < hi; ++i) h = zmod_coeffs(zmul(h, facs[i]), p);
  ZPoly gg, s, t;
  zp_xgcd(g, h, p, gg, s, t);
  if (zdeg(gg) != 0) throw std::domain_error("hensel: factors not coprime");
  Int c = invmod(gg[0], p);
  for (auto& x : s) x = x * c % p;
  for (auto& x : t) x = x * c % p;
  Int m = p;
  for (unsigned i = 0; i < rounds; ++i) {
    hensel_step(f, g, h, s, t, m);
    m *= m;
  }
  hensel_tree(g, facs, lo, mid, p, rounds);
  hensel_tree(h, facs, mid, hi, p, rounds);
}

}  // namespace

std::vector<ZPoly> hensel_lift(const ZPoly& f_in, const std::vector<ZPoly>& factors_mod_p,
                               const Int& p, unsigned B) {
  ZPoly f = f_in;
  ztrim(f);
  if (f.empty()) throw std::domain_error("zero input");
  if (gcd(f.back(), p) != 1) throw std::domain_error("hensel: lc not a unit mod p");
  // verify inputs coprime & product matches mod p
  {
    ZPoly prod{f.back() % p};
    for (auto& g : factors_mod_p) prod = zmod_coeffs(zmul(prod, g), p);
    ZPoly fp = zmod_coeffs(f, p);
    if (prod != fp) throw std::domain_error("hensel: factors do not multiply to f mod p");
    for (size_t i = 0; i < factors_mod_p.size(); ++i)
      for (size_t j = i + 1; j < factors_mod_p.size(); ++j) {
        ZPoly g, u, v;
        zp_xgcd(factors_mod_p[i], factors_mod_p[j], p, g, u, v);
        if (zdeg(g) != 0) throw std::domain_error("hensel: factors not coprime");
      }
  }
  if (B <= 1 || factors_mod_p.empty()) return factors_mod_p;
  unsigned rounds = 0;
  {
    Int m = p;
    while (true) {
      Int target = 1;
      bool ok = true;
      for (unsigned i = 0; i < B; ++i) {
        target *= p;
        if (target > m) { ok = false; break; }
      }
      if (ok) break;
      m *= m;
      ++rounds;
    }
  }
  // lift the monic factorization of f/lc: normalize f monic mod p^(2^rounds)
  Int m = p;
  for (unsigned i = 0; i < rounds; ++i) m *= m;
  Int lcinv = invmod(f.back() % m, m);
  ZPoly fm = f;
  for (auto& x : fm) x = x * lcinv % m;
  fm = zmod_coeffs(fm, m);
  std::vector<ZPoly> facs = factors_mod_p;
  for (auto& g : facs) {
    g = zmod_coeffs(g, p);
    Int li = invmod(g.back(), p);
    for (auto& x : g) x = x * li % p;
  }
  hensel_tree(fm, facs, 0, facs.size(), p, rounds);
  // reduce to exactly p^B
  Int pb = 1;
  for (unsigned i = 0; i < B; ++i) pb *= p;
  for (auto& g : facs) g = zmod_coeffs(g, pb);
  return facs;
}

// ------- Zassenhaus over Q -------

namespace {

constexpr unsigned kMaxModularFactors = 20;

FqPoly zpoly_to_fq(const ZPoly& f, const FqPtr& F) {
  FqPoly r(FqElem(F, 0));
  r.c.reserve(f.size());
  for (auto& x : f) {
    Int v = x % Int(static_cast<unsigned long>(F->p));
    if (v < 0) v += Int(static_cast<unsigned long>(F->p));
    r.c.push_back(FqElem(F, v.get_ui()));
  }
  r.normalize();
  return r;
}

// factor a primitive squarefree integer polynomial
std::vector<ZPoly> zassenhaus_squarefree(const ZPoly& G) {
  long n = zdeg(G);
  if (n == 1) return {zprimitive(G)};
  // choose a prime with few modular factors
  Int lc = G.back();
  std::vector<std::uint64_t> cand;
  for (std::uint64_t p : primes_up_to(400))
    if (p >= 5) cand.push_back(p);
  struct Choice {
    std::uint64_t p = 0;
    std::vector<ZPoly> facs;
  } best;
  int examined = 0;
  for (std::uint64_t p : cand) {
    if (lc % Int(static_cast<unsigned long>(p)) == 0) continue;
    auto F = fq_field(p);
    FqPoly gp = zpoly_to_fq(G, F);
    if (gp.deg() != n) continue;
    FqPoly d = gp.derivative();
    if (d.is_zero() || poly_gcd(gp, d).deg() != 0) continue;  // not squarefree mod p
    auto facs = factor_fq(gp);
    std::vector<ZPoly> zf;
    for (auto& [fac, mult] : facs) {
      (void)mult;
      ZPoly z;
      for (auto& ce : fac.c) z.push_back(Int(static_cast<unsigned long>(ce.c[0])));
      zf.push_back(std::move(z));
    }
    if (best.p == 0 || zf.size() < best.facs.size()) {
      best.p = p;
      best.facs = std::move(zf);
    }
    if (best.facs.size() == 1) break;
    if (++examined >= 7 && best.facs.size() <= kMaxModularFactors) break;
  }
  if (best.p == 0) throw std::runtime_error("factor_q: no usable prime found");
  if (best.facs.size() == 1) return {zprimitive(G)};
  if (best.facs.size() > kMaxModularFactors)
    throw std::runtime_error("factor_q: more than 20 modular factors; input out of supported range");

  Int p(static_cast<unsigned long>(best.p));
  // Mignotte-style bound: factors of G (deg <= n) have |coeff| <= 2^n * |G|_2 * |lc|
  Int norm2 = 0;
  for (auto& x : G) norm2 += x * x;
  Int bound = (isqrt(norm2) + 1) * abs(lc);
  bound <<= static_cast<unsigned>(n + 1);
  unsigned B = 1;
  {
    Int pb = p;
    while (pb <= 2 * bound) {
      pb *= p;
      ++B;
    }
  }
  std::vector<ZPoly> lifted = hensel_lift(G, best.facs, p, B);
  Int pb = 1;
  for (unsigned i = 0; i < B; ++i) pb *= p;

  // subset recombination
  std::vector<ZPoly> out;
  std::vector<int> alive(lifted.size(), 1);
  ZPoly rem = G;
  size_t nalive = lifted.size();
  for (size_t card = 1; card <= lifted.size() && nalive > 0; ++card) {
    // iterate over subsets of given cardinality among alive indices
    std::vector<size_t> idx;
    for (size_t i = 0; i < lifted.size(); ++i)
      if (alive[i]) idx.push_back(i);
    if (card > idx.size()) break;
    std::vector<size_t> sel(card);
    for (size_t i = 0; i < card; ++i) sel[i] = i;
    bool advanced = true;
    while (advanced) {
      // test subset sel (indices into idx)
      ZPoly h{rem.back() % pb};
      for (size_t i = 0; i < card; ++i) h = zmod_coeffs(zmul(h, lifted[idx[sel[i]]]), pb);
      h = zsym_coeffs(h, pb);
      ZPoly hp = zprimitive(h);
      if (!hp.empty() && zdivides(hp, rem)) {
        out.push_back(hp);
        rem = zdiv_exact(rem, hp);
        for (size_t i = 0; i < card; ++i) alive[idx[sel[i]]] = 0;
        nalive -= card;
        // restart this cardinality with updated alive set
        idx.clear();
        for (size_t i = 0; i < lifted.size(); ++i)
          if (alive[i]) idx.push_back(i);
        if (card > idx.size()) { advanced = false; break; }
        for (size_t i = 0; i < card; ++i) sel[i] = i;
        continue;
      }
      // next subset
      long pos = static_cast<long>(card) - 1;
      while (pos >= 0 && sel[pos] == idx.size() - card + pos) --pos;
      if (pos < 0) {
        advanced = false;
      } else {
        ++sel[pos];
        for (size_t i = pos + 1; i < card; ++i) sel[i] = sel[i - 1] + 1;
      }
    }
    if (nalive > 0 && zdeg(rem) == 0) break;
  }
  if (zdeg(rem) > 0) out.push_back(zprimitive(rem));
  return out;
}

bool is_binomial(const ZPoly& f, long* n_out) {
  long n = zdeg(f);
  if (n < 2) return false;
  for (long i = 1; i < n; ++i)
    if (f[i] != 0) return false;
  if (f[0] == 0) return false;
  *n_out = n;
  return true;
}

}  // namespace

std::vector<std::pair<QPoly, unsigned>> factor_q(const QPoly& f) {
  if (f.is_zero()) throw std::domain_error("zero input");
  std::vector<std::pair<QPoly, unsigned>> out;
  if (f.deg() == 0) return out;
  for (auto& [sf, mult] : squarefree_decomp(f)) {
    ZPoly G = [&] {
      Rat fac;
      QPoly prim = rat_poly_primitive(sf, &fac);
      ZPoly z;
      for (auto& x : prim.c) z.push_back(x.num());
      return z;
    }();
    std::vector<ZPoly> irr;
    long n = 0;
    if (is_binomial(G, &n) && abs(G[0]) == G.back()) {
      // x^n - u or x^n + u with u = +-1 after primitivity: cyclotomic product
      bool plus = G[0] == G.back();  // x^n + 1 shape (monic-primitive)
      std::vector<unsigned long> ds;
      if (!plus) {
        for (long d = 1; d <= n; ++d)
          if (n % d == 0) ds.push_back(d);
      } else {
        for (long d = 1; d <= 2 * n; ++d)
          if ((2 * n) % d == 0 && n % d != 0) ds.push_back(d);
      }
      for (auto d : ds) {
        QPoly cd = cyclotomic(d);
        ZPoly z;
        for (auto& x : cd.c) z.push_back(x.num());
        irr.push_back(std::move(z));
      }
    } else {
      irr = zassenhaus_squarefree(G);
    }
    for (auto& z : irr) {
      QPoly fz(Rat(0));
      for (auto& x : z) fz.c.push_back(Rat(x));
      fz.normalize();
      out.push_back({fz.monic(), mult});
    }
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) {
    int c = qpoly_cmp(a.first, b.first);
    if (c) return c < 0;
    return a.second < b.second;
  });
  return out;
}

bool q_irreducible(const QPoly& f) {
  if (f.deg() < 1) return false;
  auto fs = factor_q(f);
  return fs.size() == 1 && fs[0].second == 1 && fs[0].first.deg() == f.deg();
}

// ------- square roots -------

namespace {

template <class K, class SqrtFn>
std::optional<Poly<K>> poly_sqrt_impl(const Poly<K>& f, SqrtFn&& sqrt_k) {
  if (f.is_zero()) return f;
  if (f.deg() % 2 != 0) return std::nullopt;
  long v0 = f.val_at_zero();
  if (v0 % 2 != 0) return std::nullopt;
  auto lead = sqrt_k(f.lc());
  if (!lead) return std::nullopt;
  long m = f.deg() / 2;
  Poly<K> g(f.base);
  g.c.assign(m + 1, f.base.zero());
  g.c[m] = *lead;
  K two = f.base.one() + f.base.one();
  K inv2lead = (two * (*lead)).inv();
  for (long i = m - 1; i >= 0; --i) {
    // coefficient of x^(m+i) in g^2: 2*g_m*g_i + sum_{j+k=m+i, i<j,k<m} g_j g_k
    K acc = f.base.zero();
    for (long j = i + 1; j < m; ++j) {
      long k = m + i - j;
      if (k <= j || k > m) continue;
      acc += g.c[j] * g.c[k];
    }
    acc += acc;  // unordered pairs counted once above
    for (long j = i + 1; j < m; ++j) {
      long k = m + i - j;
      if (k == j) acc += g.c[j] * g.c[j];
    }
    g.c[i] = (f.coeff(m + i) - acc) * inv2lead;
  }
  g.normalize();
  if (g * g == f) return g;
  return std::nullopt;
}

}  // namespace

std::optional<QPoly> poly_sqrt(const QPoly& f) {
  return poly_sqrt_impl(f, [](const Rat& a) { return rat_sqrt(a); });
}

std::optional<FqPoly> poly_sqrt(const FqPoly& f) {
  return poly_sqrt_impl(f, [](const FqElem& a) { return fq_sqrt(a); });
}

std::optional<FqElem> fq_nth_root(const FqElem& a, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("fq_nth_root: n = 0");
  if (a.is_zero() || n == 1) return a;
  if (n == 2) return fq_sqrt(a);
  // roots of z^n - a
  FqPoly f(a.zero());
  f.c.assign(n + 1, a.zero());
  f.c[0] = -a;
  f.c[n] = a.one();
  auto roots = fq_roots(f);
  if (roots.empty()) return std::nullopt;
  return roots.front();  // canonical: smallest in coordinate order
}

// ------- conversions -------

ZPoly zpoly_from_q(const QPoly& f) {
  ZPoly z;
  for (auto& x : f.c) {
    if (x.den() != 1) throw std::domain_error("zpoly_from_q: non-integer coefficient");
    z.push_back(x.num());
  }
  return z;
}

QPoly qpoly_from_z(const ZPoly& f) {
  QPoly r(Rat(0));
  for (auto& x : f) r.c.push_back(Rat(x));
  r.normalize();
  return r;
}

FqPoly fq_poly_from_z(const ZPoly& f, const FqPtr& F) {
  FqPoly r(FqElem(F, 0));
  Int p(static_cast<unsigned long>(F->p));
  for (auto& x : f) {
    Int v = x % p;
    if (v < 0) v += p;
    r.c.push_back(FqElem(F, v.get_ui()));
  }
  r.normalize();
  return r;
}

FqPoly fq_poly_from_q(const QPoly& f, const FqPtr& F) {
  FqPoly r(FqElem(F, 0));
  Int p(static_cast<unsigned long>(F->p));
  for (auto& x : f.c) {
    Int num = x.num() % p, den = x.den() % p;
    if (num < 0) num += p;
    if (den == 0) throw std::domain_error("fq_poly_from_q: denominator divisible by p");
    Int v = num * invmod(den, p) % p;
    r.c.push_back(FqElem(F, v.get_ui()));
  }
  r.normalize();
  return r;
}

}  // namespace ellsurf
