#include "ellsurf/numfield.hpp"

#include <map>

#include "ellsurf/config.hpp"

namespace ellsurf {

namespace {

QPoly g_as_qpoly(const NfPtr& K) { return qpoly_from_z(K->g); }

// reduce a QPoly mod g
QPoly reduce_mod_g(const NfPtr& K, const QPoly& f) {
  QPoly g = g_as_qpoly(K);
  QPoly q, r;
  divrem(f, g, q, r);
  return r;
}

// denominator-cleared field element: value = num / den with num an integer
// residue polynomial mod g.  Keeps the big-field arithmetic in mpz with one
// content normalization per product instead of per-coefficient gcd churn.
struct ZNf {
  NfPtr K;
  ZPoly num;  // size <= deg g
  Int den = 1;

  static ZNf of(const NfElem& a) {
    ZNf z;
    z.K = a.K;
    Int d = 1;
    for (auto& x : a.c) d = lcm(d, x.den());
    z.den = d;
    z.num.reserve(a.c.size());
    for (auto& x : a.c) z.num.push_back(x.num() * (d / x.den()));
    while (!z.num.empty() && z.num.back() == 0) z.num.pop_back();
    return z;
  }
  NfElem to_elem() const {
    NfElem e(K, Rat(0));
    for (size_t i = 0; i < num.size(); ++i) e.c[i] = Rat(num[i], den);
    return e;
  }
  void normalize() {
    Int g = den;
    for (auto& x : num) g = gcd(g, x);
    if (g > 1) {
      den /= g;
      for (auto& x : num) x /= g;
    }
    if (den < 0) {
      den = -den;
      for (auto& x : num) x = -x;
    }
  }
};

ZNf znf_mul(const ZNf& a, const ZNf& b) {
  ZNf r;
  r.K = a.K;
  r.den = a.den * b.den;
  if (a.num.empty() || b.num.empty()) {
    r.den = 1;
    return r;
  }
  ZPoly prod(a.num.size() + b.num.size() - 1, Int(0));
  for (size_t i = 0; i < a.num.size(); ++i) {
    if (a.num[i] == 0) continue;
    for (size_t j = 0; j < b.num.size(); ++j) prod[i + j] += a.num[i] * b.num[j];
  }
  // reduce by the monic integral g
  const ZPoly& g = a.K->g;
  while (prod.size() >= g.size()) {
    Int lead = prod.back();
    size_t shift = prod.size() - g.size();
    if (lead != 0)
      for (size_t i = 0; i + 1 < g.size(); ++i) prod[shift + i] -= lead * g[i];
    prod.pop_back();
  }
  while (!prod.empty() && prod.back() == 0) prod.pop_back();
  r.num = std::move(prod);
  r.normalize();
  return r;
}

ZNf znf_add_scaled(const ZNf& a, const ZNf& b, const Rat& s) {
  // a + s * b
  ZNf r;
  r.K = a.K;
  Int bden = b.den * s.den();
  r.den = lcm(a.den, bden);
  size_t n = std::max(a.num.size(), b.num.size());
  r.num.assign(n, Int(0));
  Int fa = r.den / a.den;
  Int fb = (r.den / bden) * s.num();
  for (size_t i = 0; i < a.num.size(); ++i) r.num[i] += a.num[i] * fa;
  for (size_t i = 0; i < b.num.size(); ++i) r.num[i] += b.num[i] * fb;
  while (!r.num.empty() && r.num.back() == 0) r.num.pop_back();
  r.normalize();
  return r;
}

// powers 1, x, ..., x^(count-1) in cleared form
std::vector<ZNf> znf_powers(const NfElem& x, size_t count) {
  std::vector<ZNf> pows;
  ZNf one;
  one.K = x.K;
  one.num = {Int(1)};
  pows.push_back(one);
  ZNf zx = ZNf::of(x);
  for (size_t i = 1; i < count; ++i) pows.push_back(znf_mul(pows.back(), zx));
  return pows;
}

// f(x) for an integer/rational polynomial f, cleared arithmetic
NfElem znf_eval_poly(const QPoly& f, const NfElem& x) {
  ZNf acc;
  acc.K = x.K;
  ZNf zx = ZNf::of(x);
  for (size_t i = f.c.size(); i-- > 0;) {
    acc = znf_mul(acc, zx);
    acc = znf_add_scaled(acc, [&] {
      ZNf one;
      one.K = x.K;
      one.num = {Int(1)};
      return one;
    }(), f.c[i]);
  }
  return acc.to_elem();
}

}  // namespace

std::string NfCtx::label() const {
  if (degree() == 1) return "Q";
  return "Q[x]/(deg " + std::to_string(degree()) + ")";
}

NfPtr nf_rationals() {
  auto ctx = std::make_shared<NfCtx>();
  ctx->g = {Int(0), Int(1)};  // x
  return ctx;
}

NfPtr nf_make(const ZPoly& g) {
  if (g.size() < 2 || g.back() != 1) throw std::invalid_argument("nf_make: g must be monic");
  auto ctx = std::make_shared<NfCtx>();
  ctx->g = g;
  return ctx;
}

NfElem::NfElem(NfPtr k, const Rat& v) : K(std::move(k)) {
  c.assign(K->degree(), Rat(0));
  c[0] = v;
}

NfElem NfElem::from_poly(NfPtr k, const QPoly& f) {
  NfElem e;
  e.K = std::move(k);
  QPoly r = reduce_mod_g(e.K, f);
  e.c.assign(e.K->degree(), Rat(0));
  for (size_t i = 0; i < r.c.size(); ++i) e.c[i] = r.c[i];
  return e;
}

QPoly NfElem::to_poly() const {
  QPoly f(Rat(0));
  f.c = c;
  f.normalize();
  return f;
}

bool NfElem::is_zero() const {
  for (auto& x : c)
    if (!x.is_zero()) return false;
  return true;
}

bool NfElem::is_one() const {
  if (c.empty() || !(c[0] == Rat(1))) return false;
  for (size_t i = 1; i < c.size(); ++i)
    if (!c[i].is_zero()) return false;
  return true;
}

NfElem NfElem::operator-() const {
  NfElem r = *this;
  for (auto& x : r.c) x = -x;
  return r;
}

NfElem& NfElem::operator+=(const NfElem& o) {
  for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
  return *this;
}

NfElem& NfElem::operator-=(const NfElem& o) {
  for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
  return *this;
}

NfElem& NfElem::operator*=(const NfElem& o) {
  *this = NfElem::from_poly(K, to_poly() * o.to_poly());
  return *this;
}

NfElem NfElem::inv() const {
  if (is_zero()) throw std::domain_error("NfElem: division by zero");
  QPoly g = g_as_qpoly(K);
  QPoly gg, u, v;
  poly_xgcd(to_poly(), g, gg, u, v);
  if (gg.deg() != 0) throw std::domain_error("NfElem::inv: non-invertible (g reducible?)");
  QPoly r = u.scaled(gg.c[0].inv());
  return NfElem::from_poly(K, r);
}

NfElem& NfElem::operator/=(const NfElem& o) { return *this *= o.inv(); }

bool operator==(const NfElem& a, const NfElem& b) { return a.c == b.c; }

int NfElem::cmp(const NfElem& a, const NfElem& b) {
  for (size_t i = a.c.size(); i-- > 0;) {
    if (a.c[i] < b.c[i]) return -1;
    if (b.c[i] < a.c[i]) return 1;
  }
  return 0;
}

std::string NfElem::str() const { return to_poly().str("r"); }

NfElem nf_gen(const NfPtr& K) {
  if (K->degree() == 1) return NfElem(K, Rat(0));  // Q: the generator is 0
  QPoly x = QPoly::x(Rat(0));
  return NfElem::from_poly(K, x);
}

NfElem nf_eval(const QPoly& f, const NfElem& x) { return znf_eval_poly(f, x); }

// ---- modular machinery ----

std::optional<NfModCtx> nf_mod_ctx(const NfPtr& K, std::uint64_t p) {
  if (p < 5 || !is_prime(Int((unsigned long)p))) return std::nullopt;
  auto F = fq_field(p);
  FqPoly gbar = fq_poly_from_z(K->g, F);
  if (gbar.deg() != static_cast<long>(K->degree())) return std::nullopt;
  FqPoly d = gbar.derivative();
  if (d.is_zero() || poly_gcd(gbar, d).deg() != 0) return std::nullopt;
  NfModCtx M;
  M.K = K;
  M.p = p;
  for (auto& [fac, mult] : factor_fq(gbar)) {
    (void)mult;
    if (fac.deg() == 1) {
      M.locals.push_back(F);
      // encode the linear factor's root inside the ctx? keep factor list instead
    }
  }
  // store factors with their FqCtx moduli (including linear ones as F_p with a root)
  M.locals.clear();
  for (auto& [fac, mult] : factor_fq(gbar)) {
    (void)mult;
    std::vector<std::uint64_t> mod;
    for (auto& ce : fac.c) mod.push_back(ce.c[0]);
    if (fac.deg() == 1) {
      M.locals.push_back(fq_field(p));  // root = -mod[0]
    } else {
      M.locals.push_back(fq_field(p, mod));
    }
    // stash the factor itself for image computation
  }
  return M;
}

namespace {

// the per-local data we really need: factor polynomial + target field + the
// image of the generator
struct LocalData {
  std::uint64_t p;
  FqPtr F;          // base F_p
  FqPoly factor;    // irreducible factor of g mod p
  FqPtr field;      // F_{p^deg(factor)}
  FqElem gen;       // image of theta: the class of z (or the root for linear)
};

std::optional<std::vector<LocalData>> local_split(const NfPtr& K, std::uint64_t p) {
  if (p < 5 || !is_prime(Int((unsigned long)p))) return std::nullopt;
  auto F = fq_field(p);
  FqPoly gbar = fq_poly_from_z(K->g, F);
  if (gbar.deg() != static_cast<long>(K->degree())) return std::nullopt;
  FqPoly d = gbar.derivative();
  if (d.is_zero() || poly_gcd(gbar, d).deg() != 0) return std::nullopt;
  std::vector<LocalData> out;
  for (auto& [fac, mult] : factor_fq(gbar)) {
    (void)mult;
    LocalData L;
    L.p = p;
    L.F = F;
    L.factor = fac;
    if (fac.deg() == 1) {
      L.field = F;
      L.gen = -fac.c[0];
    } else {
      std::vector<std::uint64_t> mod;
      for (auto& ce : fac.c) mod.push_back(ce.c[0]);
      L.field = fq_field(p, mod);
      L.gen = FqElem::make(L.field, {0, 1});
    }
    out.push_back(std::move(L));
  }
  return out;
}

// image of an NfElem in one local field (denominators must be units mod p)
FqElem local_image(const LocalData& L, const NfElem& a) {
  FqElem r(L.field, 0);
  Int p((unsigned long)L.p);
  for (size_t i = a.c.size(); i-- > 0;) {
    Int num = a.c[i].num() % p, den = a.c[i].den() % p;
    if (num < 0) num += p;
    if (den == 0) throw std::domain_error("local_image: denominator divisible by p");
    Int v = num * invmod(den, p) % p;
    r = r * L.gen + FqElem(L.field, v.get_ui());
  }
  return r;
}

FqPoly local_image_poly(const LocalData& L, const Poly<NfElem>& f) {
  FqPoly r(FqElem(L.field, 0));
  for (auto& cf : f.c) r.c.push_back(local_image(L, cf));
  r.normalize();
  return r;
}

// CRT across the local factors: given images c_i in F_p[z]/(g_i), recover the
// unique residue mod g over F_p (as integer coefficient vector)
ZPoly locals_to_zpoly(const std::vector<LocalData>& Ls, const std::vector<FqElem>& vals) {
  const FqPtr F = Ls[0].F;
  // product basis: e_i = (G/g_i) * inv(G/g_i mod g_i)
  FqPoly G = FqPoly::constant(FqElem(F, 1));
  for (auto& L : Ls) G = G * L.factor;
  FqPoly acc(FqElem(F, 0));
  for (size_t i = 0; i < Ls.size(); ++i) {
    FqPoly Gi = exact_div(G, Ls[i].factor);
    // value of Gi at the local generator, inverted inside the local field
    FqElem gi_at(Ls[i].field, 0);
    for (size_t j = Gi.c.size(); j-- > 0;)
      gi_at = gi_at * Ls[i].gen + FqElem(Ls[i].field, Gi.c[j].c[0]);
    FqElem coef = vals[i] / gi_at;
    // coef as polynomial over F_p (coords in the local basis = poly in z)
    FqPoly coefpoly(FqElem(F, 0));
    if (Ls[i].field->k == 1) {
      coefpoly = FqPoly::constant(FqElem(F, coef.c[0]));
    } else {
      for (auto v : coef.c) coefpoly.c.push_back(FqElem(F, v));
      coefpoly.normalize();
    }
    acc += coefpoly * Gi;
  }
  // reduce mod G
  FqPoly q, r;
  divrem(acc, G, q, r);
  ZPoly out;
  for (auto& ce : r.c) out.push_back(Int((unsigned long)ce.c[0]));
  return out;
}

std::vector<std::uint64_t> good_prime_stream(const NfPtr& K, std::uint64_t start, size_t count) {
  std::vector<std::uint64_t> out;
  Int p((unsigned long)start);
  while (out.size() < count) {
    p = next_prime(p);
    out.push_back(p.get_ui());
  }
  (void)K;
  return out;
}

}  // namespace

std::vector<FqElem> nf_mod_images(const NfModCtx& M, const NfElem& a) {
  auto Ls = local_split(M.K, M.p);
  if (!Ls) throw std::runtime_error("nf_mod_images: bad prime");
  std::vector<FqElem> out;
  for (auto& L : *Ls) out.push_back(local_image(L, a));
  return out;
}

// ---- modular gcd engine ----

namespace {

// generic modular computation of a monic polynomial W over K defined by local
// images; `local_of` returns W's image over one local datum.  Reconstruction
// is accepted only after `verify` passes exactly.
Poly<NfElem> modular_poly_reconstruct(
    const NfPtr& K, const std::function<std::optional<FqPoly>(const LocalData&)>& local_of,
    const std::function<bool(const Poly<NfElem>&)>& verify, const char* what) {
  // accumulate CRT data per (z-power, y-power)
  long expected_deg = -1;
  std::map<std::pair<long, long>, Int> acc;  // (y-deg, z-deg) -> residue
  Int modulus = 1;
  std::uint64_t p = 1u << 20;
  int used = 0;
  for (int rounds = 0; rounds < 220; ++rounds) {
    p = next_prime(Int((unsigned long)p)).get_ui();
    auto Ls = local_split(K, p);
    if (!Ls) continue;
    // compute local images; all must exist and agree in degree
    std::vector<FqPoly> imgs;
    long deg_here = -2;
    bool ok = true;
    for (auto& L : *Ls) {
      auto w = local_of(L);
      if (!w) {
        ok = false;
        break;
      }
      if (deg_here == -2)
        deg_here = w->deg();
      else if (w->deg() != deg_here)
        ok = false;
      imgs.push_back(*w);
    }
    if (!ok || deg_here < 0) continue;
    if (expected_deg != -1 && deg_here > expected_deg) continue;  // unlucky (too big)
    if (expected_deg == -1 || deg_here < expected_deg) {
      // smaller degree: restart accumulation (previous primes were unlucky)
      expected_deg = deg_here;
      acc.clear();
      modulus = 1;
      used = 0;
    }
    // per y-coefficient: CRT the locals to a residue poly in z
    std::vector<ZPoly> zc(deg_here + 1);
    for (long yd = 0; yd <= deg_here; ++yd) {
      std::vector<FqElem> vals;
      for (size_t i = 0; i < Ls->size(); ++i) {
        FqPoly& w = imgs[i];
        vals.push_back(yd < static_cast<long>(w.c.size()) ? w.c[yd]
                                                          : FqElem((*Ls)[i].field, 0));
      }
      zc[yd] = locals_to_zpoly(*Ls, vals);
    }
    // integer CRT into the accumulator
    Int pz((unsigned long)p);
    for (long yd = 0; yd <= deg_here; ++yd)
      for (size_t zd = 0; zd < K->degree(); ++zd) {
        Int v = zd < zc[yd].size() ? zc[yd][zd] : Int(0);
        auto key = std::make_pair(yd, static_cast<long>(zd));
        auto it = acc.find(key);
        if (it == acc.end())
          acc[key] = used == 0 ? v : crt(Int(0), modulus, v, pz);
        else
          it->second = crt(it->second, modulus, v, pz);
      }
    modulus *= pz;
    ++used;
    if (used < 2) continue;
    // attempt rational reconstruction
    bool all_ok = true;
    Poly<NfElem> W(NfElem(K, Rat(0)));
    W.c.assign(expected_deg + 1, NfElem(K, Rat(0)));
    for (auto& [key, residue] : acc) {
      auto rr = rational_reconstruct(residue, modulus);
      if (!rr) {
        all_ok = false;
        break;
      }
      W.c[key.first].c[key.second] = *rr;
    }
    if (!all_ok) continue;
    W.normalize();
    if (W.deg() != expected_deg) continue;
    // pre-screen against a held-out prime before the exact verification
    {
      std::uint64_t q = next_prime(Int((unsigned long)(p + 1000))).get_ui();
      auto Lq = local_split(K, q);
      bool screened = true;
      if (Lq) {
        for (auto& L : *Lq) {
          auto want = local_of(L);
          if (!want) continue;
          try {
            FqPoly got = local_image_poly(L, W);
            if (!(got == *want)) {
              screened = false;
              break;
            }
          } catch (const std::domain_error&) {
          }
        }
      }
      if (!screened) continue;
    }
    if (verify(W)) return W;
    // verification failed: an unlucky prime poisoned the accumulator; restart
    if (used > 16) {
      acc.clear();
      modulus = 1;
      used = 0;
      expected_deg = -1;
    }
  }
  throw std::runtime_error(std::string(what) + ": modular reconstruction failed");
}

}  // namespace

Poly<NfElem> nf_gcd(const Poly<NfElem>& A, const Poly<NfElem>& B) {
  if (A.is_zero()) return B.monic();
  if (B.is_zero()) return A.monic();
  const NfPtr K = A.base.K;
  if (K->degree() == 1) {
    // plain Q gcd
    QPoly a(Rat(0)), b(Rat(0));
    for (auto& x : A.c) a.c.push_back(x.c[0]);
    a.normalize();
    for (auto& x : B.c) b.c.push_back(x.c[0]);
    b.normalize();
    QPoly g = poly_gcd(a, b);
    Poly<NfElem> out(NfElem(K, Rat(0)));
    for (auto& x : g.c) out.c.push_back(NfElem(K, x));
    out.normalize();
    return out;
  }
  auto local_of = [&](const LocalData& L) -> std::optional<FqPoly> {
    try {
      FqPoly a = local_image_poly(L, A), b = local_image_poly(L, B);
      if (a.deg() != A.deg() || b.deg() != B.deg()) return std::nullopt;  // lc vanished
      return poly_gcd(a, b);
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
  };
  auto verify = [&](const Poly<NfElem>& W) {
    if (W.is_zero() || !W.lc().is_one()) return false;
    Poly<NfElem> q, r;
    divrem(A, W, q, r);
    if (!r.is_zero()) return false;
    divrem(B, W, q, r);
    return r.is_zero();
  };
  return modular_poly_reconstruct(K, local_of, verify, "nf_gcd");
}

QPoly nf_trager_norm(const Poly<NfElem>& f, long s) {
  const NfPtr K = f.base.K;
  long D = f.deg() * static_cast<long>(K->degree());
  // modular evaluation-interpolation of Res_x(g(x), f~(x, y - s x))
  std::map<long, Int> acc;
  Int modulus = 1;
  std::uint64_t p = 1u << 20;
  int used = 0;
  QPoly candidate(Rat(0));
  for (int rounds = 0; rounds < 200; ++rounds) {
    p = next_prime(Int((unsigned long)p)).get_ui();
    if (p <= static_cast<std::uint64_t>(D) + 2) continue;
    auto F = fq_field(p);
    FqPoly gbar = fq_poly_from_z(K->g, F);
    if (gbar.deg() != static_cast<long>(K->degree())) continue;
    // f's coefficients as polynomials in x mod p
    bool bad = false;
    std::vector<FqPoly> coeff_x;
    for (auto& cf : f.c) {
      try {
        coeff_x.push_back(fq_poly_from_q(cf.to_poly(), F));
      } catch (const std::domain_error&) {
        bad = true;
        break;
      }
    }
    if (bad) continue;
    // evaluate y at D+1 points
    std::vector<FqElem> ys, vals;
    bool good = true;
    for (long t = 0; t <= D && good; ++t) {
      FqElem y0(F, static_cast<std::uint64_t>(t));
      // build u(x) = f~(x, y0 - s x) as univariate in x
      FqPoly shift(FqElem(F, 0));
      // y0 - s x
      Int sp = Int(s) % Int((unsigned long)p);
      if (sp < 0) sp += Int((unsigned long)p);
      shift.c = {y0, -FqElem(F, sp.get_ui())};
      shift.normalize();
      FqPoly u(FqElem(F, 0));
      for (size_t j = f.c.size(); j-- > 0;) u = u * shift + coeff_x[j];
      FqElem r = resultant(gbar, u);
      ys.push_back(y0);
      vals.push_back(r);
    }
    if (!good) continue;
    // Lagrange interpolation over F_p
    FqPoly interp(FqElem(F, 0));
    for (long i = 0; i <= D; ++i) {
      FqPoly term = FqPoly::constant(vals[i]);
      FqElem denom(F, 1);
      for (long j = 0; j <= D; ++j) {
        if (i == j) continue;
        FqPoly lin(FqElem(F, 0));
        lin.c = {-ys[j], FqElem(F, 1)};
        term = term * lin;
        denom *= ys[i] - ys[j];
      }
      interp += term.scaled(denom.inv());
    }
    // CRT
    Int pz((unsigned long)p);
    for (long d = 0; d <= D; ++d) {
      Int v = d <= interp.deg() ? Int((unsigned long)interp.coeff(d).c[0]) : Int(0);
      auto it = acc.find(d);
      if (it == acc.end())
        acc[d] = used == 0 ? v : crt(Int(0), modulus, v, pz);
      else
        it->second = crt(it->second, modulus, v, pz);
    }
    modulus *= pz;
    ++used;
    if (used < 2) continue;
    QPoly cand(Rat(0));
    cand.c.assign(D + 1, Rat(0));
    bool ok = true;
    for (auto& [d, residue] : acc) {
      auto rr = rational_reconstruct(residue, modulus);
      if (!rr) {
        ok = false;
        break;
      }
      cand.c[d] = *rr;
    }
    if (!ok) continue;
    cand.normalize();
    if (cand == candidate) return cand;  // stabilized across a prime
    candidate = cand;
  }
  throw std::runtime_error("nf_trager_norm: reconstruction failed");
}

namespace {

// squarefree decomposition over K using nf_gcd
std::vector<std::pair<Poly<NfElem>, unsigned>> nf_squarefree(const Poly<NfElem>& f) {
  std::vector<std::pair<Poly<NfElem>, unsigned>> out;
  Poly<NfElem> g = nf_gcd(f, f.derivative());
  Poly<NfElem> w = exact_div(f, g).monic();
  unsigned i = 1;
  while (w.deg() > 0) {
    Poly<NfElem> y = nf_gcd(w, g);
    Poly<NfElem> z = exact_div(w, y).monic();
    if (z.deg() > 0) out.push_back({z, i});
    w = y;
    g = exact_div(g, y).monic();
    ++i;
  }
  return out;
}

}  // namespace

std::vector<std::pair<Poly<NfElem>, unsigned>> factor_over_numberfield(const Poly<NfElem>& f) {
  std::vector<std::pair<Poly<NfElem>, unsigned>> out;
  if (f.is_zero()) throw std::domain_error("zero input");
  const NfPtr K = f.base.K;
  if (K->degree() == 1) {
    QPoly a(Rat(0));
    for (auto& x : f.c) a.c.push_back(x.c[0]);
    a.normalize();
    for (auto& [g, e] : factor_q(a)) {
      Poly<NfElem> lifted(NfElem(K, Rat(0)));
      for (auto& x : g.c) lifted.c.push_back(NfElem(K, x));
      lifted.normalize();
      out.push_back({lifted, e});
    }
    return out;
  }
  for (auto& [sf, mult] : nf_squarefree(f.monic())) {
    long D = sf.deg() * static_cast<long>(K->degree());
    if (D > kTragerNormCap)
      throw std::runtime_error("factor_over_numberfield: norm degree " + std::to_string(D) +
                               " exceeds the supported bound");
    if (sf.deg() == 1) {
      out.push_back({sf, mult});
      continue;
    }
    // find a squarefree shifted norm
    QPoly norm(Rat(0));
    long shift = 0;
    for (long s : {1, -1, 2, -2, 3, -3, 5, -5, 7, 11}) {
      QPoly N = nf_trager_norm(sf, s);
      if (N.deg() != D) continue;
      if (poly_gcd(N, N.derivative()).deg() == 0) {
        norm = N;
        shift = s;
        break;
      }
    }
    if (norm.is_zero()) throw std::runtime_error("factor_over_numberfield: no squarefree norm");
    auto qfactors = factor_q(norm);
    if (qfactors.size() == 1) {
      out.push_back({sf, mult});
      continue;
    }
    for (auto& [Nk, ek] : qfactors) {
      (void)ek;
      // K-factor = gcd(sf(y), Nk(y + s theta)); the second operand enters only
      // through its local images
      auto local_of = [&](const LocalData& L) -> std::optional<FqPoly> {
        try {
          FqPoly a = local_image_poly(L, sf);
          if (a.deg() != sf.deg()) return std::nullopt;
          // Nk(y + s*gen) over the local field
          FqPoly NkL = fq_poly_from_q(Nk, L.F);
          // map into the local extension field
          FqPoly NkE(FqElem(L.field, 0));
          for (auto& ce : NkL.c) NkE.c.push_back(FqElem(L.field, ce.c[0]));
          NkE.normalize();
          if (NkE.deg() != Nk.deg()) return std::nullopt;
          FqPoly lin(FqElem(L.field, 0));
          Int sp = Int(shift) % Int((unsigned long)L.p);
          if (sp < 0) sp += Int((unsigned long)L.p);
          lin.c = {L.gen * FqElem(L.field, sp.get_ui()), FqElem(L.field, 1)};
          lin.normalize();
          FqPoly composed = NkE.compose(lin);
          return poly_gcd(a, composed);
        } catch (const std::domain_error&) {
          return std::nullopt;
        }
      };
      auto verify = [&](const Poly<NfElem>& W) {
        if (W.is_zero() || !W.lc().is_one() || W.deg() < 1) return false;
        Poly<NfElem> q, r;
        divrem(sf, W, q, r);
        return r.is_zero();
      };
      Poly<NfElem> fk = modular_poly_reconstruct(K, local_of, verify, "trager gcd");
      out.push_back({fk, mult});
    }
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) {
    if (a.first.deg() != b.first.deg()) return a.first.deg() < b.first.deg();
    for (size_t i = a.first.c.size(); i-- > 0;) {
      int c = NfElem::cmp(a.first.c[i], b.first.c[i]);
      if (c) return c < 0;
    }
    return a.second < b.second;
  });
  return out;
}

std::vector<NfElem> nf_roots(const Poly<NfElem>& f) {
  std::vector<NfElem> out;
  for (auto& [fac, mult] : factor_over_numberfield(f)) {
    (void)mult;
    if (fac.deg() == 1) out.push_back(-fac.c[0]);
  }
  std::sort(out.begin(), out.end(), [](const NfElem& a, const NfElem& b) {
    return NfElem::cmp(a, b) < 0;
  });
  return out;
}

// ---- adjunction ----

Poly<NfElem> nf_lift_poly(const Poly<NfElem>& f, const NfPtr& K2, const NfElem& old_gen_image) {
  size_t d = f.base.K->degree();
  auto pows = znf_powers(old_gen_image, d);
  Poly<NfElem> out(NfElem(K2, Rat(0)));
  for (auto& cf : f.c) {
    ZNf v;
    v.K = K2;
    for (size_t i = 0; i < cf.c.size(); ++i) {
      if (cf.c[i].is_zero()) continue;
      v = znf_add_scaled(v, pows[i], cf.c[i]);
    }
    out.c.push_back(v.to_elem());
  }
  out.normalize();
  return out;
}

Adjoined nf_adjoin(const NfPtr& K, const Poly<NfElem>& u_in, unsigned degree_bound) {
  Poly<NfElem> u = u_in.monic();
  if (u.deg() < 2) throw std::invalid_argument("nf_adjoin: degree < 2");
  unsigned D2 = K->degree() * static_cast<unsigned>(u.deg());
  if (D2 > degree_bound)
    throw std::runtime_error("degree bound exceeded: projected splitting degree " +
                             std::to_string(D2) + " > " + std::to_string(degree_bound));
  Adjoined out;
  if (K->degree() == 1) {
    // adjoin over Q: the defining polynomial is u itself, with integral scaling
    QPoly uq(Rat(0));
    for (auto& x : u.c) uq.c.push_back(x.c[0]);
    uq.normalize();
    // lambda-scale: x -> x/lb makes coefficients integral, monic preserved:
    // minimal lambda = lcm denominators of coefficients of u(x) after monic;
    // use y = lb * x with lb = den-lcm
    Int lb = 1;
    for (auto& x : uq.c) lb = lcm(lb, x.den());
    // also clear content growth: g(y) = lb^n u(y / lb)
    ZPoly g;
    long n = uq.deg();
    for (long i = 0; i <= n; ++i) {
      Rat ci = uq.c[i];
      Int scale = 1;
      for (long j = 0; j < n - i; ++j) scale *= lb;
      Rat v = ci * Rat(scale);
      if (v.den() != 1) throw std::runtime_error("nf_adjoin: scaling failed");
      g.push_back(v.num());
    }
    out.K2 = nf_make(g);
    out.old_gen = NfElem(out.K2, Rat(0));
    NfElem gen2 = nf_gen(out.K2);
    // new_root = gen / lb
    for (auto& x : gen2.c) x = x / Rat(lb);
    out.new_root = gen2;
    out.shift = 0;
    // verify u(new_root) = 0
    NfElem acc(out.K2, Rat(0));
    for (size_t i = u.c.size(); i-- > 0;) acc = acc * out.new_root + NfElem(out.K2, u.c[i].c[0]);
    if (!acc.is_zero()) throw std::runtime_error("nf_adjoin: root verification failed");
    return out;
  }
  // general case: theta' = rho + s * theta with the shifted-resultant minimal
  // polynomial M(y) = Res_x(g(x), u~(x, y - s x))
  for (long s : {1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 7, -7, 11, 13}) {
    QPoly M(Rat(0));
    try {
      // reuse the norm machinery: compose u with (y - s x) and take the norm
      M = nf_trager_norm(u, s);
    } catch (const std::exception&) {
      continue;
    }
    if (M.deg() != static_cast<long>(D2)) continue;
    if (poly_gcd(M, M.derivative()).deg() != 0) continue;  // theta' not primitive
    // integral scaling: theta'' = lb * theta'
    Int lb = 1;
    for (auto& x : M.c) lb = lcm(lb, x.den());
    ZPoly g2;
    long n = M.deg();
    for (long i = 0; i <= n; ++i) {
      Int scale = 1;
      for (long j = 0; j < n - i; ++j) scale *= lb;
      Rat v = M.c[i] * Rat(scale);
      if (v.den() != 1) throw std::runtime_error("nf_adjoin: scaling failed");
      g2.push_back(v.num());
    }
    NfPtr K2 = nf_make(g2);
    NfElem thp = nf_gen(K2);  // theta'' = lb * theta'
    for (auto& x : thp.c) x = x / Rat(lb);  // theta' itself
    // old generator image: the common root of g(x) and u~(x, theta' - s x)
    QPoly gq = qpoly_from_z(K->g);
    auto local_of = [&](const LocalData& L) -> std::optional<FqPoly> {
      try {
        FqPoly gbar = fq_poly_from_z(K->g, L.F);
        FqPoly gbarE(FqElem(L.field, 0));
        for (auto& ce : gbar.c) gbarE.c.push_back(FqElem(L.field, ce.c[0]));
        gbarE.normalize();
        if (gbarE.deg() != gq.deg()) return std::nullopt;
        // theta' image in the local field
        FqElem th = local_image(L, thp);
        // u~(x, th - s x): u's coefficients are polys in old theta -> x
        Int sp = Int(s) % Int((unsigned long)L.p);
        if (sp < 0) sp += Int((unsigned long)L.p);
        FqPoly lin(FqElem(L.field, 0));
        lin.c = {th, -FqElem(L.field, sp.get_ui())};
        lin.normalize();
        FqPoly acc(FqElem(L.field, 0));
        for (size_t j = u.c.size(); j-- > 0;) {
          FqPoly cj_x(FqElem(L.field, 0));
          QPoly cq = u.c[j].to_poly();
          FqPoly cp = fq_poly_from_q(cq, L.F);
          for (auto& ce : cp.c) cj_x.c.push_back(FqElem(L.field, ce.c[0]));
          cj_x.normalize();
          acc = acc * lin + cj_x;
        }
        FqPoly gcd1 = poly_gcd(gbarE, acc);
        if (gcd1.deg() != 1) return std::nullopt;  // bad prime or bad shift
        return gcd1;
      } catch (const std::domain_error&) {
        return std::nullopt;
      }
    };
    auto verify = [&](const Poly<NfElem>& W) {
      if (W.deg() != 1 || !W.lc().is_one()) return false;
      NfElem cand = -W.c[0];
      return znf_eval_poly(gq, cand).is_zero();  // exact: g(cand) = 0 in K2
    };
    Poly<NfElem> lin;
    try {
      lin = modular_poly_reconstruct(K2, local_of, verify, "nf_adjoin gcd");
    } catch (const std::exception&) {
      continue;
    }
    out.K2 = K2;
    out.old_gen = -lin.c[0];
    out.shift = s;
    // rho = theta' - s * theta
    NfElem rho = thp;
    NfElem sth = out.old_gen;
    for (auto& x : sth.c) x = x * Rat(s);
    rho -= sth;
    out.new_root = rho;
    // exact check: u-image(rho) = 0, in cleared arithmetic
    Poly<NfElem> u2 = nf_lift_poly(u, K2, out.old_gen);
    {
      ZNf acc;
      acc.K = K2;
      ZNf zr = ZNf::of(rho);
      for (size_t i = u2.c.size(); i-- > 0;) {
        acc = znf_mul(acc, zr);
        acc = znf_add_scaled(acc, ZNf::of(u2.c[i]), Rat(1));
      }
      if (!acc.to_elem().is_zero())
        throw std::runtime_error("nf_adjoin: adjoined root verification failed");
    }
    return out;
  }
  throw std::runtime_error("nf_adjoin: no usable shift found");
}

std::vector<NfElem> nf_migrate(const std::vector<NfElem>& elems, const NfPtr& K2,
                               const NfElem& old_gen_image) {
  size_t d = elems.empty() ? 0 : elems[0].K->degree();
  if (elems.empty()) return {};
  auto pows = znf_powers(old_gen_image, d);
  std::vector<NfElem> out;
  out.reserve(elems.size());
  for (auto& e : elems) {
    ZNf v;
    v.K = K2;
    for (size_t i = 0; i < e.c.size(); ++i) {
      if (e.c[i].is_zero()) continue;
      v = znf_add_scaled(v, pows[i], e.c[i]);
    }
    out.push_back(v.to_elem());
  }
  return out;
}

}  // namespace ellsurf
