#pragma once
// Weierstrass models over k(t): invariants, chord-tangent group law,
// coordinate transforms, the chart at infinity, base change and twists.
// Sections keep affine rational-function coordinates plus an explicit zero
// marker so the integral-shape check downstream stays syntactic.

#include <functional>
#include <optional>

#include "ellsurf/factor.hpp"
#include "ellsurf/ratfunc.hpp"

namespace ellsurf {

struct ExtensionRequiredError : std::runtime_error {
  std::string minpoly;  // defining polynomial of the missing radical
  ExtensionRequiredError(const std::string& msg, std::string mp)
      : std::runtime_error(msg), minpoly(std::move(mp)) {}
};

template <class K>
struct WModel {
  Poly<K> a1, a2, a3, a4, a6;  // polynomials in t over the base field
  unsigned chi = 1;            // 1 rational, 2 K3 (larger only in rank-formula flows)
  bool isotrivial = false;     // constant j with nonconstant discriminant

  const K& base() const { return a6.base; }
};

template <class K>
struct WInvariants {
  Poly<K> b2, b4, b6, b8, c4, c6, disc;
  RatFunc<K> j;
};

template <class K>
struct SectionPt {
  bool zero = true;
  RatFunc<K> x, y;

  static SectionPt zero_of(const K& ex) {
    SectionPt s;
    s.zero = true;
    s.x = RatFunc<K>::zero_of(ex);
    s.y = RatFunc<K>::zero_of(ex);
    return s;
  }
  static SectionPt affine(const RatFunc<K>& x, const RatFunc<K>& y) {
    SectionPt s;
    s.zero = false;
    s.x = x;
    s.y = y;
    return s;
  }
  static SectionPt affine(const Poly<K>& x, const Poly<K>& y) {
    return affine(RatFunc<K>(x), RatFunc<K>(y));
  }
  friend bool operator==(const SectionPt& a, const SectionPt& b) {
    if (a.zero != b.zero) return false;
    if (a.zero) return true;
    return a.x == b.x && a.y == b.y;
  }
  // integral: polynomial coordinates within the chi degree bounds
  bool integral(unsigned chi) const {
    if (zero) return false;
    return x.is_poly() && y.is_poly() && x.num.deg() <= 2 * static_cast<long>(chi) &&
           y.num.deg() <= 3 * static_cast<long>(chi);
  }
};

// chi from the degree bounds: max_i ceil(deg a_i / i), at least 1
template <class K>
unsigned derive_chi(const Poly<K>& a1, const Poly<K>& a2, const Poly<K>& a3, const Poly<K>& a4,
                    const Poly<K>& a6) {
  long d = 1;
  auto upd = [&](const Poly<K>& a, long i) {
    if (!a.is_zero()) d = std::max(d, (a.deg() + i - 1) / i);
  };
  upd(a1, 1);
  upd(a2, 2);
  upd(a3, 3);
  upd(a4, 4);
  upd(a6, 6);
  return static_cast<unsigned>(d);
}

template <class K>
WModel<K> make_model(Poly<K> a1, Poly<K> a2, Poly<K> a3, Poly<K> a4, Poly<K> a6,
                     unsigned chi = 0, bool allow_large_chi = false) {
  WModel<K> E{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)};
  E.chi = chi ? chi : derive_chi(E.a1, E.a2, E.a3, E.a4, E.a6);
  if (!allow_large_chi && E.chi > 2)
    throw std::invalid_argument("make_model: degree bounds exceed K3 (chi > 2)");
  bool all_const = E.a1.deg() <= 0 && E.a2.deg() <= 0 && E.a3.deg() <= 0 && E.a4.deg() <= 0 &&
                   E.a6.deg() <= 0;
  if (all_const) throw std::invalid_argument("make_model: constant surface rejected");
  auto inv = invariants(E);  // throws "singular surface" when disc == 0
  // constant j (including j = 0) marks an isotrivial fibration
  E.isotrivial = inv.j.is_zero() || (inv.j.num.deg() <= 0 && inv.j.den.deg() <= 0);
  return E;
}

template <class K>
WInvariants<K> invariants(const WModel<K>& E) {
  WInvariants<K> v;
  const auto &a1 = E.a1, &a2 = E.a2, &a3 = E.a3, &a4 = E.a4, &a6 = E.a6;
  auto C = [&](long n) { return Poly<K>::constant(int_to_field(E.base(), n)); };
  v.b2 = a1 * a1 + C(4) * a2;
  v.b4 = C(2) * a4 + a1 * a3;
  v.b6 = a3 * a3 + C(4) * a6;
  v.b8 = a1 * a1 * a6 + C(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  v.c4 = v.b2 * v.b2 - C(24) * v.b4;
  v.c6 = -(v.b2 * v.b2 * v.b2) + C(36) * v.b2 * v.b4 - C(216) * v.b6;
  v.disc = -(v.b2 * v.b2) * v.b8 - C(8) * (v.b4 * v.b4 * v.b4) - C(27) * (v.b6 * v.b6) +
           C(9) * v.b2 * v.b4 * v.b6;
  if (v.disc.is_zero()) throw std::domain_error("singular surface");
  v.j = RatFunc<K>(v.c4 * v.c4 * v.c4, v.disc);
  return v;
}

// small-integer image in an arbitrary field element type
template <class K>
K int_to_field(const K& ex, long n) {
  K one = ex.one();
  K acc = ex.zero();
  bool neg = n < 0;
  unsigned long m = neg ? -static_cast<unsigned long>(n) : n;
  K pw = one;
  while (m) {
    if (m & 1) acc += pw;
    pw += pw;
    m >>= 1;
  }
  return neg ? -acc : acc;
}

template <class K>
bool on_curve(const WModel<K>& E, const SectionPt<K>& P) {
  if (P.zero) return true;
  RatFunc<K> x = P.x, y = P.y;
  auto L = [&](const Poly<K>& a) { return RatFunc<K>(a); };
  RatFunc<K> lhs = y * y + L(E.a1) * x * y + L(E.a3) * y;
  RatFunc<K> rhs = x * x * x + L(E.a2) * x * x + L(E.a4) * x + L(E.a6);
  return lhs == rhs;
}

template <class K>
SectionPt<K> negate(const WModel<K>& E, const SectionPt<K>& P) {
  if (P.zero) return P;
  auto L = [&](const Poly<K>& a) { return RatFunc<K>(a); };
  return SectionPt<K>::affine(P.x, -P.y - L(E.a1) * P.x - L(E.a3));
}

template <class K>
SectionPt<K> add(const WModel<K>& E, const SectionPt<K>& P, const SectionPt<K>& Q) {
  if (P.zero) return Q;
  if (Q.zero) return P;
  auto L = [&](const Poly<K>& a) { return RatFunc<K>(a); };
  RatFunc<K> x1 = P.x, y1 = P.y, x2 = Q.x, y2 = Q.y;
  RatFunc<K> lam, nu;
  if (!(x1 == x2)) {
    lam = (y2 - y1) / (x2 - x1);
    nu = (y1 * x2 - y2 * x1) / (x2 - x1);
  } else {
    // same x: either inverse points or doubling
    RatFunc<K> y2_neg = -y1 - L(E.a1) * x1 - L(E.a3);
    if (y2 == y2_neg) return SectionPt<K>::zero_of(E.base());
    RatFunc<K> denom = y1 + y1 + L(E.a1) * x1 + L(E.a3);
    lam = (x1 * x1 * int_to_rf(E, 3) + L(E.a2) * x1 * int_to_rf(E, 2) + L(E.a4) - L(E.a1) * y1) /
          denom;
    nu = (-(x1 * x1 * x1) + L(E.a4) * x1 + int_to_rf(E, 2) * L(E.a6) - L(E.a3) * y1) / denom;
  }
  RatFunc<K> x3 = lam * lam + L(E.a1) * lam - L(E.a2) - x1 - x2;
  RatFunc<K> y3 = -(lam + L(E.a1)) * x3 - nu - L(E.a3);
  return SectionPt<K>::affine(x3, y3);
}

template <class K>
RatFunc<K> int_to_rf(const WModel<K>& E, long n) {
  return RatFunc<K>(Poly<K>::constant(int_to_field(E.base(), n)));
}

template <class K>
SectionPt<K> sub(const WModel<K>& E, const SectionPt<K>& P, const SectionPt<K>& Q) {
  return add(E, P, negate(E, Q));
}

template <class K>
SectionPt<K> multiple(const WModel<K>& E, const SectionPt<K>& P, long n) {
  if (n < 0) return multiple(E, negate(E, P), -n);
  SectionPt<K> r = SectionPt<K>::zero_of(E.base());
  SectionPt<K> b = P;
  unsigned long m = n;
  while (m) {
    if (m & 1) r = add(E, r, b);
    b = add(E, b, b);
    m >>= 1;
  }
  return r;
}

// ---- coordinate transforms -------------------------------------------------
//
// x = u^2 x' + r,  y = u^3 y' + s u^2 x' + w  with (u, r, s, w) rational
// functions of t, u nonzero.  The result must again have polynomial
// coefficients; the transporter maps sections of E to sections of E'.

template <class K>
struct Transform {
  RatFunc<K> u, r, s, w;

  static Transform identity(const K& ex) {
    Transform tr;
    Poly<K> one = Poly<K>::constant(ex.one());
    tr.u = RatFunc<K>(one);
    tr.r = RatFunc<K>::zero_of(ex);
    tr.s = RatFunc<K>::zero_of(ex);
    tr.w = RatFunc<K>::zero_of(ex);
    return tr;
  }
  // forward: section of E -> section of E'
  SectionPt<K> fwd(const SectionPt<K>& P) const {
    if (P.zero) return P;
    RatFunc<K> xp = (P.x - r) / (u * u);
    RatFunc<K> yp = (P.y - s * (P.x - r) - w) / (u * u * u);
    return SectionPt<K>::affine(xp, yp);
  }
  // backward: section of E' -> section of E
  SectionPt<K> bwd(const SectionPt<K>& P) const {
    if (P.zero) return P;
    RatFunc<K> x = u * u * P.x + r;
    RatFunc<K> y = u * u * u * P.y + s * u * u * P.x + w;
    return SectionPt<K>::affine(x, y);
  }
};

template <class K>
struct TransformedModel {
  WModel<K> model;
  Transform<K> map;
};

template <class K>
TransformedModel<K> transform(const WModel<K>& E, const RatFunc<K>& u, const RatFunc<K>& r,
                              const RatFunc<K>& s, const RatFunc<K>& w,
                              bool allow_large_chi = false, unsigned chi_override = 0) {
  if (u.is_zero()) throw std::invalid_argument("transform: u = 0");
  auto L = [&](const Poly<K>& a) { return RatFunc<K>(a); };
  RatFunc<K> two = int_to_rf(E, 2), three = int_to_rf(E, 3);
  RatFunc<K> u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  RatFunc<K> A1 = (L(E.a1) + two * s) / u;
  RatFunc<K> A2 = (L(E.a2) - s * L(E.a1) + three * r - s * s) / u2;
  RatFunc<K> A3 = (L(E.a3) + r * L(E.a1) + two * w) / u3;
  RatFunc<K> A4 =
      (L(E.a4) - s * L(E.a3) + two * r * L(E.a2) - (w + r * s) * L(E.a1) + three * r * r -
       two * s * w) /
      u4;
  RatFunc<K> A6 =
      (L(E.a6) + r * L(E.a4) + r * r * L(E.a2) + r * r * r - w * L(E.a3) - w * w -
       r * w * L(E.a1)) /
      u6;
  for (auto* f : {&A1, &A2, &A3, &A4, &A6})
    if (!f->is_poly()) throw std::invalid_argument("transform: result not polynomial");
  TransformedModel<K> out;
  out.model = make_model(A1.poly(), A2.poly(), A3.poly(), A4.poly(), A6.poly(), chi_override,
                         allow_large_chi);
  out.map.u = u;
  out.map.r = r;
  out.map.s = s;
  out.map.w = w;
  return out;
}

// completed-square model (a1 = a3 = 0); valid away from characteristic 2
template <class K>
TransformedModel<K> complete_square(const WModel<K>& E, bool allow_large_chi = false) {
  K half = (int_to_field(E.base(), 2)).inv();
  RatFunc<K> u = int_to_rf(E, 1);
  RatFunc<K> zero = RatFunc<K>::zero_of(E.base());
  RatFunc<K> s = RatFunc<K>(E.a1.scaled(-half));
  RatFunc<K> w = RatFunc<K>(E.a3.scaled(-half));
  return transform(E, u, zero, s, w, allow_large_chi, E.chi);
}

// chart at infinity: t = 1/s, x -> x/s^(2 chi), y -> y/s^(3 chi);
// a_i(s) = s^(i chi) a_i(1/s), polynomial iff deg a_i <= i chi
template <class K>
WModel<K> infinity_model(const WModel<K>& E) {
  auto conv = [&](const Poly<K>& a, unsigned i) {
    long bound = static_cast<long>(i) * E.chi;
    if (a.deg() > bound)
      throw std::invalid_argument("infinity_model: degree bound violation (not rational/K3)");
    Poly<K> r(E.base());
    r.c.assign(bound + 1, E.base().zero());
    for (size_t j = 0; j < a.c.size(); ++j) r.c[bound - j] = a.c[j];
    r.normalize();
    return r;
  };
  WModel<K> out;
  out.a1 = conv(E.a1, 1);
  out.a2 = conv(E.a2, 2);
  out.a3 = conv(E.a3, 3);
  out.a4 = conv(E.a4, 4);
  out.a6 = conv(E.a6, 6);
  out.chi = E.chi;
  out.isotrivial = E.isotrivial;
  return out;
}

// transport a section to the infinity chart
template <class K>
SectionPt<K> to_infinity_chart(const WModel<K>& E, const SectionPt<K>& P) {
  if (P.zero) return P;
  // substitute t = 1/s as a rational function, then clear:
  // x*(s) = s^(2chi) x(1/s), y*(s) = s^(3chi) y(1/s)
  const K& ex = E.base();
  Poly<K> spoly = Poly<K>::x(ex);
  RatFunc<K> sinv = RatFunc<K>(Poly<K>::constant(ex.one()), spoly);
  RatFunc<K> xs = P.x.compose(sinv);
  RatFunc<K> ys = P.y.compose(sinv);
  RatFunc<K> s2(Poly<K>::x_pow(ex, 2 * E.chi)), s3(Poly<K>::x_pow(ex, 3 * E.chi));
  return SectionPt<K>::affine(s2 * xs, s3 * ys);
}

// ---- base change -----------------------------------------------------------

template <class K>
struct BaseChangeResult {
  WModel<K> model;          // cleared polynomial model over k(t)
  RatFunc<K> g;             // the substitution u -> g(t)
  RatFunc<K> scale;         // the u-parameter of the clearing transform
  // transport: section (x(u), y(u)) -> (x(g)/scale^2, y(g)/scale^3)
  SectionPt<K> transport(const SectionPt<K>& P) const {
    if (P.zero) return P;
    RatFunc<K> x = P.x.compose(g) / (scale * scale);
    RatFunc<K> y = P.y.compose(g) / (scale * scale * scale);
    return SectionPt<K>::affine(x, y);
  }
};

// factorization hook for clearing denominators: returns monic irreducible
// factors of a denominator polynomial
template <class K>
std::vector<std::pair<Poly<K>, unsigned>> factor_hook(const Poly<K>& f);

template <>
inline std::vector<std::pair<QPoly, unsigned>> factor_hook<Rat>(const QPoly& f) {
  return factor_q(f);
}
template <>
inline std::vector<std::pair<FqPoly, unsigned>> factor_hook<FqElem>(const FqPoly& f) {
  return factor_fq(f);
}

template <class K>
BaseChangeResult<K> base_change(const WModel<K>& E, const RatFunc<K>& g,
                                bool allow_large_chi = false) {
  if (g.num.deg() <= 0 && g.den.deg() <= 0)
    throw std::invalid_argument("base_change: constant substitution");
  const K& ex = E.base();
  auto comp = [&](const Poly<K>& a) { return RatFunc<K>(a).compose(g); };
  RatFunc<K> A1 = comp(E.a1), A2 = comp(E.a2), A3 = comp(E.a3), A4 = comp(E.a4), A6 = comp(E.a6);
  // clearing scale: h with a_i(g) * h^i polynomial; h = prod pi^(max ceil(v_i/i))
  Poly<K> den = A1.den;
  for (auto* f : {&A2, &A3, &A4, &A6}) den = exact_div(den * f->den, poly_gcd(den, f->den));
  Poly<K> h = Poly<K>::constant(ex.one());
  if (den.deg() > 0) {
    for (auto& [pi, mult] : factor_hook<K>(den)) {
      (void)mult;
      long need = 0;
      auto upd = [&](const RatFunc<K>& a, long i) {
        if (a.is_zero()) return;
        long v = a.valuation(pi);
        if (v < 0) need = std::max(need, (-v + i - 1) / i);
      };
      upd(A1, 1);
      upd(A2, 2);
      upd(A3, 3);
      upd(A4, 4);
      upd(A6, 6);
      for (long e = 0; e < need; ++e) h = h * pi;
    }
  }
  RatFunc<K> hs(h);
  RatFunc<K> A1c = A1 * hs, A2c = A2 * hs * hs, A3c = A3 * hs * hs * hs,
             A4c = A4 * hs * hs * hs * hs, A6c = A6 * hs * hs * hs * hs * hs * hs;
  for (auto* f : {&A1c, &A2c, &A3c, &A4c, &A6c})
    if (!f->is_poly()) throw std::runtime_error("base_change: clearing failed");
  BaseChangeResult<K> out;
  out.model = make_model(A1c.poly(), A2c.poly(), A3c.poly(), A4c.poly(), A6c.poly(), 0,
                         allow_large_chi);
  out.g = g;
  // section transport scale: x -> x * h (since model scaled by u = 1/h)
  out.scale = RatFunc<K>(Poly<K>::constant(ex.one()), h);
  return out;
}

// ---- twists ----------------------------------------------------------------

template <class K>
struct TwistResult {
  WModel<K> model;
  // transports sections when the required radicals exist in K
  std::function<SectionPt<K>(const SectionPt<K>&)> transport;
  bool transport_available = false;
  std::string missing_minpoly;  // defining polynomial of the absent radical
};

// radical hooks per coefficient field
std::optional<Rat> field_sqrt(const Rat& a);
std::optional<Rat> field_cbrt(const Rat& a);
inline std::optional<Rat> field_sqrt(const Rat& a) { return rat_sqrt(a); }
inline std::optional<Rat> field_cbrt(const Rat& a) {
  auto n = perfect_root(a.num() >= 0 ? a.num() : -a.num(), 3);
  auto d = perfect_root(a.den(), 3);
  if (!n || !d) return std::nullopt;
  Rat r(*n, *d);
  if (a.num() < 0) r = -r;
  return r;
}
inline std::optional<FqElem> field_sqrt(const FqElem& a) { return fq_sqrt(a); }
inline std::optional<FqElem> field_cbrt(const FqElem& a) { return fq_nth_root(a, 3); }

// sextic twist for y^2 = x^3 + B models (B may be any polynomial), quadratic
// twist for general models (completed square first).
template <class K>
TwistResult<K> twist(const WModel<K>& E, const K& d, bool allow_large_chi = false) {
  if (d.is_zero()) throw std::invalid_argument("twist: d = 0");
  TwistResult<K> out;
  bool j0_shape = E.a1.is_zero() && E.a2.is_zero() && E.a3.is_zero() && E.a4.is_zero();
  if (j0_shape) {
    out.model = make_model(E.a1, E.a2, E.a3, E.a4, E.a6.scaled(d), 0, allow_large_chi);
    auto cr = field_cbrt(d);
    auto sr = field_sqrt(d);
    if (cr && sr) {
      K beta = *cr, gamma = *sr;
      out.transport_available = true;
      out.transport = [beta, gamma](const SectionPt<K>& P) {
        if (P.zero) return P;
        RatFunc<K> bx = P.x * RatFunc<K>(Poly<K>::constant(beta));
        RatFunc<K> gy = P.y * RatFunc<K>(Poly<K>::constant(gamma));
        return SectionPt<K>::affine(bx, gy);
      };
    } else {
      out.missing_minpoly = !cr ? "z^3 - (" + d.str() + ")" : "z^2 - (" + d.str() + ")";
    }
    return out;
  }
  // quadratic twist of the completed square model y^2 = x^3 + a2 x^2 + a4 x + a6
  auto cs = complete_square(E, allow_large_chi);
  const WModel<K>& S = cs.model;
  out.model = make_model(S.a1, S.a2.scaled(d), S.a3, S.a4.scaled(d * d),
                         S.a6.scaled(d * d * d), 0, allow_large_chi);
  auto sr = field_sqrt(d);
  if (sr) {
    K gamma = *sr;
    K dd = d;
    auto pre = cs.map;
    out.transport_available = true;
    out.transport = [gamma, dd, pre](const SectionPt<K>& P) {
      SectionPt<K> Q = pre.fwd(P);  // onto the completed-square model
      if (Q.zero) return Q;
      RatFunc<K> dx = Q.x * RatFunc<K>(Poly<K>::constant(dd));
      RatFunc<K> gy = Q.y * RatFunc<K>(Poly<K>::constant(dd * gamma));
      return SectionPt<K>::affine(dx, gy);
    };
  } else {
    out.missing_minpoly = "z^2 - (" + d.str() + ")";
  }
  return out;
}

// transport demanded but radicals missing: raise the documented error
template <class K>
SectionPt<K> twist_transport_or_throw(const TwistResult<K>& tw, const SectionPt<K>& P) {
  if (tw.transport_available) return tw.transport(P);
  throw ExtensionRequiredError("extension required", tw.missing_minpoly);
}

}  // namespace ellsurf
