#pragma once
// Dense univariate polynomials over an exact field (Rat, FqElem, NfElem).
// Elements carry their field context; a Poly keeps a zero exemplar `base` so
// the zero polynomial still knows its coefficient field.

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellsurf/numeric.hpp"

namespace ellsurf {

template <class K>
struct Poly {
  K base;              // zero element of the coefficient field
  std::vector<K> c;    // ascending, normalized: c.empty() or c.back() != 0

  Poly() = default;
  explicit Poly(const K& zero_exemplar) : base(zero_exemplar.zero()) {}
  Poly(const K& zero_exemplar, std::vector<K> coeffs) : base(zero_exemplar.zero()), c(std::move(coeffs)) {
    normalize();
  }

  static Poly constant(const K& v) {
    Poly r(v);
    if (!v.is_zero()) r.c = {v};
    return r;
  }
  static Poly x(const K& zero_exemplar) {
    Poly r(zero_exemplar);
    r.c = {zero_exemplar.zero(), zero_exemplar.one()};
    return r;
  }
  static Poly x_pow(const K& zero_exemplar, size_t n) {
    Poly r(zero_exemplar);
    r.c.assign(n + 1, zero_exemplar.zero());
    r.c[n] = zero_exemplar.one();
    return r;
  }

  void normalize() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && c[0].is_one(); }
  // degree of 0 is -1
  long deg() const { return static_cast<long>(c.size()) - 1; }
  const K& lc() const {
    if (c.empty()) throw std::domain_error("Poly: lc of zero");
    return c.back();
  }
  K coeff(size_t i) const { return i < c.size() ? c[i] : base; }
  K operator[](size_t i) const { return coeff(i); }

  Poly operator-() const {
    Poly r = *this;
    for (auto& x : r.c) x = -x;
    return r;
  }
  Poly& operator+=(const Poly& o) {
    if (c.size() < o.c.size()) c.resize(o.c.size(), base);
    for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
    normalize();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (c.size() < o.c.size()) c.resize(o.c.size(), base);
    for (size_t i = 0; i < o.c.size(); ++i) c[i] -= o.c[i];
    normalize();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
  friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r(a.is_zero() ? b.base : a.base);
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, r.base);
    for (size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i].is_zero()) continue;
      for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    r.normalize();
    return r;
  }
  Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }
  Poly scaled(const K& s) const {
    Poly r = *this;
    for (auto& x : r.c) x = x * s;
    r.normalize();
    return r;
  }
  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c.size() != b.c.size()) return false;
    for (size_t i = 0; i < a.c.size(); ++i)
      if (!(a.c[i] == b.c[i])) return false;
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(lc().inv());
  }

  // division with remainder (field coefficients)
  friend void divrem(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
    q = Poly(a.base);
    r = a;
    if (a.deg() < b.deg()) return;
    K li = b.lc().inv();
    q.c.assign(a.c.size() - b.c.size() + 1, a.base);
    while (!r.is_zero() && r.deg() >= b.deg()) {
      size_t shift = r.c.size() - b.c.size();
      K coef = r.lc() * li;
      q.c[shift] = coef;
      for (size_t i = 0; i < b.c.size(); ++i) r.c[shift + i] -= coef * b.c[i];
      r.normalize();
    }
    q.normalize();
  }
  friend Poly operator/(const Poly& a, const Poly& b) {
    Poly q, r;
    divrem(a, b, q, r);
    return q;
  }
  friend Poly operator%(const Poly& a, const Poly& b) {
    Poly q, r;
    divrem(a, b, q, r);
    return r;
  }
  // exact division; throws when not divisible
  friend Poly exact_div(const Poly& a, const Poly& b) {
    Poly q, r;
    divrem(a, b, q, r);
    if (!r.is_zero()) throw std::domain_error("Poly: inexact division");
    return q;
  }

  Poly derivative() const {
    Poly r(base);
    if (c.size() < 2) return r;
    r.c.resize(c.size() - 1, base);
    for (size_t i = 1; i < c.size(); ++i) {
      K m = base;
      // i * c[i] via repeated addition only when i small; use scalar from one()
      K iv = base.zero();
      // build i in the prime field
      K one = base.one();
      unsigned long n = static_cast<unsigned long>(i);
      K acc = base.zero();
      K pw = one;
      while (n) {  // binary expansion of i
        if (n & 1) acc += pw;
        pw += pw;
        n >>= 1;
      }
      m = acc;
      r.c[i - 1] = c[i] * m;
    }
    r.normalize();
    return r;
  }

  K eval(const K& x) const {
    K r = base.zero();
    for (size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
  }
  // evaluate with coefficients mapped into another field by fn
  template <class L, class Fn>
  L eval_mapped(const L& x, Fn&& fn) const {
    L r = x.zero();
    for (size_t i = c.size(); i-- > 0;) r = r * x + fn(c[i]);
    return r;
  }
  Poly compose(const Poly& g) const {
    Poly r(base);
    for (size_t i = c.size(); i-- > 0;) r = r * g + constant(c[i]);
    return r;
  }
  // x -> x + a
  Poly shift(const K& a) const {
    Poly g = x(base);
    g.c[0] = a;
    return compose(g);
  }
  Poly reverse() const {
    Poly r = *this;
    std::reverse(r.c.begin(), r.c.end());
    r.normalize();
    return r;
  }
  // multiply by x^n
  Poly shl(size_t n) const {
    if (is_zero()) return *this;
    Poly r(base);
    r.c.assign(c.size() + n, base);
    for (size_t i = 0; i < c.size(); ++i) r.c[n + i] = c[i];
    return r;
  }
  // divide by x^n (requires divisibility)
  Poly shr(size_t n) const {
    for (size_t i = 0; i < n && i < c.size(); ++i)
      if (!c[i].is_zero()) throw std::domain_error("Poly: shr drops nonzero terms");
    Poly r(base);
    if (c.size() > n) r.c.assign(c.begin() + n, c.end());
    return r;
  }
  // order of vanishing at 0 (trailing degree); -1 for zero poly
  long val_at_zero() const {
    for (size_t i = 0; i < c.size(); ++i)
      if (!c[i].is_zero()) return static_cast<long>(i);
    return -1;
  }

  std::string str(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string s;
    for (size_t i = c.size(); i-- > 0;) {
      if (c[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += coeff_str(c[i]);
      if (i >= 1) s += "*" + var;
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

 private:
  template <class T>
  static std::string coeff_str(const T& t) {
    return t.str();
  }
};

template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
  a.normalize();
  b.normalize();
  while (!b.is_zero()) {
    Poly<K> r = a % b.monic();
    a = b;
    b = r;
  }
  return a.is_zero() ? a : a.monic();
}

// extended gcd: returns (g, u, v) with u*a + v*b = g, g monic (or zero)
template <class K>
void poly_xgcd(const Poly<K>& a, const Poly<K>& b, Poly<K>& g, Poly<K>& u, Poly<K>& v) {
  Poly<K> r0 = a, r1 = b;
  Poly<K> s0 = Poly<K>::constant(a.base.one()), s1(a.base);
  Poly<K> t0(a.base), t1 = Poly<K>::constant(a.base.one());
  while (!r1.is_zero()) {
    Poly<K> q, r;
    divrem(r0, r1, q, r);
    r0 = r1; r1 = r;
    Poly<K> s = s0 - q * s1;
    s0 = s1; s1 = s;
    Poly<K> t = t0 - q * t1;
    t0 = t1; t1 = t;
  }
  g = r0;
  u = s0;
  v = t0;
  if (!g.is_zero()) {
    K li = g.lc().inv();
    g = g.scaled(li);
    u = u.scaled(li);
    v = v.scaled(li);
  }
}

// inverse of a modulo m (coprime); throws otherwise
template <class K>
Poly<K> poly_invmod(const Poly<K>& a, const Poly<K>& m) {
  Poly<K> g, u, v;
  poly_xgcd(a % m, m, g, u, v);
  if (g.deg() != 0) throw std::domain_error("poly_invmod: not coprime");
  return u % m;
}

template <class K>
Poly<K> poly_powmod(Poly<K> a, Int e, const Poly<K>& m) {
  Poly<K> r = Poly<K>::constant(m.base.one());
  a = a % m;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = (r * a) % m;
    a = (a * a) % m;
    e >>= 1;
  }
  return r;
}

// squarefree part over a characteristic-0 or large-p field (the p | deg edge
// cases are handled in factor_fq for finite fields)
template <class K>
Poly<K> squarefree_part(const Poly<K>& f) {
  if (f.is_zero()) throw std::domain_error("squarefree_part: zero input");
  Poly<K> d = f.derivative();
  if (d.is_zero()) return f.monic();  // caller beware in char p
  Poly<K> g = poly_gcd(f, d);
  return exact_div(f, g).monic();
}

// resultant via Euclidean remainder sequence over a field
template <class K>
K resultant(Poly<K> a, Poly<K> b) {
  if (a.is_zero() || b.is_zero()) return a.base.zero();
  K res = a.base.one();
  bool neg = false;
  while (b.deg() > 0) {
    Poly<K> r = a % b;
    long da = a.deg(), db = b.deg(), dr = r.is_zero() ? -1 : r.deg();
    if ((da % 2) && (db % 2)) neg = !neg;
    // res *= lc(b)^(da - dr)
    K lb = b.lc();
    long e = da - (dr < 0 ? 0 : dr);
    K acc = a.base.one();
    for (long i = 0; i < e; ++i) acc = acc * lb;
    res = res * acc;
    if (r.is_zero()) {
      return a.base.zero();  // common factor
    }
    a = b;
    b = r;
  }
  // b constant
  K lb = b.c.empty() ? a.base.zero() : b.c[0];
  if (lb.is_zero()) return a.base.zero();
  K acc = a.base.one();
  for (long i = 0; i < a.deg(); ++i) acc = acc * lb;
  res = res * acc;
  return neg ? -res : res;
}

template <class K>
K poly_discriminant(const Poly<K>& f) {
  if (f.deg() < 1) throw std::domain_error("discriminant: degree < 1");
  K r = resultant(f, f.derivative());
  K li = f.lc().inv();
  r = r * li;
  long n = f.deg();
  long s = (n * (n - 1) / 2) % 2;
  return s ? -r : r;
}

// content/primitive part for rational polynomials
Int poly_den_lcm(const Poly<Rat>& f);
// scale f by a positive rational making it primitive integer; returns the factor used
Poly<Rat> rat_poly_primitive(const Poly<Rat>& f, Rat* factor = nullptr);

using QPoly = Poly<Rat>;

inline Int poly_den_lcm(const Poly<Rat>& f) {
  Int l = 1;
  for (auto& x : f.c) l = lcm(l, x.den());
  return l;
}

inline Poly<Rat> rat_poly_primitive(const Poly<Rat>& f, Rat* factor) {
  if (f.is_zero()) {
    if (factor) *factor = Rat(1);
    return f;
  }
  Int l = poly_den_lcm(f);
  Int g = 0;
  for (auto& x : f.c) g = gcd(g, x.num() * (l / x.den()));
  if (g == 0) g = 1;
  Rat s(l, g);
  if (f.lc() < Rat(0)) s = -s;
  if (factor) *factor = s;
  return f.scaled(s);
}

}  // namespace ellsurf
