#pragma once
// Rational functions in t over an exact field: normalized num/den pairs
// (den monic, gcd(num, den) = 1).

#include "ellsurf/poly.hpp"

namespace ellsurf {

template <class K>
struct RatFunc {
  Poly<K> num, den;

  RatFunc() = default;
  explicit RatFunc(const Poly<K>& n) : num(n), den(Poly<K>::constant(n.base.one())) {}
  RatFunc(const Poly<K>& n, const Poly<K>& d) : num(n), den(d) { normalize(); }
  static RatFunc zero_of(const K& ex) { return RatFunc(Poly<K>(ex)); }

  void normalize() {
    if (den.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    if (num.is_zero()) {
      den = Poly<K>::constant(num.base.one());
      return;
    }
    Poly<K> g = poly_gcd(num, den);
    if (g.deg() > 0) {
      num = exact_div(num, g);
      den = exact_div(den, g);
    }
    K li = den.lc().inv();
    num = num.scaled(li);
    den = den.scaled(li);
  }

  bool is_zero() const { return num.is_zero(); }
  bool is_poly() const { return den.deg() == 0; }
  const Poly<K>& poly() const {
    if (!is_poly()) throw std::domain_error("RatFunc: not polynomial");
    return num;
  }

  RatFunc operator-() const {
    RatFunc r = *this;
    r.num = -r.num;
    return r;
  }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num * b.num, a.den * b.den);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
    return RatFunc(a.num * b.den, a.den * b.num);
  }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  // valuation at a monic irreducible place pi (multiplicity in num minus den);
  // huge positive value never occurs for nonzero functions
  long valuation(const Poly<K>& pi) const {
    if (is_zero()) throw std::domain_error("RatFunc: valuation of zero");
    auto count = [&](Poly<K> f) {
      long v = 0;
      while (true) {
        Poly<K> q, r;
        divrem(f, pi, q, r);
        if (!r.is_zero()) break;
        f = q;
        ++v;
      }
      return v;
    };
    return count(num) - count(den);
  }

  // degree of the pole at infinity: deg num - deg den
  long inf_degree() const {
    if (is_zero()) throw std::domain_error("RatFunc: degree of zero");
    return num.deg() - den.deg();
  }

  K eval(const K& t) const {
    K d = den.eval(t);
    if (d.is_zero()) throw std::domain_error("RatFunc: pole at evaluation point");
    return num.eval(t) * d.inv();
  }

  // substitute t -> g(t)
  RatFunc compose(const RatFunc& g) const {
    RatFunc rn = RatFunc::zero_of(num.base);
    RatFunc rd = RatFunc(Poly<K>::constant(num.base.one()));
    // Horner over g for num and den
    RatFunc acc_n = rn;
    for (size_t i = num.c.size(); i-- > 0;)
      acc_n = acc_n * g + RatFunc(Poly<K>::constant(num.c[i]));
    RatFunc acc_d = rn;
    for (size_t i = den.c.size(); i-- > 0;)
      acc_d = acc_d * g + RatFunc(Poly<K>::constant(den.c[i]));
    return acc_n / acc_d;
  }

  std::string str(const std::string& var = "t") const {
    if (is_poly()) return num.str(var);
    return "(" + num.str(var) + ")/(" + den.str(var) + ")";
  }
};

}  // namespace ellsurf
