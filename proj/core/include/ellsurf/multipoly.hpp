#pragma once
// Sparse multivariate polynomials over an exact field, with lex / grevlex
// monomial orders.  Terms live in a map keyed descending by the active order,
// so reductions merge in O(log) per touched term.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellsurf/numeric.hpp"
#include "ellsurf/poly.hpp"

namespace ellsurf {

using ExpVec = std::vector<unsigned>;

enum class MonOrder { Lex, GrevLex };

inline unsigned total_deg(const ExpVec& e) {
  unsigned s = 0;
  for (unsigned x : e) s += x;
  return s;
}

// true if a < b in the given order (variable 0 is the largest)
inline bool mon_less(const ExpVec& a, const ExpVec& b, MonOrder o) {
  if (o == MonOrder::Lex) {
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
  unsigned da = total_deg(a), db = total_deg(b);
  if (da != db) return da < db;
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

struct MonCmpDesc {
  MonOrder o = MonOrder::Lex;
  bool operator()(const ExpVec& a, const ExpVec& b) const { return mon_less(b, a, o); }
};

inline bool mon_divides(const ExpVec& a, const ExpVec& b) {  // a | b
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline ExpVec mon_lcm(const ExpVec& a, const ExpVec& b) {
  ExpVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline ExpVec mon_mul(const ExpVec& a, const ExpVec& b) {
  ExpVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline ExpVec mon_div(const ExpVec& a, const ExpVec& b) {  // a / b, requires b | a
  ExpVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

template <class K>
struct MultiPoly {
  using TermMap = std::map<ExpVec, K, MonCmpDesc>;
  size_t nvars = 0;
  K base;  // zero exemplar of the field
  TermMap terms;

  MultiPoly() = default;
  MultiPoly(size_t nv, const K& zero_ex, MonOrder o = MonOrder::Lex)
      : nvars(nv), base(zero_ex.zero()), terms(MonCmpDesc{o}) {}

  MonOrder order() const { return terms.key_comp().o; }
  bool is_zero() const { return terms.empty(); }
  const ExpVec& lead_mon() const { return terms.begin()->first; }
  const K& lead_coeff() const { return terms.begin()->second; }

  void add_term(const ExpVec& e, const K& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  static MultiPoly var(size_t nv, size_t i, const K& zero_ex, MonOrder o = MonOrder::Lex) {
    MultiPoly r(nv, zero_ex, o);
    ExpVec e(nv, 0);
    e[i] = 1;
    r.terms.emplace(e, zero_ex.one());
    return r;
  }
  static MultiPoly constant(size_t nv, const K& v, MonOrder o = MonOrder::Lex) {
    MultiPoly r(nv, v, o);
    if (!v.is_zero()) r.terms.emplace(ExpVec(nv, 0), v);
    return r;
  }

  MultiPoly with_order(MonOrder o) const {
    MultiPoly r(nvars, base, o);
    for (auto& [e, c] : terms) r.terms.emplace(e, c);
    return r;
  }

  MultiPoly operator-() const {
    MultiPoly r = *this;
    for (auto& [e, c] : r.terms) c = -c;
    return r;
  }
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) {
    for (auto& [e, c] : b.terms) a.add_term(e, c);
    return a;
  }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) {
    for (auto& [e, c] : b.terms) a.add_term(e, -c);
    return a;
  }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r(a.nvars, a.base, a.order());
    for (auto& [ea, ca] : a.terms)
      for (auto& [eb, cb] : b.terms) r.add_term(mon_mul(ea, eb), ca * cb);
    return r;
  }
  MultiPoly scaled(const K& s) const {
    MultiPoly r(nvars, base, order());
    if (s.is_zero()) return r;
    for (auto& [e, c] : terms) r.terms.emplace(e, c * s);
    return r;
  }
  // subtract s * x^e * g in place
  void sub_mul(const K& s, const ExpVec& e, const MultiPoly& g) {
    for (auto& [eg, cg] : g.terms) add_term(mon_mul(e, eg), -(s * cg));
  }
  MultiPoly term_mul(const ExpVec& e, const K& c) const {
    MultiPoly r(nvars, base, order());
    if (c.is_zero()) return r;
    for (auto& [em, cm] : terms) r.terms.emplace(mon_mul(em, e), cm * c);
    return r;
  }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (a.terms.size() != b.terms.size()) return false;
    auto ia = a.terms.begin();
    auto ib = b.terms.begin();
    for (; ia != a.terms.end(); ++ia, ++ib)
      if (ia->first != ib->first || !(ia->second == ib->second)) return false;
    return true;
  }

  MultiPoly substitute(size_t i, const K& v) const {
    MultiPoly r(nvars, base, order());
    for (auto& [e, c] : terms) {
      K cc = c;
      for (unsigned t = 0; t < e[i]; ++t) cc = cc * v;
      ExpVec e2 = e;
      e2[i] = 0;
      r.add_term(e2, cc);
    }
    return r;
  }

  template <class L, class Fn>
  MultiPoly<L> map_coeffs(const L& zero_ex, Fn&& fn) const {
    MultiPoly<L> r(nvars, zero_ex, order());
    for (auto& [e, c] : terms) r.add_term(e, fn(c));
    return r;
  }

  bool only_vars_from(size_t from) const {
    for (auto& [e, c] : terms)
      for (size_t i = 0; i < from; ++i)
        if (e[i]) return false;
    return true;
  }
  bool univariate_in(size_t i) const {
    for (auto& [e, c] : terms)
      for (size_t j = 0; j < nvars; ++j)
        if (j != i && e[j]) return false;
    return true;
  }
  Poly<K> to_univariate(size_t i) const {
    Poly<K> r(base);
    for (auto& [e, c] : terms) {
      if (e[i] >= r.c.size()) r.c.resize(e[i] + 1, base);
      r.c[e[i]] += c;
    }
    r.normalize();
    return r;
  }

  std::string str(const std::vector<std::string>& names) const {
    if (terms.empty()) return "0";
    std::string s;
    for (auto& [e, c] : terms) {
      if (!s.empty()) s += " + ";
      s += c.str();
      for (size_t i = 0; i < nvars; ++i) {
        if (!e[i]) continue;
        s += "*" + names[i];
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
      }
    }
    return s;
  }
};

}  // namespace ellsurf
