#pragma once
// Integral-section search (brute-force and elimination backends), Frobenius
// action and field of definition over finite fields, and good-prime selection.

#include "ellsurf/groebner.hpp"
#include "ellsurf/heights.hpp"
#include "ellsurf/parallel.hpp"

namespace ellsurf {

template <class K>
struct SectionSet {
  WModel<K> E;
  std::vector<SectionPt<K>> sections;  // canonical order, no duplicates
  bool complete = false;
  std::string certificate;
};

// canonical comparison of sections by coefficient tuples
template <class K>
int section_cmp(const SectionPt<K>& a, const SectionPt<K>& b);

inline int elem_cmp(const Rat& a, const Rat& b) { return a < b ? -1 : (b < a ? 1 : 0); }
inline int elem_cmp(const FqElem& a, const FqElem& b) { return FqElem::cmp(a, b); }

template <class K>
int poly_cmp_generic(const Poly<K>& a, const Poly<K>& b) {
  if (a.deg() != b.deg()) return a.deg() < b.deg() ? -1 : 1;
  for (size_t i = a.c.size(); i-- > 0;) {
    int c = elem_cmp(a.c[i], b.c[i]);
    if (c) return c;
  }
  return 0;
}

template <class K>
int section_cmp(const SectionPt<K>& a, const SectionPt<K>& b) {
  if (a.zero != b.zero) return a.zero ? -1 : 1;
  if (a.zero) return 0;
  int c = poly_cmp_generic(a.x.num, b.x.num);
  if (c) return c;
  c = poly_cmp_generic(a.x.den, b.x.den);
  if (c) return c;
  c = poly_cmp_generic(a.y.num, b.y.num);
  if (c) return c;
  return poly_cmp_generic(a.y.den, b.y.den);
}

template <class K>
void canonical_sort(std::vector<SectionPt<K>>& v) {
  std::sort(v.begin(), v.end(),
            [](const SectionPt<K>& a, const SectionPt<K>& b) { return section_cmp(a, b) < 0; });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const SectionPt<K>& a, const SectionPt<K>& b) {
                        return section_cmp(a, b) == 0;
                      }),
          v.end());
}

// ---- brute backend ----------------------------------------------------------

inline constexpr double kBruteBudget = 2e9;  // allowed when q^(2 chi + 1) <= budget

// all integral sections with coefficients in the base field of E
SectionSet<FqElem> search_integral(const WModel<FqElem>& E, double budget = kBruteBudget);

// ---- coefficient ideal --------------------------------------------------------

// the coefficient system of the integral shape: x = sum a_i t^i (deg <= 2 chi),
// y = sum b_j t^j (deg <= 3 chi); variables ordered x-coeffs (descending
// degree) then y-coeffs (descending degree)
template <class K>
std::vector<MultiPoly<K>> section_ideal_gens(const WModel<K>& E) {
  unsigned chi = E.chi;
  if (chi > 2) throw std::invalid_argument("section_ideal: chi must be 1 or 2");
  size_t nx = 2 * chi + 1, ny = 3 * chi + 1, nv = nx + ny;
  const K ex = E.base().zero();
  using MP = MultiPoly<K>;
  // polynomials in t with MultiPoly coefficients: represent as vector<MP>
  using TP = std::vector<MP>;  // index = t-degree
  auto tmul = [&](const TP& f, const TP& g) {
    TP r(f.size() + g.size() - 1, MP(nv, ex));
    for (size_t i = 0; i < f.size(); ++i)
      for (size_t j = 0; j < g.size(); ++j) r[i + j] = r[i + j] + f[i] * g[j];
    return r;
  };
  auto tadd = [&](TP f, const TP& g) {
    if (f.size() < g.size()) f.resize(g.size(), MP(nv, ex));
    for (size_t j = 0; j < g.size(); ++j) f[j] = f[j] + g[j];
    return f;
  };
  auto tneg = [&](TP f) {
    for (auto& m : f) m = -m;
    return f;
  };
  auto lift_poly = [&](const Poly<K>& p) {
    TP r(std::max<long>(p.deg() + 1, 1), MP(nv, ex));
    for (size_t i = 0; i < p.c.size(); ++i) r[i] = MP::constant(nv, p.c[i]);
    return r;
  };
  // x(t), y(t) with unknown coefficients; variable 0 is the leading x-coeff
  TP X(nx, MP(nv, ex)), Y(ny, MP(nv, ex));
  for (size_t i = 0; i < nx; ++i) X[nx - 1 - i] = MP::var(nv, i, ex);
  for (size_t j = 0; j < ny; ++j) Y[ny - 1 - j] = MP::var(nv, nx + j, ex);
  // y^2 + a1 x y + a3 y - x^3 - a2 x^2 - a4 x - a6
  TP lhs = tmul(Y, Y);
  lhs = tadd(lhs, tmul(lift_poly(E.a1), tmul(X, Y)));
  lhs = tadd(lhs, tmul(lift_poly(E.a3), Y));
  lhs = tadd(lhs, tneg(tmul(X, tmul(X, X))));
  lhs = tadd(lhs, tneg(tmul(lift_poly(E.a2), tmul(X, X))));
  lhs = tadd(lhs, tneg(tmul(lift_poly(E.a4), X)));
  lhs = tadd(lhs, tneg(lift_poly(E.a6)));
  std::vector<MP> gens;
  for (auto& m : lhs)
    if (!m.is_zero()) gens.push_back(m);
  return gens;
}

// elimination backend over F_q: the full geometric section set, expanded into
// the caller-chosen field `big` (containing all coordinate fields)
SectionSet<FqElem> search_via_ideal(const WModel<FqElem>& E, FqPtr big = nullptr);

// elimination backend over Q: squarefree coordinate eliminants, one per
// unknown coefficient (input material for the splitting-field machinery)
std::vector<QPoly> coordinate_eliminants(const WModel<Rat>& E);

// the degrees (with multiplicity one per Frobenius orbit) of the geometric
// section set over F_q; cheap backend-independent fingerprint
std::vector<std::uint32_t> section_degrees(const WModel<FqElem>& E);

// ---- Frobenius --------------------------------------------------------------

struct FrobeniusData {
  std::uint32_t base_k = 1;                      // sections live over F_{p^k}, base q = p^base_q_k
  std::uint32_t q_k = 1;                         // Frobenius is x -> x^(p^q_k)
  std::vector<std::vector<size_t>> orbits;       // index partition of the section list
  std::vector<std::uint32_t> orbit_degrees;      // minimal field degree per orbit
  std::uint32_t fod_degree = 1;                  // lcm of orbit degrees
};

// S must be closed under the q-power map on coefficients (q = p^q_k)
FrobeniusData frobenius_orbits(const SectionSet<FqElem>& S, std::uint32_t q_k);

// apply coefficient-wise Frobenius x -> x^(p^q_k)
SectionPt<FqElem> frobenius_section(const SectionPt<FqElem>& P, std::uint32_t q_k);

// ---- good primes -------------------------------------------------------------

// smallest p >= 5 with good reduction: denominators invertible, the fibre
// inventory (symbols with geometric multiplicities) preserved, and p not
// dividing any entry of `avoid`
std::uint64_t choose_good_prime(const WModel<Rat>& E, const std::vector<Int>& avoid = {},
                                std::uint64_t start = 5);

// reduce a rational model mod p
WModel<FqElem> reduce_model(const WModel<Rat>& E, const FqPtr& F);
SectionPt<FqElem> reduce_section(const SectionPt<Rat>& P, const FqPtr& F);

}  // namespace ellsurf
