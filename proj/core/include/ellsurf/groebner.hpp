#pragma once
// Buchberger Groebner-basis engine with the coprime-lead and chain criteria,
// elimination, and solution enumeration for zero-dimensional ideals over F_q.
// Order convention everywhere: variable 0 is the largest.

#include <list>
#include <optional>
#include <set>

#include "ellsurf/factor.hpp"
#include "ellsurf/finite_field.hpp"
#include "ellsurf/multipoly.hpp"

namespace ellsurf {

template <class K>
struct IdealBasis {
  std::vector<MultiPoly<K>> gens;
  MonOrder order = MonOrder::Lex;
  bool is_groebner = false;
};

// configurable reduction budget; a runaway computation aborts with a
// diagnostic instead of hanging
inline constexpr std::uint64_t kDefaultGroebnerBudget = 4000000;

namespace gbdetail {

// coefficient renormalization hook: integer-primitive over Q, monic over F_q
inline void renorm(MultiPoly<Rat>& f) {
  if (f.is_zero()) return;
  Int den = 1, num = 0;
  for (auto& [e, c] : f.terms) den = lcm(den, c.den());
  for (auto& [e, c] : f.terms) num = gcd(num, c.num() * (den / c.den()));
  if (num == 0) num = 1;
  Rat s(den, num);
  if (f.lead_coeff() < Rat(0)) s = -s;
  for (auto& [e, c] : f.terms) c = c * s;
}

template <class K>
inline void renorm(MultiPoly<K>& f) {
  if (f.is_zero()) return;
  K li = f.lead_coeff().inv();
  for (auto& [e, c] : f.terms) c = c * li;
}

}  // namespace gbdetail

// normal form of f modulo the set G (full reduction of every term)
template <class K>
MultiPoly<K> normal_form(MultiPoly<K> f, const std::vector<MultiPoly<K>>& G,
                         std::uint64_t* budget = nullptr) {
  MultiPoly<K> rem(f.nvars, f.base, f.order());
  while (!f.is_zero()) {
    if (budget) {
      if (*budget == 0)
        throw std::runtime_error("groebner: reduction budget exhausted (increase budget)");
      --*budget;
    }
    bool reduced = false;
    for (auto& g : G) {
      if (g.is_zero()) continue;
      if (mon_divides(g.lead_mon(), f.lead_mon())) {
        ExpVec e = mon_div(f.lead_mon(), g.lead_mon());
        K c = f.lead_coeff() / g.lead_coeff();
        f.sub_mul(c, e, g);
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      rem.terms.emplace(f.lead_mon(), f.lead_coeff());
      f.terms.erase(f.terms.begin());
    }
  }
  return rem;
}

template <class K>
MultiPoly<K> s_poly(const MultiPoly<K>& f, const MultiPoly<K>& g) {
  ExpVec l = mon_lcm(f.lead_mon(), g.lead_mon());
  MultiPoly<K> a = f.term_mul(mon_div(l, f.lead_mon()), g.lead_coeff());
  a.sub_mul(f.lead_coeff(), mon_div(l, g.lead_mon()), g);
  return a;
}

// reduced Groebner basis via Buchberger; deterministic output
template <class K>
IdealBasis<K> buchberger(const std::vector<MultiPoly<K>>& gens_in, MonOrder order,
                         std::uint64_t budget = kDefaultGroebnerBudget) {
  std::vector<MultiPoly<K>> G;
  for (auto& g0 : gens_in) {
    MultiPoly<K> g = g0.order() == order ? g0 : g0.with_order(order);
    if (!g.is_zero()) {
      gbdetail::renorm(g);
      G.push_back(std::move(g));
    }
  }
  IdealBasis<K> out;
  out.order = order;
  if (G.empty()) {
    out.is_groebner = true;
    return out;
  }
  // pair queue keyed by the lcm (normal selection) + O(log) pending lookups
  struct PairCmp {
    MonOrder o;
    bool operator()(const std::tuple<ExpVec, size_t, size_t>& a,
                    const std::tuple<ExpVec, size_t, size_t>& b) const {
      if (std::get<0>(a) != std::get<0>(b)) return mon_less(std::get<0>(a), std::get<0>(b), o);
      if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
      return std::get<2>(a) < std::get<2>(b);
    }
  };
  std::set<std::tuple<ExpVec, size_t, size_t>, PairCmp> pairs(PairCmp{order});
  std::set<std::pair<size_t, size_t>> pending;
  auto lcm_of = [&](size_t i, size_t j) { return mon_lcm(G[i].lead_mon(), G[j].lead_mon()); };
  auto push_pairs_for = [&](size_t j) {
    for (size_t i = 0; i < j; ++i) {
      pairs.insert({lcm_of(i, j), i, j});
      pending.insert({i, j});
    }
  };
  auto run_pairs = [&](bool use_chain) {
    while (!pairs.empty()) {
      auto [l, pi, pj] = *pairs.begin();
      pairs.erase(pairs.begin());
      pending.erase({pi, pj});
      ExpVec prod = mon_mul(G[pi].lead_mon(), G[pj].lead_mon());
      if (prod == l) continue;  // coprime-lead criterion
      if (use_chain) {
        bool skip = false;
        for (size_t k = 0; k < G.size() && !skip; ++k) {
          if (k == pi || k == pj) continue;
          if (!mon_divides(G[k].lead_mon(), l)) continue;
          bool ik_pending = pending.count({std::min(pi, k), std::max(pi, k)}) > 0;
          bool jk_pending = pending.count({std::min(pj, k), std::max(pj, k)}) > 0;
          if (!ik_pending && !jk_pending) skip = true;
        }
        if (skip) continue;
      }
      MultiPoly<K> h = normal_form(s_poly(G[pi], G[pj]), G, &budget);
      if (h.is_zero()) continue;
      gbdetail::renorm(h);
      G.push_back(std::move(h));
      push_pairs_for(G.size() - 1);
    }
  };
  for (size_t j = 1; j < G.size(); ++j) push_pairs_for(j);
  run_pairs(true);

  while (true) {
    // minimalize: drop generators whose lead is divisible by another lead
    std::vector<MultiPoly<K>> minimal;
    for (size_t i = 0; i < G.size(); ++i) {
      bool redundant = false;
      for (size_t j = 0; j < G.size() && !redundant; ++j) {
        if (i == j) continue;
        if (mon_divides(G[j].lead_mon(), G[i].lead_mon())) {
          if (G[j].lead_mon() == G[i].lead_mon() && j > i) continue;  // keep first
          redundant = true;
        }
      }
      if (!redundant) minimal.push_back(G[i]);
    }
    // fully reduce each against the others and make monic
    std::vector<MultiPoly<K>> reduced;
    for (size_t i = 0; i < minimal.size(); ++i) {
      std::vector<MultiPoly<K>> others;
      for (size_t j = 0; j < minimal.size(); ++j)
        if (j != i) others.push_back(minimal[j]);
      MultiPoly<K> h = normal_form(minimal[i], others, &budget);
      if (h.is_zero()) continue;
      K li = h.lead_coeff().inv();
      for (auto& [e, c] : h.terms) c = c * li;
      reduced.push_back(std::move(h));
    }
    std::sort(reduced.begin(), reduced.end(), [&](const MultiPoly<K>& a, const MultiPoly<K>& b) {
      return mon_less(a.lead_mon(), b.lead_mon(), order);
    });
    // the skip criteria are heuristics; certify the basis by checking that
    // every S-polynomial reduces to zero, resuming Buchberger otherwise
    bool certified = true;
    MultiPoly<K> bad;
    for (size_t i = 0; i < reduced.size() && certified; ++i)
      for (size_t j = i + 1; j < reduced.size() && certified; ++j) {
        ExpVec prod = mon_mul(reduced[i].lead_mon(), reduced[j].lead_mon());
        if (prod == mon_lcm(reduced[i].lead_mon(), reduced[j].lead_mon())) continue;
        MultiPoly<K> h = normal_form(s_poly(reduced[i], reduced[j]), reduced, &budget);
        if (!h.is_zero()) {
          bad = h;
          certified = false;
        }
      }
    if (certified) {
      out.gens = std::move(reduced);
      out.is_groebner = true;
      return out;
    }
    gbdetail::renorm(bad);
    G = std::move(reduced);
    G.push_back(std::move(bad));
    pairs.clear();
    pending.clear();
    for (size_t j = 1; j < G.size(); ++j) push_pairs_for(j);
    run_pairs(false);
  }
}

// generators involving only the kept suffix of variables.  The lex order must
// place eliminated variables first (largest), which is variable-index order.
template <class K>
IdealBasis<K> eliminate(const IdealBasis<K>& I, size_t keep_from) {
  if (I.order != MonOrder::Lex)
    throw std::invalid_argument(
        "eliminate: order mismatch (lex with eliminated variables first required)");
  if (!I.is_groebner) throw std::invalid_argument("eliminate: input is not a Groebner basis");
  IdealBasis<K> out;
  out.order = I.order;
  out.is_groebner = true;
  for (auto& g : I.gens)
    if (g.only_vars_from(keep_from)) out.gens.push_back(g);
  return out;
}

// membership: f reduces to zero against a Groebner basis
template <class K>
bool ideal_contains(const IdealBasis<K>& I, const MultiPoly<K>& f) {
  std::uint64_t budget = kDefaultGroebnerBudget;
  auto g = f.order() == I.order ? f : f.with_order(I.order);
  return normal_form(g, I.gens, &budget).is_zero();
}

// staircase dimension of the quotient ring (finite iff zero-dimensional)
template <class K>
std::optional<size_t> quotient_dim(const IdealBasis<K>& I, size_t nvars) {
  std::vector<unsigned> bound(nvars, 0);
  for (auto& g : I.gens) {
    const ExpVec& e = g.lead_mon();
    size_t nz = 0, idx = 0;
    for (size_t i = 0; i < nvars; ++i)
      if (e[i]) {
        ++nz;
        idx = i;
      }
    if (nz == 1) bound[idx] = bound[idx] ? std::min(bound[idx], e[idx]) : e[idx];
    if (nz == 0) return 0;  // ideal contains a unit
  }
  for (auto b : bound)
    if (!b) return std::nullopt;  // positive-dimensional
  size_t count = 0;
  ExpVec cur(nvars, 0);
  while (true) {
    bool in_ideal = false;
    for (auto& g : I.gens)
      if (mon_divides(g.lead_mon(), cur)) {
        in_ideal = true;
        break;
      }
    if (!in_ideal) ++count;
    size_t i = 0;
    for (; i < nvars; ++i) {
      if (cur[i] + 1 < bound[i]) {
        ++cur[i];
        break;
      }
      cur[i] = 0;
    }
    if (i == nvars) break;
  }
  return count;
}

// ---- solution enumeration over F_q -----------------------------------------

struct VarietyPoint {
  FqPtr field;                 // flat field containing all coordinates
  std::vector<FqElem> coords;  // one per variable, in `field`
  std::uint32_t degree = 1;    // [F_q(coords) : F_q]
};

// all solutions of a zero-dimensional ideal over the algebraic closure, one
// representative per Frobenius orbit, with exact coordinate-field degrees.
// Throws "not zero-dimensional" on positive-dimensional input.
std::vector<VarietyPoint> variety_fq(const IdealBasis<FqElem>& I, size_t nvars, const FqPtr& F);

}  // namespace ellsurf
