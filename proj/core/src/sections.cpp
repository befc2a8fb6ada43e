#include "ellsurf/sections.hpp"

#include "ellsurf/lll.hpp"

#include <mutex>
#include <numeric>

namespace ellsurf {

namespace {

// enumerate all elements of F_q in a fixed order
std::vector<FqElem> all_elements(const FqPtr& F) {
  std::vector<FqElem> out;
  std::vector<std::uint64_t> co(F->k, 0);
  while (true) {
    out.push_back(FqElem::make(F, co));
    size_t i = 0;
    for (; i < F->k; ++i) {
      if (++co[i] < F->p) break;
      co[i] = 0;
    }
    if (i == F->k) break;
  }
  return out;
}

}  // namespace

SectionSet<FqElem> search_integral(const WModel<FqElem>& E, double budget) {
  const FqPtr& F = E.base().F;
  double q = 1;
  for (std::uint32_t i = 0; i < F->k; ++i) q *= static_cast<double>(F->p);
  unsigned chi = E.chi;
  if (chi > 2) throw std::invalid_argument("search_integral: chi must be 1 or 2");
  double space = 1;
  for (unsigned i = 0; i < 2 * chi + 1; ++i) space *= q;
  if (space > budget)
    throw std::runtime_error("use elimination backend: q^(2 chi + 1) = " +
                             std::to_string(space) + " exceeds the brute budget " +
                             std::to_string(budget));
  auto cs = complete_square(E);
  const WModel<FqElem>& S = cs.model;
  auto elems = all_elements(F);
  size_t nq = elems.size();
  size_t nx = 2 * chi + 1;
  // partition the scan over the leading coefficient range
  std::vector<std::vector<SectionPt<FqElem>>> found(nq);
  parallel_for(nq, [&](size_t lead) {
    std::vector<size_t> idx(nx - 1, 0);
    FqPoly x(FqElem(F, 0));
    while (true) {
      x.c.assign(nx, FqElem(F, 0));
      for (size_t i = 0; i + 1 < nx; ++i) x.c[i] = elems[idx[i]];
      x.c[nx - 1] = elems[lead];
      x.normalize();
      FqPoly rhs = x * x * x + S.a2 * x * x + S.a4 * x + S.a6;
      auto y = poly_sqrt(rhs);
      if (y) {
        auto P1 = cs.map.bwd(SectionPt<FqElem>::affine(RatFunc<FqElem>(x), RatFunc<FqElem>(*y)));
        found[lead].push_back(P1);
        auto P2 = cs.map.bwd(SectionPt<FqElem>::affine(RatFunc<FqElem>(x), RatFunc<FqElem>(-*y)));
        if (!(P1 == P2)) found[lead].push_back(P2);
      }
      size_t i = 0;
      for (; i + 1 < nx; ++i) {
        if (++idx[i] < nq) break;
        idx[i] = 0;
      }
      if (i + 1 >= nx) break;
    }
  });
  SectionSet<FqElem> out;
  out.E = E;
  for (auto& part : found)
    for (auto& s : part) out.sections.push_back(std::move(s));
  canonical_sort(out.sections);
  out.complete = true;
  out.certificate = "exhaustive scan of x-coefficients over " + F->label();
  return out;
}

SectionSet<FqElem> search_via_ideal(const WModel<FqElem>& E, FqPtr big) {
  const FqPtr& F = E.base().F;
  auto gens = section_ideal_gens(E);
  size_t nv = 2 * E.chi + 1 + 3 * E.chi + 1;
  auto I = buchberger(gens, MonOrder::Lex);
  std::vector<VarietyPoint> pts;
  bool empty_ideal =
      I.gens.size() == 1 && I.gens[0].terms.size() == 1 && total_deg(I.gens[0].lead_mon()) == 0;
  if (!empty_ideal) pts = variety_fq(I, nv, F);
  // choose the common field
  std::uint32_t M = 1;
  for (auto& pt : pts) M = static_cast<std::uint32_t>(std::lcm(M, pt.degree));
  if (!big) big = M * F->k == F->k ? F : fq_field(F->p, M * F->k);
  if (big->k % F->k != 0) throw std::invalid_argument("search_via_ideal: bad target field");
  SectionSet<FqElem> out;
  // the model over the big field
  auto embF = fq_embedding(F, big);
  auto lift_poly = [&](const FqPoly& f) {
    FqPoly r(FqElem(big, 0));
    for (auto& c : f.c) r.c.push_back(embF(c));
    r.normalize();
    return r;
  };
  out.E = make_model(lift_poly(E.a1), lift_poly(E.a2), lift_poly(E.a3), lift_poly(E.a4),
                     lift_poly(E.a6), E.chi, true);
  size_t nx = 2 * E.chi + 1;
  for (auto& pt : pts) {
    if (big->k % pt.field->k != 0)
      throw std::runtime_error("search_via_ideal: target field does not contain a coordinate field");
    auto emb = fq_embedding(pt.field, big);
    std::vector<FqElem> coords;
    coords.reserve(pt.coords.size());
    for (auto& c : pt.coords) coords.push_back(emb(c));
    // expand the Frobenius orbit: apply x -> x^(p^k) repeatedly
    for (std::uint32_t j = 0; j < pt.degree; ++j) {
      FqPoly x(FqElem(big, 0)), y(FqElem(big, 0));
      x.c.assign(nx, FqElem(big, 0));
      y.c.assign(pt.coords.size() - nx, FqElem(big, 0));
      for (size_t i = 0; i < nx; ++i) x.c[nx - 1 - i] = coords[i];
      size_t ny = pt.coords.size() - nx;
      for (size_t i = 0; i < ny; ++i) y.c[ny - 1 - i] = coords[nx + i];
      x.normalize();
      y.normalize();
      out.sections.push_back(SectionPt<FqElem>::affine(RatFunc<FqElem>(x), RatFunc<FqElem>(y)));
      for (auto& c : coords) c = c.frobenius_iter(F->k);
    }
  }
  canonical_sort(out.sections);
  // verify each section satisfies the equation (bug trap, cheap)
  for (auto& s : out.sections)
    if (!on_curve(out.E, s)) throw std::runtime_error("search_via_ideal: spurious solution");
  out.complete = true;
  out.certificate = "elimination backend: complete over the algebraic closure";
  return out;
}

std::vector<std::uint32_t> section_degrees(const WModel<FqElem>& E) {
  const FqPtr& F = E.base().F;
  auto gens = section_ideal_gens(E);
  size_t nv = 2 * E.chi + 1 + 3 * E.chi + 1;
  auto I = buchberger(gens, MonOrder::Lex);
  std::vector<std::uint32_t> out;
  bool empty_ideal =
      I.gens.size() == 1 && I.gens[0].terms.size() == 1 && total_deg(I.gens[0].lead_mon()) == 0;
  if (empty_ideal) return out;
  for (auto& pt : variety_fq(I, nv, F)) out.push_back(pt.degree);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<QPoly> coordinate_eliminants(const WModel<Rat>& E) {
  // one Groebner basis; per-coordinate eliminants as the squarefree parts of
  // the characteristic polynomials of the multiplication maps on the quotient
  size_t nv = 2 * E.chi + 1 + 3 * E.chi + 1;
  auto gens = section_ideal_gens(E);
  auto I = buchberger(gens, MonOrder::Lex);
  auto dim = quotient_dim(I, nv);
  if (!dim) throw std::runtime_error("not zero-dimensional");
  size_t d = *dim;
  if (d == 0) throw std::runtime_error("section ideal is (1): no sections of this shape");
  // staircase basis
  std::vector<ExpVec> basis;
  {
    std::vector<unsigned> bound(nv, 0);
    for (auto& g : I.gens) {
      const ExpVec& e = g.lead_mon();
      size_t nz = 0, idx = 0;
      for (size_t i = 0; i < nv; ++i)
        if (e[i]) {
          ++nz;
          idx = i;
        }
      if (nz == 1) bound[idx] = bound[idx] ? std::min(bound[idx], e[idx]) : e[idx];
    }
    ExpVec cur(nv, 0);
    while (true) {
      bool in_ideal = false;
      for (auto& g : I.gens)
        if (mon_divides(g.lead_mon(), cur)) {
          in_ideal = true;
          break;
        }
      if (!in_ideal) basis.push_back(cur);
      size_t i = 0;
      for (; i < nv; ++i) {
        if (cur[i] + 1 < bound[i]) {
          ++cur[i];
          break;
        }
        cur[i] = 0;
      }
      if (i == nv) break;
    }
  }
  std::map<ExpVec, size_t> mono_index;
  for (size_t i = 0; i < basis.size(); ++i) mono_index[basis[i]] = i;
  std::vector<QPoly> out;
  std::uint64_t budget = kDefaultGroebnerBudget;
  for (size_t v = 0; v < nv; ++v) {
    RatMat Mv(d, d);
    for (size_t j = 0; j < d; ++j) {
      MultiPoly<Rat> m(nv, Rat(0));
      ExpVec e = basis[j];
      e[v] += 1;
      m.add_term(e, Rat(1));
      auto nf = normal_form(m, I.gens, &budget);
      for (auto& [em, cm] : nf.terms) {
        auto it = mono_index.find(em);
        if (it == mono_index.end()) throw std::runtime_error("coordinate_eliminants: basis error");
        Mv(it->second, j) = cm;
      }
    }
    auto cp = rat_charpoly(Mv);
    QPoly f(Rat(0));
    f.c = cp;
    f.normalize();
    out.push_back(squarefree_part(f));
  }
  return out;
}

SectionPt<FqElem> frobenius_section(const SectionPt<FqElem>& P, std::uint32_t q_k) {
  if (P.zero) return P;
  auto fr = [&](const FqPoly& f) {
    FqPoly r = f;
    for (auto& c : r.c) c = c.frobenius_iter(q_k);
    return r;
  };
  return SectionPt<FqElem>::affine(RatFunc<FqElem>(fr(P.x.num), fr(P.x.den)),
                                   RatFunc<FqElem>(fr(P.y.num), fr(P.y.den)));
}

FrobeniusData frobenius_orbits(const SectionSet<FqElem>& S, std::uint32_t q_k) {
  FrobeniusData out;
  out.q_k = q_k;
  out.base_k = S.sections.empty() ? q_k : S.sections[0].x.num.base.F->k;
  auto find = [&](const SectionPt<FqElem>& P) -> long {
    for (size_t i = 0; i < S.sections.size(); ++i)
      if (section_cmp(S.sections[i], P) == 0) return static_cast<long>(i);
    return -1;
  };
  std::vector<int> seen(S.sections.size(), 0);
  for (size_t i = 0; i < S.sections.size(); ++i) {
    if (seen[i]) continue;
    std::vector<size_t> orbit;
    size_t cur = i;
    while (!seen[cur]) {
      seen[cur] = 1;
      orbit.push_back(cur);
      auto img = frobenius_section(S.sections[cur], q_k);
      long j = find(img);
      if (j < 0) throw std::runtime_error("section set incomplete");
      cur = static_cast<size_t>(j);
    }
    out.orbit_degrees.push_back(static_cast<std::uint32_t>(orbit.size()));
    out.fod_degree = static_cast<std::uint32_t>(std::lcm<std::uint64_t>(out.fod_degree, orbit.size()));
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

WModel<FqElem> reduce_model(const WModel<Rat>& E, const FqPtr& F) {
  return make_model(fq_poly_from_q(E.a1, F), fq_poly_from_q(E.a2, F), fq_poly_from_q(E.a3, F),
                    fq_poly_from_q(E.a4, F), fq_poly_from_q(E.a6, F), E.chi, true);
}

SectionPt<FqElem> reduce_section(const SectionPt<Rat>& P, const FqPtr& F) {
  if (P.zero) return SectionPt<FqElem>::zero_of(FqElem(F, 0));
  return SectionPt<FqElem>::affine(
      RatFunc<FqElem>(fq_poly_from_q(P.x.num, F), fq_poly_from_q(P.x.den, F)),
      RatFunc<FqElem>(fq_poly_from_q(P.y.num, F), fq_poly_from_q(P.y.den, F)));
}

std::uint64_t choose_good_prime(const WModel<Rat>& E, const std::vector<Int>& avoid,
                                std::uint64_t start) {
  auto invq = invariants(E);
  // fingerprint over Q: multiset of (symbol, geometric multiplicity)
  auto fingerprint_q = [&] {
    std::map<std::string, long> fp;
    for (auto& p : bad_places(E)) {
      auto f = kodaira_type(E, p);
      fp[f.name()] += p.degree();
    }
    return fp;
  }();
  for (std::uint64_t p = std::max<std::uint64_t>(start, 5);; p = next_prime(Int((unsigned long)p)).get_ui()) {
    if (!is_prime(Int((unsigned long)p))) continue;
    Int pz((unsigned long)p);
    bool bad = false;
    for (auto& a : avoid)
      if (a != 0 && a % pz == 0) bad = true;
    // denominators and leading structure of the discriminant
    auto check_poly = [&](const QPoly& f) {
      for (auto& c : f.c)
        if (c.den() % pz == 0) bad = true;
    };
    check_poly(E.a1);
    check_poly(E.a2);
    check_poly(E.a3);
    check_poly(E.a4);
    check_poly(E.a6);
    if (!bad && invq.disc.lc().num() % pz == 0) bad = true;
    if (bad) continue;
    try {
      auto F = fq_field(p);
      auto Ep = reduce_model(E, F);
      auto invp = invariants(Ep);
      if (invp.disc.deg() != invq.disc.deg()) continue;
      std::map<std::string, long> fp;
      for (auto& pl : bad_places(Ep)) {
        auto f = kodaira_type(Ep, pl);
        fp[f.name()] += pl.degree();
      }
      if (fp == fingerprint_q) return p;
    } catch (const std::exception&) {
      continue;
    }
  }
}

}  // namespace ellsurf
