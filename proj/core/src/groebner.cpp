#include "ellsurf/groebner.hpp"

namespace ellsurf {

namespace {

// substitute the last unsolved variable and recurse, extending the field as
// the eliminant factors dictate
void solve_rec(std::vector<MultiPoly<FqElem>> gens, size_t nvars, size_t var, FqPtr L,
               std::vector<FqElem> solved,  // values for vars [var+1 .. nvars), in L
               const FqPtr& baseF, std::vector<VarietyPoint>& out) {
  if (var == SIZE_MAX) {
    // all variables substituted: consistent iff every generator vanished
    for (auto& g : gens)
      if (!g.is_zero()) return;
    VarietyPoint pt;
    pt.field = L;
    pt.coords.assign(solved.rbegin(), solved.rend());
    pt.degree = L->k / baseF->k;
    out.push_back(std::move(pt));
    return;
  }
  // recompute a reduced lex basis over the current field
  IdealBasis<FqElem> I = buchberger(gens, MonOrder::Lex);
  if (I.gens.empty()) throw std::runtime_error("not zero-dimensional");
  if (I.gens.size() == 1 && I.gens[0].terms.size() == 1 && total_deg(I.gens[0].lead_mon()) == 0)
    return;  // ideal (1): no solutions on this branch
  // find the univariate generator in `var`
  Poly<FqElem> u(FqElem(L, 0));
  bool found = false;
  for (auto& g : I.gens)
    if (g.univariate_in(var)) {
      Poly<FqElem> cand = g.to_univariate(var);
      if (cand.deg() >= 1) {
        u = found ? poly_gcd(u, cand) : cand;
        found = true;
      }
    }
  if (!found) throw std::runtime_error("not zero-dimensional");
  for (auto& [fac, mult] : factor_fq(u)) {
    (void)mult;
    if (fac.deg() == 1) {
      FqElem root = -fac.c[0];
      std::vector<MultiPoly<FqElem>> next;
      for (auto& g : I.gens) next.push_back(g.substitute(var, root));
      std::vector<FqElem> solved2 = solved;
      solved2.push_back(root);
      solve_rec(std::move(next), nvars, var == 0 ? SIZE_MAX : var - 1, L, std::move(solved2),
                baseF, out);
    } else {
      FlatExt ext = fq_flatten(L, fac.c);
      FqElem root = ext.root();
      FqElem zero(ext.big, 0);
      std::vector<MultiPoly<FqElem>> next;
      for (auto& g : I.gens) {
        auto mapped = g.map_coeffs(zero, [&](const FqElem& c) { return ext.embed(c); });
        next.push_back(mapped.substitute(var, root));
      }
      std::vector<FqElem> solved2;
      for (auto& s : solved) solved2.push_back(ext.embed(s));
      solved2.push_back(root);
      solve_rec(std::move(next), nvars, var == 0 ? SIZE_MAX : var - 1, ext.big,
                std::move(solved2), baseF, out);
    }
  }
}

}  // namespace

std::vector<VarietyPoint> variety_fq(const IdealBasis<FqElem>& I, size_t nvars, const FqPtr& F) {
  std::vector<VarietyPoint> out;
  if (!I.is_groebner) throw std::invalid_argument("variety_fq: input is not a Groebner basis");
  if (I.gens.empty()) throw std::runtime_error("not zero-dimensional");
  // ideal (1): empty variety
  if (I.gens.size() == 1 && I.gens[0].terms.size() == 1 && total_deg(I.gens[0].lead_mon()) == 0)
    return out;
  auto dim = quotient_dim(I, nvars);
  if (!dim) throw std::runtime_error("not zero-dimensional");
  solve_rec(I.gens, nvars, nvars - 1, F, {}, F, out);
  // deterministic ordering: by degree, then coordinate representation
  std::sort(out.begin(), out.end(), [](const VarietyPoint& a, const VarietyPoint& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    if (a.field->k != b.field->k) return a.field->k < b.field->k;
    for (size_t i = 0; i < a.coords.size() && i < b.coords.size(); ++i) {
      if (a.field == b.field || a.field->mod == b.field->mod) {
        int c = FqElem::cmp(a.coords[i], b.coords[i]);
        if (c) return c < 0;
      }
    }
    return false;
  });
  return out;
}

}  // namespace ellsurf
