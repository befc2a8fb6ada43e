#pragma once
// Height Gram matrices, Mordell-Weil basis extraction (incremental MLLL with
// exact lattice saturation), torsion structure, and the specialization
// independence oracle.

#include "ellsurf/lll.hpp"
#include "ellsurf/sections.hpp"

namespace ellsurf {

template <class K>
RatMat gram_matrix(HeightEngine<K>& eng, const std::vector<SectionPt<K>>& secs) {
  size_t n = secs.size();
  RatMat G(n, n);
  for (size_t i = 0; i < n; ++i) {
    G(i, i) = eng.height(secs[i]);
    for (size_t j = 0; j < i; ++j) {
      Rat v = eng.pairing(secs[i], secs[j]);
      G(i, j) = v;
      G(j, i) = v;
    }
  }
  return G;
}

template <class K>
struct MwBasis {
  std::vector<SectionPt<K>> gens;      // independent generators of the free part
  RatMat gram;                         // their Gram matrix
  Rat det;                             // Gram determinant (regulator-like)
  std::vector<SectionPt<K>> torsion;   // nonzero torsion sections found
  std::string torsion_structure;       // "1", "Z/2", ..., per the rational classification
  long rank = 0;
};

namespace mwdetail {

// integer combination of sections via the group law
template <class K>
SectionPt<K> combine(const WModel<K>& E, const std::vector<SectionPt<K>>& secs,
                     const std::vector<Int>& combo) {
  SectionPt<K> acc = SectionPt<K>::zero_of(E.base());
  for (size_t i = 0; i < combo.size(); ++i) {
    if (combo[i] == 0) continue;
    long m = static_cast<long>(combo[i].get_si());
    acc = add(E, acc, multiple(E, secs[i], m));
  }
  return acc;
}

inline std::string torsion_structure_name(size_t size, long max_order) {
  if (size == 1) return "1";
  if (size == 2) return "Z/2";
  if (size == 3) return "Z/3";
  if (size == 4) return max_order == 4 ? "Z/4" : "(Z/2)^2";
  if (size == 5) return "Z/5";
  if (size == 6) return "Z/6";
  if (size == 8) return "Z/4+Z/2";
  if (size == 9) return "(Z/3)^2";
  return "?" + std::to_string(size);
}

}  // namespace mwdetail

// Extract a basis of the lattice generated by `secs` (a generating set of the
// Mordell-Weil group, e.g. the full integral set on a rational surface).
// The Gram may be supplied to avoid recomputation.
template <class K>
MwBasis<K> mw_basis(const WModel<K>& E, const std::vector<SectionPt<K>>& secs,
                    const RatMat* gram_in = nullptr) {
  HeightEngine<K> eng(E);
  RatMat G = gram_in ? *gram_in : gram_matrix(eng, secs);
  size_t n = secs.size();
  MwBasis<K> out;

  // torsion = height-zero sections; group structure by group-law closure
  std::vector<size_t> free_idx;
  for (size_t i = 0; i < n; ++i) {
    if (G(i, i).is_zero())
      out.torsion.push_back(secs[i]);
    else
      free_idx.push_back(i);
  }
  {
    // close the torsion subgroup under the group law (it is small)
    std::vector<SectionPt<K>> group{SectionPt<K>::zero_of(E.base())};
    auto contains = [&](const SectionPt<K>& P) {
      for (auto& g : group)
        if (section_cmp(g, P) == 0) return true;
      return false;
    };
    for (auto& tor : out.torsion)
      if (!contains(tor)) group.push_back(tor);
    bool grew = true;
    while (grew && group.size() <= 16) {
      grew = false;
      size_t sz = group.size();
      for (size_t i = 0; i < sz && !grew; ++i)
        for (size_t j = 0; j < sz && !grew; ++j) {
          auto s = add(E, group[i], group[j]);
          if (!contains(s)) {
            group.push_back(s);
            grew = true;
          }
        }
    }
    long max_order = 1;
    for (auto& g : group) {
      if (g.zero) continue;
      long o = 1;
      auto cur = g;
      while (!cur.zero && o <= 12) {
        cur = add(E, cur, g);
        ++o;
      }
      max_order = std::max(max_order, o);
    }
    out.torsion_structure = mwdetail::torsion_structure_name(group.size(), max_order);
  }

  // incremental MLLL over the free part, tracking integer combinations
  std::vector<std::vector<Int>> rows;  // basis combos over input indices
  auto pair_combo = [&](const std::vector<Int>& a, const std::vector<Int>& b) {
    Rat acc(0);
    for (size_t i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      for (size_t j = 0; j < n; ++j) {
        if (b[j] == 0) continue;
        acc += Rat(a[i]) * Rat(b[j]) * G(i, j);
      }
    }
    return acc;
  };
  for (size_t v : free_idx) {
    std::vector<std::vector<Int>> stacked = rows;
    std::vector<Int> ev(n, Int(0));
    ev[v] = 1;
    stacked.push_back(ev);
    size_t m = stacked.size();
    RatMat Gs(m, m);
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j <= i; ++j) {
        Rat val = pair_combo(stacked[i], stacked[j]);
        Gs(i, j) = val;
        Gs(j, i) = val;
      }
    auto red = lll_gram(Gs);
    std::vector<std::vector<Int>> next;
    for (size_t i = 0; i < red.rank; ++i) {
      std::vector<Int> combo(n, Int(0));
      for (size_t a = 0; a < m; ++a) {
        if (red.U(i, a) == 0) continue;
        for (size_t x = 0; x < n; ++x) combo[x] += red.U(i, a) * stacked[a][x];
      }
      next.push_back(std::move(combo));
    }
    rows = std::move(next);
  }

  out.rank = static_cast<long>(rows.size());
  RatMat Gb(rows.size(), rows.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j <= i; ++j) {
      Rat val = pair_combo(rows[i], rows[j]);
      Gb(i, j) = val;
      Gb(j, i) = val;
    }
  out.gram = Gb;
  // determinant via fraction-free elimination on a copy
  {
    size_t r = rows.size();
    if (r == 0) {
      out.det = Rat(1);
    } else {
      // Bareiss on rationals: plain Gaussian determinant is fine at this size
      RatMat Mx = Gb;
      Rat det(1);
      for (size_t k = 0; k < r; ++k) {
        size_t piv = k;
        while (piv < r && Mx(piv, k).is_zero()) ++piv;
        if (piv == r) {
          det = Rat(0);
          break;
        }
        if (piv != k) {
          for (size_t j = 0; j < r; ++j) std::swap(Mx(piv, j), Mx(k, j));
          det = -det;
        }
        det *= Mx(k, k);
        Rat iv = Mx(k, k).inv();
        for (size_t i2 = k + 1; i2 < r; ++i2) {
          Rat f = Mx(i2, k) * iv;
          if (f.is_zero()) continue;
          for (size_t j = k; j < r; ++j) Mx(i2, j) -= f * Mx(k, j);
        }
      }
      out.det = det;
    }
  }
  for (auto& combo : rows) out.gens.push_back(mwdetail::combine(E, secs, combo));
  // saturation check: every input section has integer coordinates in the basis
  if (!rows.empty()) {
    for (size_t v = 0; v < n; ++v) {
      // solve Gb * lambda = <sec_v, b_j>
      size_t r = rows.size();
      std::vector<Rat> rhs(r);
      std::vector<Int> ev(n, Int(0));
      ev[v] = 1;
      for (size_t j = 0; j < r; ++j) rhs[j] = pair_combo(ev, rows[j]);
      // gaussian solve
      RatMat Mx = Gb;
      std::vector<Rat> x = rhs;
      for (size_t k = 0; k < r; ++k) {
        size_t piv = k;
        while (piv < r && Mx(piv, k).is_zero()) ++piv;
        if (piv == r) throw std::runtime_error("mw_basis: singular basis Gram");
        if (piv != k) {
          for (size_t j = 0; j < r; ++j) std::swap(Mx(piv, j), Mx(k, j));
          std::swap(x[piv], x[k]);
        }
        Rat iv = Mx(k, k).inv();
        for (size_t j = 0; j < r; ++j) Mx(k, j) *= iv;
        x[k] *= iv;
        for (size_t i2 = 0; i2 < r; ++i2) {
          if (i2 == k || Mx(i2, k).is_zero()) continue;
          Rat f = Mx(i2, k);
          for (size_t j = 0; j < r; ++j) Mx(i2, j) -= f * Mx(k, j);
          x[i2] -= f * x[k];
        }
      }
      for (auto& xi : x)
        if (xi.den() != 1) throw std::runtime_error("basis does not generate");
    }
  }
  // classification sanity for rational surfaces
  if (E.chi == 1 && !mw_shape_check(out.rank, out.torsion_structure))
    throw std::runtime_error("mw_basis: classification-violating output");
  return out;
}

// ---- specialization oracle ---------------------------------------------------

struct SpecializationResult {
  IntMat kernel;            // rows span a lattice containing every true relation
  size_t rank_lower_bound;  // r - rank(kernel)
  std::vector<std::string> notes;
};

SpecializationResult specialization_oracle(const WModel<FqElem>& E,
                                           const std::vector<SectionPt<FqElem>>& secs,
                                           const std::vector<FqElem>& taus);

}  // namespace ellsurf
