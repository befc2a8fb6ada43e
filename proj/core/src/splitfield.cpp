#include "ellsurf/splitfield.hpp"

#include <map>
#include <numeric>
#include <set>

#include "ellsurf/config.hpp"
#include "ellsurf/parallel.hpp"
#include "ellsurf/permgroup.hpp"

namespace ellsurf {

namespace {

// monic integral transform: F(x) = lc^(n-1) f(x/lc); roots scale by lc
QPoly monicize(const QPoly& f_in, Rat* scale) {
  QPoly f = f_in.monic();
  // clear denominators of the monic form: x -> x / L with L = lcm of dens
  Int L = 1;
  for (auto& c : f.c) L = lcm(L, c.den());
  QPoly g(Rat(0));
  long n = f.deg();
  g.c.assign(n + 1, Rat(0));
  for (long i = 0; i <= n; ++i) {
    Int sc = 1;
    for (long j = 0; j < n - i; ++j) sc *= L;
    g.c[i] = f.c[i] * Rat(sc);
  }
  g.normalize();
  *scale = Rat(L);  // tracked root = L * original root
  return g;
}

}  // namespace

SplitField splitting_field(const std::vector<QPoly>& fs_in, unsigned degree_bound) {
  if (fs_in.empty()) throw std::invalid_argument("splitting_field: no inputs");
  SplitField S;
  for (auto& f : fs_in) {
    if (f.deg() < 1) throw std::invalid_argument("splitting_field: constant input");
    Rat sc;
    QPoly g = monicize(f, &sc);
    S.inputs.push_back(g);
    S.input_scales.push_back(sc);
  }
  // squarefree product: each squarefree and pairwise coprime
  for (size_t i = 0; i < S.inputs.size(); ++i) {
    if (poly_gcd(S.inputs[i], S.inputs[i].derivative()).deg() != 0)
      throw std::invalid_argument("non-squarefree product");
    for (size_t j = 0; j < i; ++j)
      if (poly_gcd(S.inputs[i], S.inputs[j]).deg() != 0)
        throw std::invalid_argument("non-squarefree product");
  }
  S.K = nf_rationals();
  // weights along the adjunction chain: theta_new = lambda (rho + s theta_old)
  // => every existing weight scales by lambda*s, the new root gets lambda
  std::vector<Int> weights;  // aligned with S.roots

  // process inputs in descending degree (keeps the late-stage norms small)
  std::vector<size_t> order(S.inputs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return S.inputs[a].deg() > S.inputs[b].deg(); });

  for (size_t idx : order) {
    // lift the input into the current field
    Poly<NfElem> rem(NfElem(S.K, Rat(0)));
    for (auto& c : S.inputs[idx].c) rem.c.push_back(NfElem(S.K, c));
    rem.normalize();
    // peel off roots already present (never happens across squarefree-coprime
    // inputs, but keeps the loop uniform)
    while (rem.deg() > 0) {
      auto factors = factor_over_numberfield(rem);
      bool adjoined = false;
      for (auto& [fac, mult] : factors) {
        (void)mult;
        if (fac.deg() == 1) {
          NfElem rho = -fac.c[0];
          S.roots.push_back(rho);
          S.root_input.push_back(idx);
          weights.push_back(Int(0));
          rem = exact_div(rem, fac);
        }
      }
      if (rem.deg() == 0) break;
      // adjoin a root of the smallest nonlinear factor
      const Poly<NfElem>* pick = nullptr;
      for (auto& [fac, mult] : factors)
        if (fac.deg() >= 2 && (!pick || fac.deg() < pick->deg())) pick = &fac;
      if (!pick) break;
      unsigned projected = S.K->degree() * static_cast<unsigned>(pick->deg());
      if (projected > degree_bound) {
        std::string tower = "partial tower degrees:";
        for (auto d : S.tower_degrees) tower += " " + std::to_string(d);
        throw std::runtime_error("degree bound exceeded (projected " + std::to_string(projected) +
                                 " > " + std::to_string(degree_bound) + "); " + tower);
      }
      Adjoined adj = nf_adjoin(S.K, *pick, degree_bound);
      // migrate tracked roots and the remainder
      std::vector<NfElem> migrated = nf_migrate(S.roots, adj.K2, adj.old_gen);
      Poly<NfElem> rem2 = nf_lift_poly(rem, adj.K2, adj.old_gen);
      // weight bookkeeping: theta'' = lambda (rho + s theta'); our nf_adjoin
      // returns gen = theta'' with theta' = gen / lambda... express new theta
      // over roots: gen(K2) = lambda * rho + lambda * s * theta_old
      // lambda is the integral scaling used inside nf_adjoin; recover it from
      // gen = lambda * (new_root + s * old_gen):
      Int lambda = 1;
      {
        NfElem gen2 = nf_gen(adj.K2);
        NfElem combo = adj.new_root;
        NfElem sg = adj.old_gen;
        for (auto& x : sg.c) x = x * Rat(adj.shift);
        combo += sg;
        // gen2 = lambda * combo with lambda rational integer
        for (size_t i = 0; i < gen2.c.size(); ++i)
          if (!combo.c[i].is_zero()) {
            Rat l = gen2.c[i] / combo.c[i];
            if (l.den() != 1) throw std::runtime_error("splitting_field: non-integral scale");
            lambda = l.num();
            break;
          }
      }
      for (auto& w : weights) w *= lambda * Int(adj.shift);
      S.K = adj.K2;
      S.roots = std::move(migrated);
      S.roots.push_back(adj.new_root);
      S.root_input.push_back(idx);
      weights.push_back(lambda);
      S.tower_degrees.push_back(S.K->degree());
      // divide the adjoined root out
      Poly<NfElem> lin(NfElem(S.K, Rat(0)));
      lin.c = {-adj.new_root, NfElem(S.K, Rat(1))};
      rem = exact_div(rem2, lin);
    }
    if (rem.deg() != 0) throw std::runtime_error("splitting_field: input did not split");
  }
  S.weights = std::move(weights);
  // final exact sanity: every root satisfies its input polynomial
  for (size_t i = 0; i < S.roots.size(); ++i) {
    const QPoly& f = S.inputs[S.root_input[i]];
    if (!nf_eval(f, S.roots[i]).is_zero())
      throw std::runtime_error("splitting_field: root verification failed");
  }
  return S;
}

namespace {

// mod-p data for the group derivation
struct SplitModData {
  std::uint64_t p;
  FqPtr F;
  std::vector<FqElem> theta_roots;           // roots of g mod p, canonical order
  std::vector<std::vector<FqElem>> root_vals;  // [embedding][tracked root]
};

std::optional<SplitModData> split_mod_data(const SplitField& S, std::uint64_t p) {
  if (p < 5 || !is_prime(Int((unsigned long)p))) return std::nullopt;
  auto F = fq_field(p);
  FqPoly gbar = fq_poly_from_z(S.K->g, F);
  if (gbar.deg() != static_cast<long>(S.degree())) return std::nullopt;
  FqPoly d = gbar.derivative();
  if (d.is_zero() || poly_gcd(gbar, d).deg() != 0) return std::nullopt;
  auto roots = fq_roots(gbar);
  if (roots.size() != S.degree()) return std::nullopt;  // not fully split
  SplitModData M;
  M.p = p;
  M.F = F;
  M.theta_roots = roots;
  for (auto& th : roots) {
    std::vector<FqElem> vals;
    vals.reserve(S.roots.size());
    for (auto& r : S.roots) {
      // evaluate the residue polynomial at th mod p; denominators must be units
      FqElem acc(F, 0);
      try {
        for (size_t i = r.c.size(); i-- > 0;) {
          Int num = r.c[i].num() % Int((unsigned long)p);
          Int den = r.c[i].den() % Int((unsigned long)p);
          if (num < 0) num += Int((unsigned long)p);
          if (den == 0) return std::nullopt;
          Int val = num * invmod(den, Int((unsigned long)p)) % Int((unsigned long)p);
          acc = acc * th + FqElem(F, val.get_ui());
        }
      } catch (const std::exception&) {
        return std::nullopt;
      }
      vals.push_back(acc);
    }
    // tracked-root values must be pairwise distinct within each input block
    for (size_t i = 0; i < vals.size(); ++i)
      for (size_t j = 0; j < i; ++j)
        if (S.root_input[i] == S.root_input[j] && vals[i] == vals[j]) return std::nullopt;
    M.root_vals.push_back(std::move(vals));
  }
  return M;
}

}  // namespace

SplitResult split_aut_grp(const std::vector<QPoly>& fs, std::optional<std::uint64_t> prime,
                          unsigned degree_bound) {
  SplitResult R;
  R.field = splitting_field(fs, degree_bound);
  const SplitField& S = R.field;
  size_t D = S.degree();
  size_t nroots = S.roots.size();

  // working prime: g must split into distinct linear factors mod p
  SplitModData M{};
  if (prime) {
    auto m = split_mod_data(S, *prime);
    if (!m)
      throw std::runtime_error(
          "bad user prime: the defining polynomial is not squarefree-split at it; choose "
          "another prime");
    M = *m;
    R.prime = *prime;
  } else {
    std::uint64_t p = 5;
    while (true) {
      auto m = split_mod_data(S, p);
      if (m) {
        M = *m;
        R.prime = p;
        break;
      }
      p = next_prime(Int((unsigned long)p)).get_ui();
      if (p > 2000000) throw std::runtime_error("split_aut_grp: no fully-split prime found");
    }
  }

  // permutations from embedding matching
  std::map<std::string, size_t> base_lookup;
  for (size_t i = 0; i < nroots; ++i) base_lookup[M.root_vals[0][i].str()] = i;
  std::vector<std::vector<size_t>> perms;
  for (size_t j = 0; j < D; ++j) {
    std::vector<size_t> perm(nroots);
    for (size_t i = 0; i < nroots; ++i) {
      auto it = base_lookup.find(M.root_vals[j][i].str());
      if (it == base_lookup.end() || S.root_input[it->second] != S.root_input[i])
        throw std::runtime_error("split_aut_grp: embedding matching failed (retry another prime)");
      perm[i] = it->second;
    }
    perms.push_back(std::move(perm));
  }
  // identity must be the base embedding
  for (size_t i = 0; i < nroots; ++i)
    if (perms[0][i] != i) throw std::runtime_error("split_aut_grp: base embedding not identity");

  // exact automorphism images from the adjunction data
  std::vector<QPoly> h_exact(D);
  {
    // root expressions as QPoly, and theta's weight combination
    std::vector<QPoly> rootpoly;
    for (auto& r : S.roots) rootpoly.push_back(r.to_poly());
    for (size_t j = 0; j < D; ++j) {
      QPoly acc(Rat(0));
      for (size_t i = 0; i < nroots; ++i) {
        if (S.weights[i] == 0) continue;
        acc += rootpoly[perms[j][i]].scaled(Rat(S.weights[i]));
      }
      h_exact[j] = acc;  // already reduced: degree < D
    }
  }
  // group closure and composition table via the permutations
  std::map<std::vector<size_t>, size_t> perm_index;
  for (size_t j = 0; j < D; ++j) {
    if (perm_index.count(perms[j]))
      throw std::runtime_error("split_aut_grp: duplicate embedding permutation");
    perm_index[perms[j]] = j;
  }
  R.table.assign(D, std::vector<size_t>(D, 0));
  for (size_t a = 0; a < D; ++a)
    for (size_t b = 0; b < D; ++b) {
      std::vector<size_t> comp(nroots);
      for (size_t i = 0; i < nroots; ++i) comp[i] = perms[a][perms[b][i]];
      auto it = perm_index.find(comp);
      if (it == perm_index.end())
        throw std::runtime_error("split_aut_grp: embeddings are not closed under composition");
      R.table[a][b] = it->second;
    }

  // generating set (greedy closure)
  {
    std::set<size_t> have{0};
    while (have.size() < D) {
      size_t pick = 0;
      for (size_t j = 0; j < D; ++j)
        if (!have.count(j)) {
          pick = j;
          break;
        }
      R.generators.push_back(pick);
      // close
      std::vector<size_t> frontier(have.begin(), have.end());
      have.insert(pick);
      bool grew = true;
      while (grew) {
        grew = false;
        std::vector<size_t> cur(have.begin(), have.end());
        for (size_t a : cur)
          for (size_t b : cur)
            if (!have.count(R.table[a][b])) {
              have.insert(R.table[a][b]);
              grew = true;
            }
      }
    }
  }

  // exact verification: generators get the head-on residue identity
  // g(h(x)) = 0 mod g; everything else is exact by closure of verified maps
  {
    QPoly g = qpoly_from_z(S.K->g);
    auto verify_elem = [&](size_t j) {
      const QPoly& h = h_exact[j];
      // Horner: g(h) mod g
      QPoly acc(Rat(0));
      for (size_t i = g.c.size(); i-- > 0;) {
        acc = acc * h + QPoly::constant(g.c[i]);
        QPoly q, r;
        divrem(acc, g, q, r);
        acc = r;
      }
      if (!acc.is_zero()) throw std::runtime_error("split_aut_grp: generator verification failed");
    };
    for (size_t j : R.generators) verify_elem(j);
    R.directly_verified = R.generators.size();
  }

  R.group.resize(D);
  for (size_t j = 0; j < D; ++j) {
    R.group[j].perm = perms[j];
    R.group[j].h = h_exact[j];
  }
  R.group_name = recognize_group_by_table(R.table);
  return R;
}

// ---- the Newton lifting engine ----

LiftOutcome lift_automorphism(const SplitResult& R, size_t elem_index, std::uint64_t prime) {
  const SplitField& S = R.field;
  size_t D = S.degree();
  auto Mopt = split_mod_data(S, prime);
  if (!Mopt)
    throw std::runtime_error(
        "bad user prime: the defining polynomial is not squarefree-split at it; choose another "
        "prime");
  const SplitModData& M = *Mopt;
  const auto& perm = R.group[elem_index].perm;
  const FqPtr& F = M.F;

  // interpolation data: points (theta_k, sum_i w_i * v_k(perm(i)))
  std::vector<FqElem> xs = M.theta_roots, ys;
  Int pz((unsigned long)prime);
  for (size_t k = 0; k < D; ++k) {
    FqElem acc(F, 0);
    for (size_t i = 0; i < S.roots.size(); ++i) {
      if (S.weights[i] == 0) continue;
      Int w = S.weights[i] % pz;
      if (w < 0) w += pz;
      acc += M.root_vals[k][perm[i]] * FqElem(F, w.get_ui());
    }
    ys.push_back(acc);
  }
  // Lagrange interpolation over F_p
  FqPoly h0(FqElem(F, 0));
  {
    // product tree free version: O(D^2)
    for (size_t i = 0; i < D; ++i) {
      FqPoly term = FqPoly::constant(ys[i]);
      FqElem denom(F, 1);
      for (size_t j = 0; j < D; ++j) {
        if (i == j) continue;
        FqPoly lin(FqElem(F, 0));
        lin.c = {-xs[j], FqElem(F, 1)};
        term = term * lin;
        denom *= xs[i] - xs[j];
      }
      h0 += term.scaled(denom.inv());
    }
  }

  // Newton lifting modulo (g, p^(2^n)) with symmetric-representative
  // reconstruction of h * g' after每 step
  ZPoly gz = S.K->g;
  ZPoly gprime;
  for (size_t i = 1; i < gz.size(); ++i) gprime.push_back(Int((unsigned long)i) * gz[i]);
  // exact target: h_exact * g' mod g (integral coordinates)
  QPoly target_q;
  {
    QPoly g = qpoly_from_z(gz), gp = qpoly_from_z(gprime);
    QPoly prod = R.group[elem_index].h * gp;
    QPoly q, r;
    divrem(prod, g, q, r);
    target_q = r;
  }

  // integer polynomial arithmetic mod (g, m)
  auto zmul_mod = [&](const ZPoly& a, const ZPoly& b, const Int& m) {
    ZPoly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % m;
    }
    // reduce mod monic g
    while (r.size() >= gz.size()) {
      Int lead = r.back() % m;
      size_t shift = r.size() - gz.size();
      if (lead != 0)
        for (size_t i = 0; i < gz.size(); ++i) {
          r[shift + i] = (r[shift + i] - lead * gz[i]) % m;
        }
      r.pop_back();
    }
    for (auto& x : r) {
      x %= m;
      if (x < 0) x += m;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  };
  auto zeval_mod = [&](const ZPoly& f, const ZPoly& at, const Int& m) {
    ZPoly acc;
    for (size_t i = f.size(); i-- > 0;) {
      acc = zmul_mod(acc, at, m);
      if (acc.empty()) acc.push_back(Int(0));
      acc[0] = (acc[0] + f[i]) % m;
      if (acc[0] < 0) acc[0] += m;
      while (!acc.empty() && acc.back() == 0) acc.pop_back();
    }
    return acc;
  };

  ZPoly h;
  for (auto& ce : h0.c) h.push_back(Int((unsigned long)ce.c[0]));
  Int m = pz;
  // inverse of g'(h) mod (g, p): compute in F_p[x]/(g) via poly ops
  ZPoly w;
  {
    // evaluate g'(h) mod (g, p), then invert with xgcd over F_p
    ZPoly gp_h = zeval_mod(gprime, h, pz);
    // invert: xgcd(gp_h, g) over F_p
    auto F2 = fq_field(prime);
    FqPoly a = fq_poly_from_z(gp_h, F2), g2 = fq_poly_from_z(gz, F2);
    FqPoly gg, u, v;
    poly_xgcd(a, g2, gg, u, v);
    if (gg.deg() != 0) throw std::runtime_error("lift_automorphism: g'(h) not invertible mod p");
    FqPoly inv = u.scaled(gg.c[0].inv());
    for (auto& ce : inv.c) w.push_back(Int((unsigned long)ce.c[0]));
  }

  LiftOutcome out;
  for (unsigned step = 0; step < 14; ++step) {
    // reconstruction attempt: symmetric representatives of h*g' mod (g, m)
    ZPoly hg = zmul_mod(zmul_mod(h, gprime, m), {Int(1)}, m);
    QPoly cand(Rat(0));
    for (auto& x : hg) cand.c.push_back(Rat(symrep(x, m)));
    cand.normalize();
    if (cand == target_q) {
      out.matches_exact = true;
      out.doublings = step;
      out.h = R.group[elem_index].h;
      return out;
    }
    // double precision: h <- h - g(h) * w, w <- w (2 - g'(h) w) mod m^2
    Int m2 = m * m;
    ZPoly gh = zeval_mod(gz, h, m2);
    ZPoly corr = zmul_mod(gh, w, m2);
    if (h.size() < corr.size()) h.resize(corr.size(), Int(0));
    for (size_t i = 0; i < corr.size(); ++i) {
      h[i] = (h[i] - corr[i]) % m2;
      if (h[i] < 0) h[i] += m2;
    }
    while (!h.empty() && h.back() == 0) h.pop_back();
    ZPoly gph = zeval_mod(gprime, h, m2);
    ZPoly gw = zmul_mod(gph, w, m2);
    ZPoly two_minus(gw.size(), Int(0));
    if (two_minus.empty()) two_minus.push_back(Int(0));
    two_minus.resize(std::max<size_t>(gw.size(), 1), Int(0));
    two_minus[0] = Int(2);
    for (size_t i = 0; i < gw.size(); ++i) {
      two_minus[i] = (two_minus[i] - gw[i]) % m2;
      if (two_minus[i] < 0) two_minus[i] += m2;
    }
    while (!two_minus.empty() && two_minus.back() == 0) two_minus.pop_back();
    w = zmul_mod(w, two_minus, m2);
    m = m2;
  }
  throw std::runtime_error("increase precision or change prime");
}

std::vector<NfElem> roots_in_field(const SplitResult& R, const QPoly& f) {
  const SplitField& S = R.field;
  // tracked input: return the adjunction expressions (descaled)
  Rat sc;
  QPoly fm = monicize(f, &sc);
  for (size_t idx = 0; idx < S.inputs.size(); ++idx) {
    if (fm == S.inputs[idx]) {
      std::vector<NfElem> out;
      for (size_t i = 0; i < S.roots.size(); ++i)
        if (S.root_input[i] == idx) {
          NfElem r = S.roots[i];
          Rat ratio = S.input_scales[idx] / sc;  // tracked = scale*orig
          (void)ratio;
          for (auto& x : r.c) x = x / sc;
          out.push_back(r);
        }
      return out;
    }
  }
  // untracked: factor over the field and take the linear roots
  Poly<NfElem> lifted(NfElem(S.K, Rat(0)));
  for (auto& c : f.c) lifted.c.push_back(NfElem(S.K, c));
  lifted.normalize();
  auto roots = nf_roots(lifted);
  if (roots.size() != static_cast<size_t>(f.deg()))
    throw std::runtime_error("roots_in_field: polynomial does not split in the field");
  return roots;
}

ChebotarevResult chebotarev_estimate(const std::vector<QPoly>& fs, std::uint64_t p_min,
                                     size_t sample_count) {
  if (sample_count == 0) throw std::invalid_argument("empty prime range");
  QPoly prod = QPoly::constant(Rat(1));
  for (auto& f : fs) prod = prod * f;
  if (poly_gcd(prod, prod.derivative()).deg() != 0)
    throw std::invalid_argument("non-squarefree product");
  Rat sc;
  QPoly F = monicize(prod, &sc);
  ZPoly fz = zpoly_from_q(F);
  ChebotarevResult out;
  Int p((unsigned long)std::max<std::uint64_t>(p_min, 5) - 1);
  while (out.samples.size() < sample_count) {
    p = next_prime(p);
    std::uint64_t pl = p.get_ui();
    auto Fq = fq_field(pl);
    FqPoly fp = fq_poly_from_z(fz, Fq);
    if (fp.deg() != F.deg()) continue;
    FqPoly d = fp.derivative();
    if (d.is_zero() || poly_gcd(fp, d).deg() != 0) continue;  // bad reduction
    std::uint64_t kp = 1;
    for (auto& [fac, mult] : factor_fq(fp)) {
      (void)mult;
      kp = std::lcm<std::uint64_t>(kp, static_cast<std::uint64_t>(fac.deg()));
    }
    out.samples.push_back({pl, kp});
    out.order_lcm = lcm(out.order_lcm, Int((unsigned long)kp));
    if (kp == 1) ++out.full_splits;
  }
  out.density_estimate =
      out.full_splits ? static_cast<double>(out.samples.size()) / out.full_splits : 0.0;
  return out;
}

}  // namespace ellsurf
