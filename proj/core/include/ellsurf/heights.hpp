#pragma once
// Shioda height pairing on sections:
//   h(P)    = 2 chi + 2 (P.O) - sum_v contr_v(P)
//   <P,Q>   = chi + (P.O) + (Q.O) - (P.Q) - sum_v contr_v(P,Q)
// with (P.O), (P.Q) intersection numbers on the relatively minimal surface and
// contr_v the fibre-component correction.
//
// Component identification works on the depressed local model y^2 = g(x) with
// the place moved to t = 0:
//   - I_n:  branch distances d+ + d- = n against the Hensel-split node
//           (d+- = v(Y -+ (X - r) W),  W^2 = X - s,  g = ((x-r)^2 - D)(x - s)),
//   - IV, IV*, I_n* far: residue signature of Y against the branch value,
//   - I0*, I_n*: which root of the residual cubic X/t hits.
// (P.Q) through surface singularities is an exact blow-up replay: translate,
// divide by t, re-derive the local equation, repeat; the remaining contact is
// min(v(dx), v(dy)) once the common point is surface-smooth.

#include <climits>
#include <map>
#include <memory>

#include "ellsurf/kodaira.hpp"

namespace ellsurf {

namespace hdetail {

template <class K>
struct FieldHooks;

template <>
struct FieldHooks<Rat> {
  using Fn = std::function<Rat(const Rat&)>;
  static std::pair<Rat, Fn> place_root(const Rat&, const QPoly& pi) {
    if (pi.deg() != 1)
      throw std::runtime_error(
          "heights over Q are supported at degree-1 places only; reduce mod a good prime for "
          "higher-degree places");
    Rat tau = -pi.c[0];
    return {tau, [](const Rat& a) { return a; }};
  }
  static std::optional<Rat> sqrt(const Rat& a) { return rat_sqrt(a); }
  static std::optional<Fn> extend_sqrt(const Rat&, const Rat&) { return std::nullopt; }
};

template <>
struct FieldHooks<FqElem> {
  using Fn = std::function<FqElem(const FqElem&)>;
  static std::pair<FqElem, Fn> place_root(const FqElem& ex, const FqPoly& pi) {
    if (pi.deg() == 1) {
      FqElem tau = -pi.c[0];
      return {tau, [](const FqElem& a) { return a; }};
    }
    FlatExt ext = fq_flatten(ex.F, pi.c);
    FqElem tau = ext.root();
    return {tau, [ext](const FqElem& a) { return ext.embed(a); }};
  }
  static std::optional<FqElem> sqrt(const FqElem& a) { return fq_sqrt(a); }
  static std::optional<Fn> extend_sqrt(const FqElem& ex, const FqElem& a) {
    std::vector<FqElem> pi{-a, FqElem(ex.F, 0), FqElem(ex.F, 1)};
    FlatExt ext = fq_flatten(ex.F, pi);
    return Fn([ext](const FqElem& b) { return ext.embed(b); });
  }
};

template <class K>
Poly<K> ser_trunc(Poly<K> f, long N) {
  if (static_cast<long>(f.c.size()) > N) f.c.resize(N);
  f.normalize();
  return f;
}

template <class K>
Poly<K> ser_mul(const Poly<K>& a, const Poly<K>& b, long N) {
  return ser_trunc(a * b, N);
}

template <class K>
Poly<K> ser_inv(const Poly<K>& a, long N) {
  if (a.is_zero() || a.c[0].is_zero()) throw std::domain_error("ser_inv: not a unit");
  Poly<K> r = Poly<K>::constant(a.c[0].inv());
  long prec = 1;
  while (prec < N) {
    prec *= 2;
    Poly<K> two = Poly<K>::constant(a.base.one() + a.base.one());
    r = ser_trunc(r * (two - ser_mul(a, r, prec)), std::min(prec, N));
  }
  return ser_trunc(r, N);
}

template <class K>
Poly<K> ser_of(const RatFunc<K>& f, long N) {
  if (f.is_zero()) return Poly<K>(f.num.base);
  if (f.den.c.empty() || f.den.c[0].is_zero()) throw std::domain_error("ser_of: pole at t = 0");
  return ser_mul(ser_trunc(f.num, N), ser_inv(f.den, N), N);
}

template <class K, class SqrtHook>
std::optional<Poly<K>> ser_sqrt(const Poly<K>& a, long N, SqrtHook&& hook) {
  if (a.is_zero() || a.c[0].is_zero()) throw std::domain_error("ser_sqrt: not a unit");
  auto r0 = hook(a.c[0]);
  if (!r0) return std::nullopt;
  Poly<K> r = Poly<K>::constant(*r0);
  K half = (a.base.one() + a.base.one()).inv();
  long prec = 1;
  while (prec < N) {
    prec *= 2;
    long pr = std::min(prec, N);
    Poly<K> ia = ser_inv(r, pr);
    r = ser_trunc((r + ser_mul(a, ia, pr)).scaled(half), pr);
  }
  return ser_trunc(r, N);
}

template <class K>
Poly<K> ser_root_refine(const std::vector<Poly<K>>& g, const K& start, long N) {
  Poly<K> s = Poly<K>::constant(start);
  auto eval = [&](const Poly<K>& x, bool deriv, long prec) {
    Poly<K> acc(x.base);
    if (!deriv) {
      for (size_t i = g.size(); i-- > 0;) acc = ser_trunc(acc * x + g[i], prec);
    } else {
      for (size_t i = g.size(); i-- > 1;) {
        Poly<K> ci = g[i].scaled(int_to_field(x.base, static_cast<long>(i)));
        acc = ser_trunc(acc * x + ci, prec);
      }
    }
    return acc;
  };
  long prec = 1;
  while (prec < N) {
    prec *= 2;
    long pr = std::min(prec, N);
    Poly<K> val = eval(s, false, pr);
    Poly<K> der = eval(s, true, pr);
    s = ser_trunc(s - ser_mul(val, ser_inv(der, pr), pr), pr);
  }
  return ser_trunc(s, N);
}

template <class K>
long ser_val(const Poly<K>& f, long N) {
  long v = f.val_at_zero();
  return v < 0 ? N : v;
}

}  // namespace hdetail

enum class LocalPos { AtO, Identity, NonIdentity };

template <class K>
struct LocalComp {
  LocalPos pos = LocalPos::Identity;
  long po = 0;
  long in_k = -1;
  long in_m = 0;
  bool far_branch = false;
  bool has_root = false;
  K root;
  bool has_sig = false;
  K sig;
};

template <class K>
class PlaceAnalysis {
 public:
  PlaceAnalysis(const WModel<K>& E, const PlaceT<K>& place)
      : Eorig_(E), place_(place), at_infinity_(place.at_infinity), chi_(E.chi) {
    using H = hdetail::FieldHooks<K>;
    if (at_infinity_) {
      Echart_ = infinity_model(E);
      tau_ = E.base().zero();
      embed_ = [](const K& a) { return a; };
    } else {
      Echart_ = E;
      auto [tau, emb] = H::place_root(E.base(), place.pi);
      tau_ = tau;
      embed_ = emb;
    }
    rebuild();
    if (sym_ == KodSym::In && n_ >= 3) setup_node();
    if (sym_ == KodSym::Instar) setup_instar();
  }

  KodSym sym() const { return sym_; }
  unsigned n_index() const { return n_; }
  long v_delta() const { return vdelta_; }
  unsigned minimal_u_power() const { return upow_; }

  LocalComp<K> component(const SectionPt<K>& P) {
    auto S = localize(P);
    return comp_of(S);
  }
  Rat contr(const SectionPt<K>& P) { return contr_of(component(P)); }
  Rat contr_pair(const SectionPt<K>& P, const SectionPt<K>& Q) {
    return pair_of(component(P), component(Q));
  }
  long po_contact(const SectionPt<K>& P) {
    auto S = localize(P);
    return S.at_pole ? S.pole_k : 0;
  }
  long contact(const SectionPt<K>& P, const SectionPt<K>& Q) {
    return contact_of(localize(P), localize(Q));
  }

  // spec-facing: contribution values from component data
  Rat contr_of(const LocalComp<K>& c) const {
    if (c.pos != LocalPos::NonIdentity) return Rat(0);
    switch (sym_) {
      case KodSym::In: {
        long n = n_, m = c.in_m;
        return Rat(m * (n - m), n);
      }
      case KodSym::III: return Rat(1, 2);
      case KodSym::IV: return Rat(2, 3);
      case KodSym::I0star: return Rat(1);
      case KodSym::Instar: return c.far_branch ? Rat(4 + n_, 4) : Rat(1);
      case KodSym::IVstar: return Rat(4, 3);
      case KodSym::IIIstar: return Rat(3, 2);
      default: return Rat(0);
    }
  }

  Rat pair_of(const LocalComp<K>& p, const LocalComp<K>& q) const {
    if (p.pos != LocalPos::NonIdentity || q.pos != LocalPos::NonIdentity) return Rat(0);
    switch (sym_) {
      case KodSym::In: {
        long n = n_;
        if (n == 1) return Rat(0);
        if (n == 2) return Rat(1, 2);
        if (p.in_k < 0 || q.in_k < 0)
          throw std::runtime_error(
              "pair contribution at a non-split multiplicative place over Q: reduce mod a good "
              "prime");
        long i = p.in_k, j = q.in_k;
        if (i > j) std::swap(i, j);
        return Rat(i * (n - j), n);
      }
      case KodSym::III: return Rat(1, 2);
      case KodSym::IV: return p.sig == q.sig ? Rat(2, 3) : Rat(1, 3);
      case KodSym::I0star: return p.root == q.root ? Rat(1) : Rat(1, 2);
      case KodSym::Instar: {
        Rat quarter(n_, 4);
        if (!p.far_branch && !q.far_branch) return Rat(1);
        if (p.far_branch != q.far_branch) return Rat(1, 2);
        return (p.sig == q.sig ? Rat(1) : Rat(1, 2)) + quarter;
      }
      case KodSym::IVstar: return p.sig == q.sig ? Rat(4, 3) : Rat(2, 3);
      case KodSym::IIIstar: return Rat(3, 2);
      default: return Rat(0);
    }
  }

 private:
  struct LocalSection {
    bool at_pole = false;
    long pole_k = 0;
    RatFunc<K> X, Y;
  };

  void rebuild() {
    K nex = tau_.zero();
    WModel<K> M(Echart_);
    auto inv = invariants(M);
    K i48 = int_to_field(nex, 48).inv(), i864 = int_to_field(nex, 864).inv();
    auto shift_embed = [&](const Poly<K>& f) {
      Poly<K> g(nex);
      g.c.reserve(f.c.size());
      for (auto& c : f.c) g.c.push_back(embed_(c));
      g.normalize();
      return g.shift(tau_);
    };
    A_ = shift_embed(inv.c4).scaled(-i48);
    B_ = shift_embed(inv.c6).scaled(-i864);
    K i12 = int_to_field(nex, 12).inv();
    K half = (nex.one() + nex.one()).inv();
    b2_over12_ = shift_embed(inv.b2).scaled(i12);
    a1_half_ = shift_embed(M.a1).scaled(half);
    a3_half_ = shift_embed(M.a3).scaled(half);
    Poly<K> t = Poly<K>::x(nex);
    long va = A_.is_zero() ? -1 : RatFunc<K>(A_).valuation(t);
    long vb = B_.is_zero() ? -1 : RatFunc<K>(B_).valuation(t);
    upow_ = 0;
    while ((va == -1 || va >= 4) && (vb == -1 || vb >= 6) && !(va == -1 && vb == -1)) {
      if (!A_.is_zero()) A_ = exact_div(A_, Poly<K>::x_pow(nex, 4));
      if (!B_.is_zero()) B_ = exact_div(B_, Poly<K>::x_pow(nex, 6));
      if (va != -1) va -= 4;
      if (vb != -1) vb -= 6;
      ++upow_;
    }
    K c16 = int_to_field(nex, 16), c4c = int_to_field(nex, 4), c27 = int_to_field(nex, 27);
    disc_ = -(A_ * A_ * A_).scaled(c4c * c16) - (B_ * B_).scaled(c27 * c16);
    if (disc_.is_zero()) throw std::runtime_error("PlaceAnalysis: degenerate local model");
    vdelta_ = RatFunc<K>(disc_).valuation(t);
    va_ = va;
    vb_ = vb;
    classify();
  }

  void upgrade(std::function<K(const K&)> emb2) {
    // extend the analysis field; all cached data is rebuilt in the new field
    auto old = embed_;
    embed_ = [old, emb2](const K& a) { return emb2(old(a)); };
    tau_ = emb2(tau_);
    rebuild();
  }

  void classify() {
    long a = va_, b = vb_, c = vdelta_;
    auto ge = [](long v, long bound) { return v == -1 || v >= bound; };
    K nex = tau_.zero();
    n_ = 0;
    if (c == 0) {
      sym_ = KodSym::I0;
      return;
    }
    if (a == 0) {
      sym_ = KodSym::In;
      n_ = static_cast<unsigned>(c);
      Poly<K> gbar(nex);
      gbar.c = {B_.coeff(0), A_.coeff(0), nex.zero(), nex.one()};
      gbar.normalize();
      Poly<K> d2 = poly_gcd(gbar, gbar.derivative());
      if (d2.deg() != 1) throw std::runtime_error("PlaceAnalysis: node extraction failed");
      sing_x_ = -d2.c[0];
      return;
    }
    sing_x_ = nex.zero();
    if (b == 1 && c == 2) sym_ = KodSym::II;
    else if (a == 1 && ge(b, 2) && c == 3) sym_ = KodSym::III;
    else if (ge(a, 2) && b == 2 && c == 4) sym_ = KodSym::IV;
    else if (ge(a, 2) && ge(b, 3) && c == 6) sym_ = KodSym::I0star;
    else if (a == 2 && b == 3 && c > 6) {
      sym_ = KodSym::Instar;
      n_ = static_cast<unsigned>(c - 6);
    } else if (ge(a, 3) && b == 4 && c == 8) sym_ = KodSym::IVstar;
    else if (a == 3 && ge(b, 5) && c == 9) sym_ = KodSym::IIIstar;
    else if (ge(a, 4) && b == 5 && c == 10) sym_ = KodSym::IIstar;
    else throw std::runtime_error("fibre data inconsistent");
  }

  void setup_node() {
    using H = hdetail::FieldHooks<K>;
    K nex = tau_.zero();
    // residue roots: double x0, simple x1
    Poly<K> gbar(nex);
    gbar.c = {B_.coeff(0), A_.coeff(0), nex.zero(), nex.one()};
    gbar.normalize();
    Poly<K> dbl = poly_gcd(gbar, gbar.derivative());
    K x0 = -dbl.c[0];
    K x1 = -exact_div(gbar, dbl * dbl).c[0];
    if (!H::sqrt(x0 - x1).has_value()) {
      auto ext = H::extend_sqrt(nex, x0 - x1);
      if (ext) {
        upgrade(*ext);
        // recompute residue roots in the new field
        K nex2 = tau_.zero();
        Poly<K> gbar2(nex2);
        gbar2.c = {B_.coeff(0), A_.coeff(0), nex2.zero(), nex2.one()};
        gbar2.normalize();
        Poly<K> dbl2 = poly_gcd(gbar2, gbar2.derivative());
        sing_x_ = -dbl2.c[0];
        x0 = sing_x_;
        x1 = -exact_div(gbar2, dbl2 * dbl2).c[0];
      } else {
        node_oriented_ = false;
      }
    }
    long N = vdelta_ + 6;
    K nex3 = tau_.zero();
    std::vector<Poly<K>> g{hdetail::ser_trunc(B_, N), hdetail::ser_trunc(A_, N), Poly<K>(nex3),
                           Poly<K>::constant(nex3.one())};
    node_s_ = hdetail::ser_root_refine(g, x1, N);
    Poly<K> p = hdetail::ser_trunc(g[2] + node_s_, N);
    Poly<K> q = hdetail::ser_trunc(g[1] + hdetail::ser_mul(p, node_s_, N), N);
    K half = (nex3.one() + nex3.one()).inv();
    node_r_ = p.scaled(-half);
    Poly<K> D = hdetail::ser_trunc(hdetail::ser_mul(node_r_, node_r_, N) - q, N);
    if (hdetail::ser_val(D, N) != static_cast<long>(n_))
      throw std::runtime_error("PlaceAnalysis: node discriminant valuation mismatch");
    node_ready_ = true;
  }

  void setup_instar() {
    K nex = tau_.zero();
    long N = vdelta_ + 6;
    Poly<K> A1 = exact_div(A_, Poly<K>::x_pow(nex, 2));
    Poly<K> B1 = exact_div(B_, Poly<K>::x_pow(nex, 3));
    std::vector<Poly<K>> c1{hdetail::ser_trunc(B1, N), hdetail::ser_trunc(A1, N), Poly<K>(nex),
                            Poly<K>::constant(nex.one())};
    Poly<K> cbar(nex);
    cbar.c = {B1.coeff(0), A1.coeff(0), nex.zero(), nex.one()};
    cbar.normalize();
    Poly<K> dbl = poly_gcd(cbar, cbar.derivative());
    if (dbl.deg() != 1) throw std::runtime_error("PlaceAnalysis: I_n* root structure failed");
    instar_double_root_ = -dbl.c[0];
    instar_simple_root_ = -exact_div(cbar, dbl * dbl).c[0];
    Poly<K> s = hdetail::ser_root_refine(c1, instar_simple_root_, N);
    Poly<K> p = hdetail::ser_trunc(c1[2] + s, N);
    Poly<K> q = hdetail::ser_trunc(c1[1] + hdetail::ser_mul(p, s, N), N);
    K half = (nex.one() + nex.one()).inv();
    instar_r_ = p.scaled(-half);
    Poly<K> D = hdetail::ser_trunc(hdetail::ser_mul(instar_r_, instar_r_, N) - q, N);
    if (hdetail::ser_val(D, N) != static_cast<long>(n_))
      throw std::runtime_error("PlaceAnalysis: I_n* discriminant valuation mismatch");
    instar_ready_ = true;
  }

  LocalSection localize(const SectionPt<K>& P_in) const {
    LocalSection L;
    if (P_in.zero) throw std::invalid_argument("localize: zero section");
    SectionPt<K> P = at_infinity_ ? to_infinity_chart(Eorig_, P_in) : P_in;
    K nex = tau_.zero();
    auto conv = [&](const RatFunc<K>& f) {
      Poly<K> n(nex), d(nex);
      for (auto& c : f.num.c) n.c.push_back(embed_(c));
      n.normalize();
      for (auto& c : f.den.c) d.c.push_back(embed_(c));
      d.normalize();
      return RatFunc<K>(n.shift(tau_), d.shift(tau_));
    };
    RatFunc<K> x = conv(P.x), y = conv(P.y);
    RatFunc<K> X = x + RatFunc<K>(b2_over12_);
    RatFunc<K> Y = y + RatFunc<K>(a1_half_) * x + RatFunc<K>(a3_half_);
    if (upow_) {
      X = X / RatFunc<K>(Poly<K>::x_pow(nex, 2 * upow_));
      Y = Y / RatFunc<K>(Poly<K>::x_pow(nex, 3 * upow_));
    }
    Poly<K> t = Poly<K>::x(nex);
    long vx = X.is_zero() ? 0 : X.valuation(t);
    L.X = X;
    L.Y = Y;
    if (vx < 0) {
      if (vx % 2 != 0) throw std::runtime_error("PlaceAnalysis: odd pole order");
      L.at_pole = true;
      L.pole_k = -vx / 2;
    }
    return L;
  }

  LocalComp<K> comp_of(const LocalSection& S) const {
    LocalComp<K> c;
    K nex = tau_.zero();
    Poly<K> t = Poly<K>::x(nex);
    if (S.at_pole) {
      c.pos = LocalPos::AtO;
      c.po = S.pole_k;
      return c;
    }
    if (sym_ == KodSym::I0 || sym_ == KodSym::II || sym_ == KodSym::IIstar) return c;
    RatFunc<K> dx = S.X - RatFunc<K>(Poly<K>::constant(sing_x_));
    long vX0 = dx.is_zero() ? vdelta_ + 8 : dx.valuation(t);
    long vY = S.Y.is_zero() ? vdelta_ + 8 : S.Y.valuation(t);
    if (vX0 < 1 || vY < 1) return c;  // smooth point: identity component
    c.pos = LocalPos::NonIdentity;
    long N = vdelta_ + 6;
    switch (sym_) {
      case KodSym::In: {
        long n = n_;
        if (n <= 2) {
          c.in_m = std::min(vY, static_cast<long>(1));
          c.in_k = n == 2 ? 1 : -1;
          break;
        }
        Poly<K> Xs = hdetail::ser_of(S.X, N), Ys = hdetail::ser_of(S.Y, N);
        Poly<K> xi = hdetail::ser_trunc(Xs - node_r_, N);
        c.in_m = std::min({hdetail::ser_val(Ys, N), hdetail::ser_val(xi, N),
                           static_cast<long>(n / 2)});
        if (node_oriented_) {
          using H = hdetail::FieldHooks<K>;
          Poly<K> val = hdetail::ser_trunc(Xs - node_s_, N);
          auto W = hdetail::ser_sqrt(val, N, [&](const K& a) { return H::sqrt(a); });
          if (!W) throw std::runtime_error("PlaceAnalysis: missing branch square root");
          Poly<K> prod = hdetail::ser_mul(xi, *W, N);
          long dp = hdetail::ser_val(hdetail::ser_trunc(Ys - prod, N), N);
          long dm = hdetail::ser_val(hdetail::ser_trunc(Ys + prod, N), N);
          if (dp + dm != n) throw std::runtime_error("PlaceAnalysis: branch distance mismatch");
          c.in_k = dp;
        }
        break;
      }
      case KodSym::III:
      case KodSym::IIIstar:
        break;
      case KodSym::IV: {
        c.has_sig = true;
        c.sig = hdetail::ser_of(S.Y / RatFunc<K>(t), 2).coeff(0);
        break;
      }
      case KodSym::IVstar: {
        c.has_sig = true;
        c.sig = hdetail::ser_of(S.Y / RatFunc<K>(t * t), 2).coeff(0);
        break;
      }
      case KodSym::I0star: {
        c.has_root = true;
        c.root = hdetail::ser_of(S.X / RatFunc<K>(t), 2).coeff(0);
        break;
      }
      case KodSym::Instar: {
        K xbar = hdetail::ser_of(S.X / RatFunc<K>(t), 2).coeff(0);
        if (xbar == instar_simple_root_) {
          c.far_branch = false;
        } else {
          c.far_branch = true;
          long n = n_;
          if (n % 2 == 0) {
            Poly<K> X1 = hdetail::ser_of(S.X / RatFunc<K>(t), N);
            Poly<K> xi = hdetail::ser_trunc(X1 - instar_r_, N);
            if (2 * hdetail::ser_val(xi, N) < n)
              throw std::runtime_error("PlaceAnalysis: far-branch parity violated");
            c.has_sig = true;
            c.sig = xi.coeff(n / 2);
          } else {
            Poly<K> Ys = hdetail::ser_of(S.Y, N);
            c.has_sig = true;
            c.sig = Ys.coeff(1 + (n + 1) / 2);
          }
        }
        break;
      }
      default:
        throw std::runtime_error("PlaceAnalysis: unexpected symbol");
    }
    return c;
  }

  long contact_of(const LocalSection& P, const LocalSection& Q) const {
    K nex = tau_.zero();
    Poly<K> t = Poly<K>::x(nex);
    auto one_rf = RatFunc<K>(Poly<K>::constant(nex.one()));
    if (P.at_pole || Q.at_pole) {
      if (!(P.at_pole && Q.at_pole)) return 0;
      RatFunc<K> dz = (-P.X / P.Y) - (-Q.X / Q.Y);
      RatFunc<K> dw = (-one_rf / P.Y) - (-one_rf / Q.Y);
      if (dz.is_zero() && dw.is_zero()) throw std::invalid_argument("contact: identical sections");
      long vz = dz.is_zero() ? LONG_MAX / 2 : dz.valuation(t);
      long vw = dw.is_zero() ? LONG_MAX / 2 : dw.valuation(t);
      return std::max(0l, std::min(vz, vw));
    }
    std::vector<RatFunc<K>> g{RatFunc<K>(B_), RatFunc<K>(A_), RatFunc<K>::zero_of(nex), one_rf};
    RatFunc<K> XP = P.X, YP = P.Y, XQ = Q.X, YQ = Q.Y;
    long guard = vdelta_ + 4;
    RatFunc<K> tt(t);
    while (true) {
      K xbP = XP.eval(nex.zero()), ybP = YP.eval(nex.zero());
      K xbQ = XQ.eval(nex.zero()), ybQ = YQ.eval(nex.zero());
      if (!(xbP == xbQ) || !(ybP == ybQ)) return 0;
      RatFunc<K> xr(Poly<K>::constant(xbP));
      // derivative residue
      RatFunc<K> dacc = RatFunc<K>::zero_of(nex);
      for (size_t i = g.size(); i-- > 1;)
        dacc = dacc * xr + g[i] * RatFunc<K>(Poly<K>::constant(int_to_field(nex, (long)i)));
      bool fib_sing = ybP.is_zero() && dacc.eval(nex.zero()).is_zero();
      bool surf_sing = false;
      RatFunc<K> g_at = g.back();
      for (size_t i = g.size() - 1; i-- > 0;) g_at = g_at * xr + g[i];
      if (fib_sing) surf_sing = g_at.is_zero() || g_at.valuation(t) >= 2;
      if (!fib_sing || !surf_sing) {
        RatFunc<K> dx = XP - XQ, dy = YP - YQ;
        if (dx.is_zero() && dy.is_zero())
          throw std::invalid_argument("contact: identical sections");
        long vx = dx.is_zero() ? LONG_MAX / 2 : dx.valuation(t);
        long vy = dy.is_zero() ? LONG_MAX / 2 : dy.valuation(t);
        return std::max(0l, std::min(vx, vy));
      }
      if (--guard < 0) throw std::runtime_error("contact: replay guard tripped");
      // blow up at the common surface-singular point
      RatFunc<K> c0 = g_at / (tt * tt);
      RatFunc<K> c1 = dacc / tt;
      // g''(x)/2 and g'''(x)/6 * t
      RatFunc<K> d2 = RatFunc<K>::zero_of(nex);
      for (size_t i = g.size(); i-- > 2;)
        d2 = d2 * xr + g[i] * RatFunc<K>(Poly<K>::constant(int_to_field(nex, (long)(i * (i - 1) / 2))));
      RatFunc<K> c3 = g[3] * tt;
      g = {c0, c1, d2, c3};
      XP = (XP - xr) / tt;
      XQ = (XQ - xr) / tt;
      YP = YP / tt;
      YQ = YQ / tt;
    }
  }

  WModel<K> Eorig_, Echart_;
  PlaceT<K> place_;
  bool at_infinity_ = false;
  unsigned chi_ = 1;
  K tau_;
  std::function<K(const K&)> embed_;
  Poly<K> A_, B_, disc_;
  Poly<K> b2_over12_, a1_half_, a3_half_;
  unsigned upow_ = 0;
  long va_ = 0, vb_ = 0, vdelta_ = 0;
  KodSym sym_ = KodSym::I0;
  unsigned n_ = 0;
  K sing_x_;
  bool node_ready_ = false;
  bool node_oriented_ = true;
  Poly<K> node_r_, node_s_;
  bool instar_ready_ = false;
  K instar_double_root_, instar_simple_root_;
  Poly<K> instar_r_;
};

// ---- height engine ----------------------------------------------------------

template <class K>
class HeightEngine {
 public:
  explicit HeightEngine(const WModel<K>& E) : E_(E) {
    for (auto& p : bad_places(E_)) bad_.push_back(p);
  }

  const WModel<K>& model() const { return E_; }

  PlaceAnalysis<K>& at(const PlaceT<K>& p) {
    std::string key = p.at_infinity ? "@inf" : p.pi.str();
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
    auto an = std::make_shared<PlaceAnalysis<K>>(E_, p);
    return *cache_.emplace(key, std::move(an)).first->second;
  }

  // (P.O): contact with the zero section summed over all places
  Rat po(const SectionPt<K>& P) {
    if (P.zero) throw std::invalid_argument("po: zero section");
    long total = 0;
    for (auto& pl : contact_places_po(P)) total += pl.degree() * at(pl).po_contact(P);
    return Rat(total);
  }

  Rat height(const SectionPt<K>& P) {
    if (P.zero) return Rat(0);
    Rat h = Rat(2l * E_.chi) + Rat(2) * po(P);
    for (auto& pl : bad_) h -= Rat(pl.degree()) * at(pl).contr(P);
    return h;
  }

  Rat pairing(const SectionPt<K>& P, const SectionPt<K>& Q) {
    if (P.zero || Q.zero) return Rat(0);
    if (P == Q) return height(P);
    Rat v = Rat(static_cast<long>(E_.chi)) + po(P) + po(Q);
    // (P.Q) over crossing candidates
    for (auto& pl : crossing_places(P, Q)) v -= Rat(pl.degree() * at(pl).contact(P, Q));
    for (auto& pl : bad_) v -= Rat(pl.degree()) * at(pl).contr_pair(P, Q);
    return v;
  }

  const std::vector<PlaceT<K>>& bad() const { return bad_; }

 private:
  std::vector<PlaceT<K>> contact_places_po(const SectionPt<K>& P) {
    std::vector<PlaceT<K>> out = bad_;
    auto have = [&](const Poly<K>& pi) {
      for (auto& p : out)
        if (!p.at_infinity && p.pi == pi) return true;
      return false;
    };
    if (P.x.den.deg() > 0)
      for (auto& [pi, mult] : factor_hook<K>(P.x.den)) {
        (void)mult;
        if (pi.deg() >= 1 && !have(pi)) {
          PlaceT<K> p;
          p.pi = pi;
          out.push_back(p);
        }
      }
    bool has_inf = false;
    for (auto& p : out) has_inf |= p.at_infinity;
    if (!has_inf) {
      PlaceT<K> p;
      p.at_infinity = true;
      p.pi = Poly<K>::x(E_.base());
      out.push_back(p);
    }
    return out;
  }

  std::vector<PlaceT<K>> crossing_places(const SectionPt<K>& P, const SectionPt<K>& Q) {
    std::vector<PlaceT<K>> out = contact_places_po(P);
    auto have = [&](const Poly<K>& pi) {
      for (auto& p : out)
        if (!p.at_infinity && p.pi == pi) return true;
      return false;
    };
    auto add_factors = [&](const Poly<K>& f) {
      if (f.deg() < 1) return;
      for (auto& [pi, mult] : factor_hook<K>(f)) {
        (void)mult;
        if (pi.deg() >= 1 && !have(pi)) {
          PlaceT<K> p;
          p.pi = pi;
          out.push_back(p);
        }
      }
    };
    RatFunc<K> dx = P.x - Q.x;
    if (!dx.is_zero())
      add_factors(dx.num);
    else {
      RatFunc<K> dy = P.y - Q.y;
      if (!dy.is_zero()) add_factors(dy.num);
    }
    add_factors(Q.x.den);
    return out;
  }

  WModel<K> E_;
  std::vector<PlaceT<K>> bad_;
  std::map<std::string, std::shared_ptr<PlaceAnalysis<K>>> cache_;
};

// spec-facing wrapper: contr_v(P) / contr_v(P, Q) at one fibre
template <class K>
Rat local_contribution(const WModel<K>& E, const PlaceT<K>& place, const SectionPt<K>& P,
                       const SectionPt<K>* Q = nullptr) {
  PlaceAnalysis<K> an(E, place);
  if (!Q) return an.contr(P);
  return an.contr_pair(P, *Q);
}

template <class K>
Rat height(const WModel<K>& E, const SectionPt<K>& P) {
  HeightEngine<K> eng(E);
  return eng.height(P);
}

template <class K>
Rat pairing(const WModel<K>& E, const SectionPt<K>& P, const SectionPt<K>& Q) {
  HeightEngine<K> eng(E);
  return eng.pairing(P, Q);
}

}  // namespace ellsurf
