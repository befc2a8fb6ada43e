#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ellsurf/weierstrass.hpp"

using namespace ellsurf;

namespace {

QPoly qp(std::vector<long> coeffs) {
  QPoly f{Rat(0)};
  for (long c : coeffs) f.c.push_back(Rat(c));
  f.normalize();
  return f;
}

FqPoly fqp(const FqPtr& F, std::vector<long> coeffs) {
  FqPoly f{FqElem(F, 0)};
  Int p(static_cast<unsigned long>(F->p));
  for (long c : coeffs) {
    Int v = Int(c) % p;
    if (v < 0) v += p;
    f.c.push_back(FqElem(F, v.get_ui()));
  }
  f.normalize();
  return f;
}

template <class K>
WModel<K> b_model(const Poly<K>& B, unsigned chi = 0, bool allow_large = false) {
  Poly<K> z(B.base);
  return make_model(z, z, z, z, B, chi, allow_large);
}

// independent brute-force search oracle: all integral sections with
// x = a t^2 + b t + c over F_p (chi = 1 models)
template <class K = FqElem>
std::vector<SectionPt<FqElem>> brute_sections(const WModel<FqElem>& E) {
  const FqPtr& F = E.base().F;
  std::vector<SectionPt<FqElem>> out;
  std::uint64_t p = F->p;
  auto cs = complete_square(E);
  for (std::uint64_t a = 0; a < p; ++a)
    for (std::uint64_t b = 0; b < p; ++b)
      for (std::uint64_t c = 0; c < p; ++c) {
        FqPoly x = fqp(F, {static_cast<long>(c), static_cast<long>(b), static_cast<long>(a)});
        FqPoly rhs = x * x * x + cs.model.a2 * x * x + cs.model.a4 * x + cs.model.a6;
        auto y = poly_sqrt(rhs);
        if (!y) continue;
        auto P1 = cs.map.bwd(SectionPt<FqElem>::affine(RatFunc<FqElem>(x), RatFunc<FqElem>(*y)));
        auto P2 = cs.map.bwd(SectionPt<FqElem>::affine(RatFunc<FqElem>(x), RatFunc<FqElem>(-*y)));
        out.push_back(P1);
        if (!(P1 == P2)) out.push_back(P2);
      }
  return out;
}

}  // namespace

TEST_CASE("invariants: j = 0 and j = 1728 families, singular rejection") {
  // y^2 = x^3 + B: c4 = 0, c6 = -864 B, disc = -432 B^2
  QPoly B = qp({0, 0, 0, 1, 1});  // t^4 + t^3
  auto E = b_model(B);
  auto v = invariants(E);
  CHECK(v.c4.is_zero());
  CHECK(v.c6 == B.scaled(Rat(-864)));
  CHECK(v.disc == (B * B).scaled(Rat(-432)));
  CHECK(E.isotrivial);  // j = 0 everywhere
  // y^2 = x^3 + a4 x: c4 = -48 a4, c6 = 0
  QPoly z(Rat(0));
  auto E2 = make_model(z, z, z, qp({0, 0, 0, 1}), z);
  auto v2 = invariants(E2);
  CHECK(v2.c4 == qp({0, 0, 0, 1}).scaled(Rat(-48)));
  CHECK(v2.c6.is_zero());
  // singular: y^2 = x^3 rejected
  CHECK_THROWS_WITH(b_model(QPoly(Rat(0))), "make_model: constant surface rejected");
  CHECK_THROWS_WITH(make_model(z, qp({0, 1}), z, z, z), "singular surface");
}

TEST_CASE("invariants identity 1728 disc = c4^3 - c6^2 on random models") {
  std::mt19937_64 rng(7);
  int done = 0;
  for (int trial = 0; trial < 250 && done < 200; ++trial) {
    auto rnd = [&](int maxdeg) {
      QPoly f{Rat(0)};
      for (int i = 0; i <= maxdeg; ++i) f.c.push_back(Rat(static_cast<long>(rng() % 7) - 3));
      f.normalize();
      return f;
    };
    try {
      auto E = make_model(rnd(1), rnd(2), rnd(3), rnd(4), rnd(6));
      auto v = invariants(E);
      CHECK(v.disc.scaled(Rat(1728)) == v.c4 * v.c4 * v.c4 - v.c6 * v.c6);
      CHECK((v.b8.scaled(Rat(4)) == v.b2 * v.b6 - v.b4 * v.b4));
      ++done;
    } catch (const std::exception&) {
      // singular or constant draw: skip
    }
  }
  CHECK(done == 200);
}

TEST_CASE("group law: identity, inverse, known point on y^2 = x^3 + t^4 + t^3") {
  auto E = b_model(qp({0, 0, 0, 1, 1}));
  auto P = SectionPt<Rat>::affine(qp({0, -1}), qp({0, 0, 1}));  // (-t, t^2)
  REQUIRE(on_curve(E, P));
  auto O = SectionPt<Rat>::zero_of(Rat(0));
  CHECK(add(E, P, O) == P);
  CHECK(add(E, P, negate(E, P)).zero);
  // doubling against the independent duplication-formula oracle
  auto D = add(E, P, P);
  CHECK(on_curve(E, D));
  // oracle: x(2P) = ((3x^2 + a4) / (2y))^2 - 2x for y^2 = x^3 + a4 x + a6
  RatFunc<Rat> x = P.x, y = P.y;
  RatFunc<Rat> lam = (x * x * int_to_rf(E, 3)) / (y * int_to_rf(E, 2));
  RatFunc<Rat> x2 = lam * lam - x - x;
  CHECK(D.x == x2);
  // doubling this particular point lands back in the integral range
  CHECK(D.x.is_poly());
  CHECK(D.x.poly().deg() <= 2);
  // higher multiples do leave the polynomial range
  auto T = multiple(E, P, 4);
  CHECK(on_curve(E, T));
  CHECK(!T.zero);
  CHECK(!T.x.is_poly());
  // triple and compare with repeated addition
  CHECK(multiple(E, P, 3) == add(E, add(E, P, P), P));
}

TEST_CASE("group law associativity over F_q(t), 200 random triples") {
  auto F = fq_field(7);
  auto E = b_model(fqp(F, {0, 0, 0, 1, 1}));
  auto secs = brute_sections(E);
  REQUIRE(secs.size() >= 3);
  std::mt19937_64 rng(555);
  int done = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto pick = [&]() {
      auto s = secs[rng() % secs.size()];
      long m = 1 + static_cast<long>(rng() % 3);
      return multiple(E, s, m);
    };
    auto P = pick(), Q = pick(), R = pick();
    auto lhs = add(E, add(E, P, Q), R);
    auto rhs = add(E, P, add(E, Q, R));
    CHECK(lhs == rhs);
    CHECK(on_curve(E, lhs));
    ++done;
  }
  CHECK(done == 200);
}

TEST_CASE("transform: identity, u-scaling, round trip on sections") {
  auto E = b_model(qp({0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1}));  // t^10 + t^9 = t^6(t^4+t^3)
  Rat ex(0);
  auto tr_id = transform(E, int_to_rf(E, 1), RatFunc<Rat>::zero_of(ex),
                         RatFunc<Rat>::zero_of(ex), RatFunc<Rat>::zero_of(ex), true);
  CHECK(tr_id.model.a6 == E.a6);
  // u = t: B -> B / t^6
  RatFunc<Rat> u(QPoly(Rat(0), {Rat(0), Rat(1)}));
  auto tr = transform(E, u, RatFunc<Rat>::zero_of(ex), RatFunc<Rat>::zero_of(ex),
                      RatFunc<Rat>::zero_of(ex));
  CHECK(tr.model.a6 == qp({0, 0, 0, 1, 1}));
  // transporter is a bijection model<->model on sections
  auto P = SectionPt<Rat>::affine(qp({0, -1}), qp({0, 0, 1}));  // on the image model
  REQUIRE(on_curve(tr.model, P));
  auto Pback = tr.map.bwd(P);
  CHECK(on_curve(E, Pback));
  CHECK(tr.map.fwd(Pback) == P);
}

TEST_CASE("infinity_model spec examples") {
  // y^2 = x^3 + t^5 + 1, chi 1 -> s + s^6
  auto E = b_model(qp({1, 0, 0, 0, 0, 1}));
  auto Einf = infinity_model(E);
  CHECK(Einf.a6 == qp({0, 1, 0, 0, 0, 0, 1}));
  // rank-68 surface: t^360 + 1, chi 60 -> 1 + s^360 (good reduction at s = 0)
  QPoly t360(Rat(0));
  t360.c.assign(361, Rat(0));
  t360.c[0] = Rat(1);
  t360.c[360] = Rat(1);
  QPoly z(Rat(0));
  auto E68 = make_model(z, z, z, z, t360, 60, true);
  auto E68inf = infinity_model(E68);
  CHECK(E68inf.a6 == t360);  // symmetric shape
  CHECK(!E68inf.a6.coeff(0).is_zero());
  // constant coefficients keep shape
  auto E3 = make_model(z, z, z, qp({0, 1}), qp({1}));
  auto E3i = infinity_model(E3);
  CHECK(E3i.a4.deg() <= 4);
  // degree violation: a6 of degree 7 with chi 1
  CHECK_THROWS(infinity_model(b_model(qp({1, 0, 0, 0, 0, 0, 0, 2}), 1, true)));
}

TEST_CASE("base_change: Chebyshev-type substitution lands on the K3 chart") {
  // u -> t + 1/t on y^2 = x^3 + u^5 - 5u^3 + 5u gives y^2 = x^3 + t(t^10+1)
  auto E = b_model(qp({0, 5, 0, -5, 0, 1}));
  Rat ex(0);
  QPoly t = QPoly::x(Rat(0));
  RatFunc<Rat> g(t * t + QPoly::constant(Rat(1)), t);  // t + 1/t
  auto bc = base_change(E, g, true);
  QPoly expect(Rat(0));
  expect.c.assign(12, Rat(0));
  expect.c[1] = Rat(1);
  expect.c[11] = Rat(1);
  CHECK(bc.model.a6 == expect);
  CHECK(bc.model.chi == 2);
  // identity substitution u -> t
  auto bc_id = base_change(E, RatFunc<Rat>(t));
  CHECK(bc_id.model.a6 == E.a6);
}

TEST_CASE("base_change transport: sections satisfy the new equation (F_11, zeta_5)") {
  auto F = fq_field(11);
  // sections of y^2 = x^3 + t^5 - 5 t^3 + 5t over F_11, transported along u -> t + 1/t
  auto E = b_model(fqp(F, {0, 5, 0, -5, 0, 1}));
  auto secs = brute_sections(E);
  REQUIRE(!secs.empty());
  FqPoly t = FqPoly::x(FqElem(F, 0));
  RatFunc<FqElem> g(t * t + FqPoly::constant(FqElem(F, 1)), t);
  auto bc = base_change(E, g, true);
  int checked = 0;
  for (auto& s : secs) {
    auto img = bc.transport(s);
    CHECK(on_curve(bc.model, img));
    if (++checked >= 25) break;
  }
  CHECK(checked > 0);
  // zeta_5 = 3 in F_11; u -> zeta t on the K3 chart scales a6 by zeta
  auto K3 = bc.model;
  FqPoly zt(FqElem(F, 0));
  zt.c = {FqElem(F, 0), FqElem(F, 3)};
  auto bz = base_change(K3, RatFunc<FqElem>(zt), true);
  CHECK(bz.model.a6 == K3.a6.scaled(FqElem(F, 3)));
  // twisting back by zeta^-1 = 3^-1 recovers the chart; transports exist since
  // 11 = 1 mod 5 supplies the needed radicals of zeta
  FqElem zinv = FqElem(F, 3).inv();
  auto tw = twist(bz.model, zinv, true);
  CHECK(tw.model.a6 == K3.a6);
  REQUIRE(tw.transport_available);
  auto P = bz.transport(bc.transport(secs[0]));
  REQUIRE(on_curve(bz.model, P));
  auto Pb = tw.transport(P);
  CHECK(on_curve(K3, Pb));
}

TEST_CASE("twist: identity, perfect power over Q, unit twist over F_q") {
  auto E = b_model(qp({1, 1}));  // y^2 = x^3 + t + 1
  auto t1 = twist(E, Rat(1));
  CHECK(t1.model.a6 == E.a6);
  REQUIRE(t1.transport_available);
  // d = 64: transport (x, y) -> (4x, 8y)
  auto t64 = twist(E, Rat(64));
  CHECK(t64.model.a6 == E.a6.scaled(Rat(64)));
  REQUIRE(t64.transport_available);
  // build a section over Q on E': need one on E first; use a non-integral one:
  // x = t-free trick: verify transport algebraically on a synthetic point of E
  // over the function field: (x, y) with y^2 = x^3 + t + 1 ... use x = -1, y = t^(1/2)?
  // instead check the map on the curve equation: for any (x,y) on E, (4x, 8y)
  // must satisfy E'. Do it with an indeterminate-point check over F_q:
  auto F = fq_field(13);
  auto Ef = b_model(fqp(F, {0, 0, 0, 1, 1}));  // t^4 + t^3: carries (-t, t^2)
  auto secs = brute_sections(Ef);
  REQUIRE(!secs.empty());
  auto t64f = twist(Ef, FqElem(F, 64 % 13));
  if (t64f.transport_available) {
    auto img = t64f.transport(secs[0]);
    CHECK(on_curve(t64f.model, img));
  }
  // d = 2 over Q: no rational radicals -> transport unavailable with minpoly
  auto t2 = twist(E, Rat(2));
  CHECK(!t2.transport_available);
  CHECK(t2.missing_minpoly.find("z^3") == 0);
  CHECK_THROWS_AS(twist_transport_or_throw(t2, SectionPt<Rat>::zero_of(Rat(0))),
                  ExtensionRequiredError);
  // q = 13 = 1 mod 6: any unit has both radicals in F_13^2 at worst; pick d with
  // radicals present: d = g^6
  FqElem g6 = FqElem(F, 2).pow(6);
  auto tw6 = twist(Ef, g6);
  REQUIRE(tw6.transport_available);
  for (auto& s : secs) {
    auto img = tw6.transport(s);
    CHECK(on_curve(tw6.model, img));
  }
  CHECK_THROWS(twist(E, Rat(0)));
}

TEST_CASE("transform round-trip property (randomized)") {
  std::mt19937_64 rng(808);
  auto F = fq_field(11);
  auto E = b_model(fqp(F, {0, 0, 0, 1, 1}));
  auto secs = brute_sections(E);
  REQUIRE(!secs.empty());
  for (int trial = 0; trial < 50; ++trial) {
    // random scalar u with small r, s, w polynomials
    FqElem u(F, 1 + rng() % 10);
    FqPoly r = fqp(F, {static_cast<long>(rng() % 11)});
    FqPoly s = fqp(F, {static_cast<long>(rng() % 11)});
    FqPoly w = fqp(F, {static_cast<long>(rng() % 11), static_cast<long>(rng() % 11)});
    auto tr = transform(E, RatFunc<FqElem>(FqPoly::constant(u)), RatFunc<FqElem>(r),
                        RatFunc<FqElem>(s), RatFunc<FqElem>(w), true);
    auto& P = secs[rng() % secs.size()];
    auto img = tr.map.fwd(P);
    CHECK(on_curve(tr.model, img));
    CHECK(tr.map.bwd(img) == P);
  }
}
