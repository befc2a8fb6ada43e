#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "ellsurf/delsarte.hpp"

using namespace ellsurf;

namespace {

QPoly two_term(unsigned hi, unsigned lo) {
  QPoly f(Rat(0));
  f.c.assign(hi + 1, Rat(0));
  f.c[lo] = Rat(1);
  f.c[hi] = Rat(1);
  return f;
}

WModel<Rat> b_model(const QPoly& B, unsigned chi = 0) {
  QPoly z(Rat(0));
  return make_model(z, z, z, z, B, chi, true);
}

}  // namespace

TEST_CASE("group_L: trivial when generators are integral") {
  // A = diag-ish with unit determinant analog: use the identity exponents
  DelsarteSurface S;
  S.A = IntMat::identity(4);
  auto L = group_L(S);
  CHECK(L.size() == 1);
  CHECK(lambda_count(L) == 0);  // only the zero vector
}

TEST_CASE("group_L: closure for y^2 = x^3 + t^5 + 1") {
  auto S = delsarte_from_b(two_term(5, 0));
  REQUIRE(S.has_value());
  auto L = group_L(*S);
  CHECK(L.size() > 1);
  long N = static_cast<long>(L.N.get_ui());
  std::set<std::array<long, 4>> elems(L.elems.begin(), L.elems.end());
  CHECK(elems.size() == L.size());
  // closed under addition and negation mod 1 (exhaustive)
  for (auto& a : L.elems)
    for (auto& b : L.elems) {
      std::array<long, 4> s;
      for (int i = 0; i < 4; ++i) s[i] = (a[i] + b[i]) % N;
      CHECK(elems.count(s) == 1);
    }
  for (auto& a : L.elems) {
    std::array<long, 4> m;
    for (int i = 0; i < 4; ++i) m[i] = (N - a[i]) % N;
    CHECK(elems.count(m) == 1);
  }
  // contains the defining generators (spot: nonzero elements exist)
  CHECK(elems.count({0, 0, 0, 0}) == 1);
}

TEST_CASE("lambda membership spec examples") {
  // element (1/2,1/2,1/2,1/2): only odd t allowed, sum is always 2 -> excluded
  SubgroupL L;
  L.N = 2;
  L.elems = {{1, 1, 1, 1}};
  CHECK(lambda_count(L) == 0);
  // element (1/6,1/6,1/6,1/2): t = 1 gives 1/6*3 + 1/2 = 1 != 2 -> included
  SubgroupL L2;
  L2.N = 6;
  L2.elems = {{1, 1, 1, 3}};
  CHECK(lambda_count(L2) == 1);
  // zero coordinates excluded
  SubgroupL L3;
  L3.N = 6;
  L3.elems = {{0, 1, 1, 1}};
  CHECK(lambda_count(L3) == 0);
}

TEST_CASE("lambda invariance under generator re-presentation") {
  // permuting the defining monomial rows leaves lambda unchanged
  auto S = delsarte_from_b(two_term(5, 0));
  REQUIRE(S.has_value());
  auto L1 = group_L(*S);
  DelsarteSurface S2 = *S;
  // swap rows 2 and 3 (the two t-monomials)
  for (size_t j = 0; j < 4; ++j) std::swap(S2.A(2, j), S2.A(3, j));
  auto L2 = group_L(S2);
  CHECK(L1.size() == L2.size());
  CHECK(lambda_count(L1) == lambda_count(L2));
  // unit-scan periodicity: t and t + M give the same sums by construction;
  // verified implicitly by the exhaustive residue scan
}

TEST_CASE("delsarte_rank: t^5 + 1 has rank 8 (rational member)") {
  auto S = delsarte_from_b(two_term(5, 0));
  REQUIRE(S.has_value());
  auto E = b_model(two_term(5, 0));
  auto rep = delsarte_rank(*S, E);
  CHECK(rep.euler == 12);
  CHECK(rep.rank == 8);
  CHECK(rep.lambda == 0);
  // cross-oracle agreement with Shioda-Tate on the rational member
  CHECK(rep.rank == shioda_tate_rank(E));
  // the misprinted closing formula gives a different (wrong) value here
  CHECK(rep.rank_alt_reading != rep.rank);
}

TEST_CASE("delsarte_rank: K3 chart t(t^10+1) has rank 16") {
  QPoly B(Rat(0));
  B.c.assign(12, Rat(0));
  B.c[1] = Rat(1);
  B.c[11] = Rat(1);
  auto S = delsarte_from_b(B);
  REQUIRE(S.has_value());
  auto E = b_model(B, 2);
  auto rep = delsarte_rank(*S, E);
  CHECK(rep.euler == 24);
  CHECK(rep.lambda == 4);
  CHECK(rep.rank == 16);
}

TEST_CASE("delsarte_rank: rank-68 surface y^2 = x^3 + t^360 + 1") {
  QPoly B = two_term(360, 0);
  auto S = delsarte_from_b(B);
  REQUIRE(S.has_value());
  // exponent rows of the degree-360 projective model
  CHECK(S->A(2, 0) == 360);
  CHECK(S->A(0, 3) == 358);
  auto E = b_model(B, 60);
  auto rep = delsarte_rank(*S, E);
  CHECK(rep.euler == 720);
  CHECK(rep.sum_m_minus_1 == 0);
  CHECK(rep.L_size == 2160);
  CHECK(rep.lambda == 648);
  CHECK(rep.rank == 68);
  CHECK(rep.rank_alt_reading != 68);  // calibration evidence for the adopted reading
  CHECK(rep.lambda_forall != rep.lambda);  // the readings genuinely differ here
}

TEST_CASE("delsarte vs shioda-tate on all rational two-term members") {
  // every (hi, lo) with the two-term shape and chi = 1
  std::vector<std::pair<unsigned, unsigned>> shapes = {
      {3, 2}, {4, 3}, {3, 1}, {4, 2}, {5, 3}, {4, 1}, {5, 2}, {5, 0}, {6, 1}, {5, 1},
  };
  for (auto& [hi, lo] : shapes) {
    QPoly B = two_term(hi, lo);
    auto S = delsarte_from_b(B);
    REQUIRE(S.has_value());
    auto E = b_model(B);
    if (E.chi != 1) continue;
    auto rep = delsarte_rank(*S, E);
    CHECK(rep.rank == shioda_tate_rank(E));
  }
}
