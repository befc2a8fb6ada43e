#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ellsurf/mwlattice.hpp"

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

}  // namespace

TEST_CASE("search_integral finds (-t, +-t^2) on y^2 = x^3 + t^4 + t^3") {
  for (std::uint64_t p : {7ull, 11ull}) {
    auto F = fq_field(p);
    auto E = b_model(fqp(F, {0, 0, 0, 1, 1}));
    auto S = search_integral(E);
    CHECK(S.complete);
    bool plus = false, minus = false;
    for (auto& s : S.sections) {
      if (s.x.is_poly() && s.x.num == fqp(F, {0, -1})) {
        if (s.y.num == fqp(F, {0, 0, 1})) plus = true;
        if (s.y.num == fqp(F, {0, 0, -1})) minus = true;
      }
    }
    CHECK(plus);
    CHECK(minus);
    CHECK(S.sections.size() <= 240);
  }
}

TEST_CASE("budget guard: brute backend rejects oversized fields") {
  auto F = fq_field(5, 2);
  auto E = b_model(fqp(F, {0, 0, 0, 1, 1}));
  CHECK_THROWS_WITH_AS(search_integral(E, 100.0), doctest::Contains("use elimination backend"),
                       std::runtime_error);
}

namespace {

// pick a prime from the list keeping every coordinate field degree <= maxdeg,
// so the brute cross-check stays inside its budget
std::uint64_t small_degree_prime(const std::vector<long>& B, std::uint32_t maxdeg) {
  for (std::uint64_t p : {7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull, 41ull, 43ull}) {
    auto F = fq_field(p);
    auto E = b_model(fqp(F, B));
    auto degs = section_degrees(E);
    std::uint32_t m = 1;
    for (auto d : degs) m = std::lcm(m, d);
    if (m <= maxdeg) return p;
  }
  throw std::runtime_error("no small-degree prime in range");
}

}  // namespace

TEST_CASE("cross-backend equality on five fixtures") {
  std::vector<std::vector<long>> fixtures = {
      {0, 0, 0, 1, 1},     // t^4+t^3 = t^3(t+1)
      {0, 0, 1, 0, 1},     // t^2(t^2+1)
      {0, 0, 1, 1},        // t^2(t+1)
      {0, 1, 0, 1},        // t(t^2+1)
      {0, 0, 0, 1, 0, 1},  // t^3(t^2+1)
  };
  for (auto& fx : fixtures) {
    auto F = fq_field(small_degree_prime(fx, 2));
    auto E = b_model(fqp(F, fx));
    auto ideal = search_via_ideal(E);
    // brute search over the same big field
    auto brute = search_integral(ideal.E);
    REQUIRE(ideal.sections.size() == brute.sections.size());
    for (size_t i = 0; i < ideal.sections.size(); ++i)
      CHECK(section_cmp(ideal.sections[i], brute.sections[i]) == 0);
  }
}

TEST_CASE("coefficient system over F_11 for y^2 = x^3 + t^2(t+1): zero-dimensional, counts match") {
  auto F = fq_field(11);
  auto E = b_model(fqp(F, {0, 0, 1, 1}));
  auto gens = section_ideal_gens(E);
  CHECK(gens.size() == 7);  // equations from t^0..t^6
  auto I = buchberger(gens, MonOrder::Lex);
  auto dim = quotient_dim(I, 7);
  REQUIRE(dim.has_value());  // zero-dimensional
  auto ideal = search_via_ideal(E);
  auto brute = search_integral(ideal.E);
  CHECK(ideal.sections.size() == brute.sections.size());
}

TEST_CASE("coordinate eliminants over Q: t^2(t^2+1) splitting degree 6 downstream") {
  auto E = b_model(qp({0, 0, 1, 0, 1}));
  auto elims = coordinate_eliminants(E);
  REQUIRE(elims.size() == 7);
  for (auto& e : elims) {
    CHECK(e.deg() >= 1);
    // squarefree
    CHECK(poly_gcd(e, e.derivative()).deg() == 0);
  }
  // the leading x-coefficient eliminant has splitting field of degree 6 = deg
  // of an S3 closure: its irreducible factors have degrees dividing 6, with a
  // cubic or sextic present
  auto fs = factor_q(elims[0]);
  long maxdeg = 0;
  for (auto& [g, e] : fs) maxdeg = std::max(maxdeg, g.deg());
  CHECK(maxdeg >= 3);
}

TEST_CASE("frobenius orbits and field of definition") {
  auto F = fq_field(11);
  auto E = b_model(fqp(F, {0, 0, 1, 0, 1}));  // t^2(t^2+1), rank 4
  auto S = search_via_ideal(E);
  CHECK(S.sections.size() <= 240);
  REQUIRE(!S.sections.empty());
  auto fr = frobenius_orbits(S, 1);  // q = 7
  // all sections defined over F_{7^fod}
  std::uint32_t fod = fr.fod_degree;
  CHECK(fod >= 1);
  std::uint32_t bigk = S.sections[0].x.num.base.F->k;
  CHECK(bigk % fod == 0);
  // orbit degree divides fod
  for (auto d : fr.orbit_degrees) CHECK(fod % d == 0);
  // all-rational set has fod 1
  auto E2 = b_model(fqp(F, {0, 0, 0, 1, 1}));
  auto S2 = search_integral(E2);
  auto fr2 = frobenius_orbits(S2, 1);
  CHECK(fr2.fod_degree == 1);
  for (auto& orb : fr2.orbits) CHECK(orb.size() == 1);
}

TEST_CASE("gram rank equals Shioda-Tate rank on fixtures") {
  struct Row {
    std::vector<long> B;
    long rank;
  };
  std::vector<Row> rows = {
      {{0, 0, 0, 1, 1}, 2},  // t^4 + t^3 (t^3(t+1) reading)
      {{0, 0, 1, 1}, 2},     // t^2(t+1)
      {{0, 0, 1, 0, 1}, 4},  // t^2(t^2+1)
  };
  for (auto& row : rows) {
    auto Eq = b_model(qp(row.B));
    CHECK(shioda_tate_rank(Eq) == row.rank);
    auto F = fq_field(small_degree_prime(row.B, 2));
    auto E = b_model(fqp(F, row.B));
    auto S = search_via_ideal(E);
    HeightEngine<FqElem> eng(S.E);
    auto G = gram_matrix(eng, S.sections);
    CHECK(gram_rank(G) == static_cast<size_t>(row.rank));
  }
}

TEST_CASE("gram is Frobenius-invariant") {
  auto F = fq_field(11);  // coordinate degrees 1 and 2 here
  auto E = b_model(fqp(F, {0, 0, 1, 0, 1}));
  auto S = search_via_ideal(E);
  auto fr = frobenius_orbits(S, 1);
  HeightEngine<FqElem> eng(S.E);
  auto G = gram_matrix(eng, S.sections);
  // the permutation induced by Frobenius preserves the pairing
  std::vector<size_t> perm(S.sections.size());
  for (size_t i = 0; i < S.sections.size(); ++i) {
    auto img = frobenius_section(S.sections[i], 1);
    bool found = false;
    for (size_t j = 0; j < S.sections.size(); ++j)
      if (section_cmp(S.sections[j], img) == 0) {
        perm[i] = j;
        found = true;
      }
    REQUIRE(found);
  }
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    size_t i = rng() % S.sections.size(), j = rng() % S.sections.size();
    CHECK(G(i, j) == G(perm[i], perm[j]));
  }
}

TEST_CASE("mw_basis: rank 4 basis for t^2(t^2+1), torsion trivial") {
  auto F = fq_field(43);  // fully split: all 60 sections rational
  auto E = b_model(fqp(F, {0, 0, 1, 0, 1}));
  auto S = search_via_ideal(E);
  auto B = mw_basis(S.E, S.sections);
  CHECK(B.rank == 4);
  CHECK(B.torsion_structure == "1");
  CHECK(B.gens.size() == 4);
  for (auto& g : B.gens) CHECK(on_curve(S.E, g));
  CHECK(gram_rank(B.gram) == 4);
  CHECK(B.det > Rat(0));
}

TEST_CASE("mw_basis: rank 2 with Z/3 torsion on y^2 = x^3 + (t^3+2)^2") {
  QPoly b = qp({2, 0, 0, 1});
  QPoly B = b * b;
  auto Eq = b_model(B);
  CHECK(shioda_tate_rank(Eq) == 2);
  auto F = fq_field(7);
  auto E = b_model(fqp(F, {4, 0, 0, 4, 0, 0, 1}));  // (t^3+2)^2 mod 7
  auto S = search_integral(E);
  // torsion sections (0, +-(t^3+2)) are present
  bool tor = false;
  for (auto& s : S.sections)
    if (s.x.num.is_zero()) tor = true;
  CHECK(tor);
  auto Bm = mw_basis(E, S.sections);
  CHECK(Bm.torsion_structure == "Z/3");
  CHECK(Bm.rank <= 2);  // F_7-rational part only; geometric rank is 2
}

TEST_CASE("specialization oracle: kernels for dependent inputs") {
  auto F = fq_field(11);
  auto E = b_model(fqp(F, {0, 0, 0, 1, 1}));
  auto P = SectionPt<FqElem>::affine(fqp(F, {0, -1}), fqp(F, {0, 0, 1}));
  REQUIRE(on_curve(E, P));
  std::vector<FqElem> taus;
  for (std::uint64_t v = 2; v < 9; ++v) taus.push_back(FqElem(F, v));
  // membership of a vector in the HNF-spanned kernel lattice
  auto in_lattice = [](const IntMat& ker, long a, long b) {
    // rows are in echelon form; solve by forward substitution
    Int x(a), y(b);
    for (size_t i = 0; i < ker.rows; ++i) {
      if (ker(i, 0) != 0) {
        if (x % ker(i, 0) != 0) return false;
        Int q = x / ker(i, 0);
        x -= q * ker(i, 0);
        y -= q * ker(i, 1);
      } else if (ker(i, 1) != 0) {
        if (y % ker(i, 1) != 0) return false;
        y = y % ker(i, 1);
      }
    }
    return x == 0 && y == 0;
  };
  // P and -P: kernel contains (1, 1)
  {
    std::vector<SectionPt<FqElem>> secs{P, negate(E, P)};
    auto res = specialization_oracle(E, secs, taus);
    REQUIRE(res.kernel.rows >= 1);
    CHECK(in_lattice(res.kernel, 1, 1));
    CHECK(!in_lattice(res.kernel, 1, 0));  // P itself is not a relation
  }
  // P and 2P: kernel contains (2, -1)
  {
    std::vector<SectionPt<FqElem>> secs{P, multiple(E, P, 2)};
    auto res = specialization_oracle(E, secs, taus);
    CHECK(in_lattice(res.kernel, 2, -1));
    CHECK(!in_lattice(res.kernel, 1, 0));
  }
  // independent sections from the rank-2 lattice: trivial kernel
  {
    auto S = search_integral(E);
    auto Bm = mw_basis(E, S.sections);
    if (Bm.rank >= 2) {
      std::vector<SectionPt<FqElem>> secs{Bm.gens[0], Bm.gens[1]};
      auto res = specialization_oracle(E, secs, taus);
      CHECK(res.rank_lower_bound == 2);
      // cross-check with the nonsingular Gram
      HeightEngine<FqElem> eng(E);
      auto G = gram_matrix(eng, secs);
      CHECK(gram_rank(G) == 2);
    }
  }
}

TEST_CASE("choose_good_prime") {
  auto E = b_model(qp({0, 0, 0, 1, 1}));
  CHECK(choose_good_prime(E) == 5);
  // coefficient denominator 7 is avoided
  QPoly B(Rat(0));
  B.c = {Rat(1, 7), Rat(0), Rat(0), Rat(0), Rat(1)};
  auto E2 = b_model(B);
  CHECK(choose_good_prime(E2) % 7 != 0);
  // explicit avoid list
  CHECK(choose_good_prime(E, {Int(5)}) != 5);
}
