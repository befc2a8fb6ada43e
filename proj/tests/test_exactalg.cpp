#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ellsurf/factor.hpp"
#include "ellsurf/intmat.hpp"
#include "ellsurf/lll.hpp"
#include "ellsurf/numeric.hpp"
#include "ellsurf/poly.hpp"

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

FqPoly remul(const std::vector<std::pair<FqPoly, unsigned>>& facs, const FqElem& unit) {
  FqPoly r = FqPoly::constant(unit);
  for (auto& [g, e] : facs)
    for (unsigned i = 0; i < e; ++i) r = r * g;
  return r;
}

QPoly remul_q(const std::vector<std::pair<QPoly, unsigned>>& facs, const Rat& unit) {
  QPoly r = QPoly::constant(unit);
  for (auto& [g, e] : facs)
    for (unsigned i = 0; i < e; ++i) r = r * g;
  return r;
}

}  // namespace

TEST_CASE("rational arithmetic basics") {
  Rat a(1, 3), b(2, 5);
  CHECK(a + b == Rat(11, 15));
  CHECK((a * b).num() == 2);
  CHECK((a * b).den() == 15);
  CHECK(a.inv() == Rat(3));
  CHECK(rat_sqrt(Rat(49, 4)) == Rat(7, 2));
  CHECK(!rat_sqrt(Rat(2)).has_value());
}

TEST_CASE("finite field arithmetic and sqrt") {
  auto F5 = fq_field(5);
  FqElem two(F5, 2), three(F5, 3);
  CHECK((two * three).c[0] == 1);
  CHECK(two.inv().c[0] == 3);

  auto F49 = fq_field(7, 2);
  FqElem g = FqElem::make(F49, {3, 5});
  CHECK((g * g.inv()).is_one());
  CHECK(g.pow(49) == g);  // x^q = x
  // every square has a sqrt that squares back
  FqElem s = g * g;
  auto r = fq_sqrt(s);
  REQUIRE(r.has_value());
  CHECK((*r) * (*r) == s);
  // -1 is a non-residue mod 7
  auto F7 = fq_field(7);
  CHECK(!fq_sqrt(FqElem(F7, 6)).has_value());
}

TEST_CASE("factor_fq spec examples") {
  auto F5 = fq_field(5);
  // x^2+1 over F5 -> (x+2)(x+3)
  auto fs = factor_fq(fqp(F5, {1, 0, 1}));
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].first == fqp(F5, {2, 1}));
  CHECK(fs[1].first == fqp(F5, {3, 1}));
  // x^2+1 over F7 irreducible
  auto F7 = fq_field(7);
  auto fs7 = factor_fq(fqp(F7, {1, 0, 1}));
  REQUIRE(fs7.size() == 1);
  CHECK(fs7[0].first.deg() == 2);
  CHECK(fq_irreducible_poly(fqp(F7, {1, 0, 1})));
  // x^3 - x over F5 -> x(x-1)(x+1)
  auto fs3 = factor_fq(fqp(F5, {0, -1, 0, 1}));
  REQUIRE(fs3.size() == 3);
  for (auto& [g, e] : fs3) {
    CHECK(g.deg() == 1);
    CHECK(e == 1);
  }
  CHECK_THROWS(factor_fq(FqPoly(FqElem(F5, 0))));
}

TEST_CASE("factor_fq re-multiplication property (randomized)") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 120; ++trial) {
    std::uint64_t p = (trial % 3 == 0) ? 5 : (trial % 3 == 1 ? 11 : 13);
    std::uint32_t k = (trial % 4 == 0) ? 2 : 1;
    auto F = fq_field(p, k);
    FqPoly f(FqElem(F, 0));
    int d = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i <= d; ++i) {
      std::vector<std::uint64_t> co(k);
      for (auto& x : co) x = rng() % p;
      f.c.push_back(FqElem::make(F, std::move(co)));
    }
    f.normalize();
    if (f.deg() < 1) continue;
    auto fs = factor_fq(f);
    CHECK(remul(fs, f.lc()) == f);
    // brute root cross-check for small degree
    for (auto& [g, e] : fs) {
      if (g.deg() <= 3 && k == 1) {
        bool has_root = false;
        for (std::uint64_t v = 0; v < p; ++v)
          if (g.eval(FqElem(F, v)).is_zero()) has_root = true;
        if (g.deg() == 2 || g.deg() == 3) CHECK(!has_root);  // irreducible => rootless
      }
    }
  }
}

TEST_CASE("factor_q spec examples") {
  // x^4 - 1 -> (x-1)(x+1)(x^2+1)
  auto fs = factor_q(qp({-1, 0, 0, 0, 1}));
  REQUIRE(fs.size() == 3);
  CHECK(fs[0].first == qp({-1, 1}));
  CHECK(fs[1].first == qp({1, 1}));
  CHECK(fs[2].first == qp({1, 0, 1}));
  // the degree-6 field generator: irreducible
  QPoly sext = qp({8708389056L, -60466176L, 34992L, 186624L, 324L, 0L, 1L});
  // coefficients ascending: 8708389056 - 60466176 x + 34992 x^2 + 186624 x^3 + 324 x^4 + x^6
  CHECK(q_irreducible(sext));
  // x^2 - x - 1 irreducible
  CHECK(q_irreducible(qp({-1, -1, 1})));
  CHECK_THROWS(factor_q(QPoly(Rat(0))));
}

TEST_CASE("factor_q re-multiplication (randomized) and cyclotomic path") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 80; ++trial) {
    QPoly f{Rat(0)};
    int d = 1 + static_cast<int>(rng() % 7);
    for (int i = 0; i <= d; ++i) f.c.push_back(Rat(static_cast<long>(rng() % 21) - 10));
    f.normalize();
    if (f.deg() < 1) continue;
    auto fs = factor_q(f);
    // product of monic factors equals monic f
    CHECK(remul_q(fs, Rat(1)) == f.monic());
  }
  // t^360 + 1 factors into the six cyclotomics of index 16*d, d | 45
  QPoly t360(Rat(0));
  t360.c.assign(361, Rat(0));
  t360.c[0] = Rat(1);
  t360.c[360] = Rat(1);
  auto fs = factor_q(t360);
  REQUIRE(fs.size() == 6);
  long degsum = 0;
  for (auto& [g, e] : fs) {
    CHECK(e == 1);
    degsum += g.deg();
  }
  CHECK(degsum == 360);
  CHECK(remul_q(fs, Rat(1)) == t360);
}

TEST_CASE("hensel_lift spec examples") {
  // x^2 - 2 mod 7, roots 3, 4; lift to mod 49 -> 10, 39
  ZPoly f{Int(-2), Int(0), Int(1)};
  std::vector<ZPoly> facs{{Int(-3), Int(1)}, {Int(-4), Int(1)}};
  auto lifted = hensel_lift(f, facs, Int(7), 2);
  REQUIRE(lifted.size() == 2);
  // roots are -g[0] mod 49
  Int r0 = (49 - lifted[0][0] % 49) % 49, r1 = (49 - lifted[1][0] % 49) % 49;
  CHECK(((r0 == 10 && r1 == 39) || (r0 == 39 && r1 == 10)));
  // B = 4: verify by squaring
  auto l4 = hensel_lift(f, facs, Int(7), 4);
  Int m = Int(7) * 7 * 7 * 7;
  for (auto& g : l4) {
    Int r = (m - g[0] % m) % m;
    CHECK(r * r % m == 2);
  }
  // B = 1: unchanged
  auto l1 = hensel_lift(f, facs, Int(7), 1);
  CHECK(l1.size() == 2);
  // non-coprime input factors -> error
  std::vector<ZPoly> bad{{Int(-3), Int(1)}, {Int(-3), Int(1)}};
  CHECK_THROWS(hensel_lift(f, bad, Int(7), 2));
}

TEST_CASE("snf spec examples and unimodularity") {
  IntMat I3 = IntMat::identity(3);
  auto r = snf(I3);
  CHECK(r.D == I3);
  IntMat M(2, 2);
  M(0, 0) = 2; M(0, 1) = 4; M(1, 0) = 6; M(1, 1) = 8;
  auto s = snf(M);
  CHECK(s.D(0, 0) == 2);
  CHECK(s.D(1, 1) == 4);
  CHECK(s.D(0, 1) == 0);
  CHECK(s.D(1, 0) == 0);
  CHECK(abs(s.U.det()) == 1);
  CHECK(abs(s.V.det()) == 1);
  CHECK(s.U.mul(M).mul(s.V) == s.D);
  IntMat Z(3, 2);
  auto z = snf(Z);
  for (auto& x : z.D.a) CHECK(x == 0);
}

TEST_CASE("snf randomized: U M V = D, divisibility chain") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
    IntMat M(rows, cols);
    for (auto& x : M.a) x = static_cast<long>(rng() % 19) - 9;
    auto s = snf(M);
    CHECK(s.U.mul(M).mul(s.V) == s.D);
    CHECK(abs(s.U.det()) == 1);
    CHECK(abs(s.V.det()) == 1);
    for (size_t i = 0; i + 1 < std::min(rows, cols); ++i) {
      if (s.D(i, i) != 0 && s.D(i + 1, i + 1) != 0) CHECK(s.D(i + 1, i + 1) % s.D(i, i) == 0);
      if (s.D(i, i) == 0) CHECK(s.D(i + 1, i + 1) == 0);
    }
  }
}

TEST_CASE("lll spec examples") {
  // identity gram unchanged
  RatMat G(2, 2);
  G(0, 0) = Rat(1); G(1, 1) = Rat(1);
  auto r = lll_gram(G);
  CHECK(r.rank == 2);
  CHECK(r.gram(0, 0) == Rat(1));
  CHECK(r.gram(1, 1) == Rat(1));
  CHECK(r.gram(0, 1) == Rat(0));
  // gram [[4,2],[2,4]]: GSO diagonal (4,3) after reduction
  RatMat G2(2, 2);
  G2(0, 0) = Rat(4); G2(0, 1) = Rat(2); G2(1, 0) = Rat(2); G2(1, 1) = Rat(4);
  auto r2 = lll_gram(G2);
  REQUIRE(r2.gso_norms.size() == 2);
  CHECK(r2.gso_norms[0] == Rat(4));
  CHECK(r2.gso_norms[1] == Rat(3));
  CHECK(abs(r2.U.det()) == 1);
  // rank-deficient: kernel block isolated
  RatMat G3(3, 3);
  // vectors v, w, v+w in Z^2 with <v,v>=1,<w,w>=1,<v,w>=0
  G3(0, 0) = Rat(1); G3(1, 1) = Rat(1); G3(2, 2) = Rat(2);
  G3(0, 2) = G3(2, 0) = Rat(1);
  G3(1, 2) = G3(2, 1) = Rat(1);
  auto r3 = lll_gram(G3);
  CHECK(r3.rank == 2);
  CHECK(abs(r3.U.det()) == 1);
  for (size_t j = 0; j < 3; ++j) CHECK(r3.gram(2, j) == Rat(0));
  // non-symmetric input rejected
  RatMat bad(2, 2);
  bad(0, 1) = Rat(1);
  CHECK_THROWS(lll_gram(bad));
}

TEST_CASE("lll randomized: unimodular, same lattice Gram transform") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    size_t n = 2 + rng() % 3;
    // random integer basis in Z^n -> PSD gram
    IntMat B(n, n);
    for (auto& x : B.a) x = static_cast<long>(rng() % 11) - 5;
    RatMat G(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        Int acc = 0;
        for (size_t k = 0; k < n; ++k) acc += B(i, k) * B(j, k);
        G(i, j) = Rat(acc);
      }
    auto r = lll_gram(G);
    CHECK(abs(r.U.det()) == 1);
    // transformed gram matches U G U^T (spot check via trace)
    Rat tr1(0), tr2(0);
    for (size_t i = 0; i < n; ++i) tr2 += r.gram(i, i);
    // recompute independently
    RatMat P(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t a = 0; a < n; ++a)
        for (size_t j = 0; j < n; ++j) P(i, j) += Rat(r.U(i, a)) * G(a, j);
    for (size_t i = 0; i < n; ++i) {
      Rat acc(0);
      for (size_t a = 0; a < n; ++a) acc += P(i, a) * Rat(r.U(i, a));
      tr1 += acc;
    }
    CHECK(tr1 == tr2);
  }
}

TEST_CASE("poly_sqrt spec examples") {
  // t^4 + 2t^2 + 1 -> t^2 + 1
  auto s = poly_sqrt(qp({1, 0, 2, 0, 1}));
  REQUIRE(s.has_value());
  CHECK(*s == qp({1, 0, 1}));
  // t^4 + t^3 not a square
  CHECK(!poly_sqrt(qp({0, 0, 0, 1, 1})).has_value());
  // round trip
  QPoly g = qp({5, -2, 0, 1});
  auto rt = poly_sqrt(g * g);
  REQUIRE(rt.has_value());
  CHECK(*rt == g);
}

TEST_CASE("poly_sqrt round-trip randomized (Q and Fq)") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 100; ++trial) {
    QPoly g{Rat(0)};
    int d = 1 + rng() % 5;
    for (int i = 0; i <= d; ++i) g.c.push_back(Rat(static_cast<long>(rng() % 13) - 6));
    g.normalize();
    if (g.is_zero()) continue;
    auto s = poly_sqrt(g * g);
    REQUIRE(s.has_value());
    CHECK((*s) * (*s) == g * g);
  }
  auto F = fq_field(11, 2);
  for (int trial = 0; trial < 100; ++trial) {
    FqPoly g(FqElem(F, 0));
    int d = 1 + rng() % 5;
    for (int i = 0; i <= d; ++i) {
      std::vector<std::uint64_t> co{rng() % 11, rng() % 11};
      g.c.push_back(FqElem::make(F, std::move(co)));
    }
    g.normalize();
    if (g.is_zero()) continue;
    auto s = poly_sqrt(g * g);
    REQUIRE(s.has_value());
    CHECK((*s) * (*s) == g * g);
  }
}

TEST_CASE("poly ring axioms randomized (Q and Fq)") {
  std::mt19937_64 rng(31337);
  auto F = fq_field(13, 2);
  for (int trial = 0; trial < 200; ++trial) {
    auto rnd_q = [&]() {
      QPoly f{Rat(0)};
      int d = rng() % 5;
      for (int i = 0; i <= d; ++i) f.c.push_back(Rat(static_cast<long>(rng() % 9) - 4));
      f.normalize();
      return f;
    };
    QPoly a = rnd_q(), b = rnd_q(), c = rnd_q();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    auto rnd_f = [&]() {
      FqPoly f(FqElem(F, 0));
      int d = rng() % 5;
      for (int i = 0; i <= d; ++i)
        f.c.push_back(FqElem::make(F, {rng() % 13, rng() % 13}));
      f.normalize();
      return f;
    };
    FqPoly x = rnd_f(), y = rnd_f(), z = rnd_f();
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    if (!y.is_zero()) {
      FqPoly q, r;
      divrem(x, y, q, r);
      CHECK(q * y + r == x);
      CHECK((r.is_zero() || r.deg() < y.deg()));
    }
  }
}

TEST_CASE("flattened extensions: iso and root tracking") {
  auto F = fq_field(7, 2);
  // an irreducible quadratic over F_49
  FqPoly pi(FqElem(F, 0));
  // find one by scanning x^2 + x + c
  for (std::uint64_t c0 = 1;; ++c0) {
    pi = FqPoly(FqElem(F, 0));
    pi.c = {FqElem::make(F, {c0 % 7, (c0 / 7) % 7}), FqElem(F, 1), FqElem(F, 1)};
    pi.normalize();
    if (pi.deg() == 2 && fq_irreducible_poly(pi)) break;
  }
  auto ext = fq_flatten(F, pi.c);
  CHECK(ext.big->k == 4);
  // the designated root satisfies pi
  FqElem r = ext.root();
  FqElem acc(ext.big, 0);
  for (size_t i = pi.c.size(); i-- > 0;) acc = acc * r + ext.embed(pi.c[i]);
  CHECK(acc.is_zero());
  // embedding is a homomorphism
  FqElem a = FqElem::make(F, {3, 4}), b = FqElem::make(F, {5, 1});
  CHECK(ext.embed(a * b) == ext.embed(a) * ext.embed(b));
  CHECK(ext.embed(a + b) == ext.embed(a) + ext.embed(b));
}

TEST_CASE("fq_embedding into larger field") {
  auto F9a = fq_field(13, 2);
  auto F9b = fq_field(13, 4);
  auto e = fq_embedding(F9a, F9b);
  FqElem a = FqElem::make(F9a, {7, 5}), b = FqElem::make(F9a, {2, 11});
  CHECK(e(a * b) == e(a) * e(b));
  CHECK(e(a + b) == e(a) + e(b));
  CHECK(e(a.one()).is_one());
}
