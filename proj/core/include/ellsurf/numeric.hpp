#pragma once
// Arbitrary-precision integer/rational helpers on top of GMP.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellsurf {

using Int = mpz_class;

// Exact rational scalar.  Thin wrapper over mpq_class giving the uniform
// field-element interface used by the generic polynomial/matrix code
// (zero()/one()/inv()/is_zero()).  Always stored canonically: gcd(num,den)=1,
// den >= 1.
struct Rat {
  mpq_class v;

  Rat() : v(0) {}
  Rat(int n) : v(n) {}
  Rat(long n) : v(n) {}
  Rat(const Int& n) : v(n) {}
  Rat(const Int& n, const Int& d) : v(mpq_class(n) / mpq_class(d)) { v.canonicalize(); }
  Rat(long n, long d) : v(n, d) { v.canonicalize(); }
  explicit Rat(const mpq_class& q) : v(q) { v.canonicalize(); }
  explicit Rat(const std::string& s) : v(s) { v.canonicalize(); }

  Int num() const { return v.get_num(); }
  Int den() const { return v.get_den(); }

  bool is_zero() const { return v == 0; }
  bool is_one() const { return v == 1; }
  Rat zero() const { return Rat(); }
  Rat one() const { return Rat(1); }
  Rat inv() const {
    if (is_zero()) throw std::domain_error("Rat: division by zero");
    return Rat(mpq_class(1) / v);
  }

  Rat operator-() const { return Rat(mpq_class(-v)); }
  Rat& operator+=(const Rat& o) { v += o.v; return *this; }
  Rat& operator-=(const Rat& o) { v -= o.v; return *this; }
  Rat& operator*=(const Rat& o) { v *= o.v; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("Rat: division by zero");
    v /= o.v;
    return *this;
  }
  friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
  friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
  friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
  friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
  friend bool operator==(const Rat& a, const Rat& b) { return a.v == b.v; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v != b.v; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v < b.v; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v <= b.v; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v > b.v; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v >= b.v; }

  std::string str() const { return v.get_str(); }
};

inline Rat abs(const Rat& a) { return a < Rat(0) ? -a : a; }

// ---- integer utilities ----

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);
// inverse of a mod m; throws if not coprime
Int invmod(const Int& a, const Int& m);
Int powmod(Int base, Int exp, const Int& m);
// symmetric representative in (-m/2, m/2]
Int symrep(const Int& a, const Int& m);
bool is_prime(const Int& n);
Int next_prime(const Int& n);
// x with x = a mod m, x = b mod n (m,n coprime)
Int crt(const Int& a, const Int& m, const Int& b, const Int& n);
// rational reconstruction of a mod m with |num|,den <= bound (default floor(sqrt(m/2)))
std::optional<Rat> rational_reconstruct(const Int& a, const Int& m);
Int isqrt(const Int& n);
// exact integer k-th root if n is a perfect k-th power
std::optional<Int> perfect_root(const Int& n, unsigned k);
std::optional<Rat> rat_sqrt(const Rat& a);

// deterministic 64-bit content hash (cache keys, not cryptographic)
std::uint64_t fnv1a(const std::string& s);

std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

// factor n into (prime, exponent) pairs by trial division + Pollard rho
std::vector<std::pair<Int, unsigned>> factor_int(Int n);

Int euler_phi(const Int& n);

}  // namespace ellsurf
