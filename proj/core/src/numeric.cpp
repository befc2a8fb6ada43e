#include "ellsurf/numeric.hpp"

#include <atomic>

#include "ellsurf/config.hpp"

namespace ellsurf {

namespace {
std::atomic<std::uint64_t> g_seed{0};
}

std::uint64_t rng_seed() {
  std::uint64_t s = g_seed.load();
  if (s) return s;
  if (const char* e = std::getenv("ELLSURF_SEED")) {
    std::uint64_t v = std::strtoull(e, nullptr, 0);
    if (v) return v;
  }
  return kDefaultSeed;
}

void set_rng_seed(std::uint64_t s) { g_seed.store(s); }

Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Int invmod(const Int& a, const Int& m) {
  Int r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
    throw std::domain_error("invmod: not invertible");
  return r;
}

Int powmod(Int base, Int exp, const Int& m) {
  Int r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int symrep(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  if (2 * r > m) r -= m;
  return r;
}

bool is_prime(const Int& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0; }

Int next_prime(const Int& n) {
  Int r;
  mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

Int crt(const Int& a, const Int& m, const Int& b, const Int& n) {
  // x = a + m * ((b-a)/m mod n)
  Int t = ((b - a) % n) * invmod(m % n, n) % n;
  if (t < 0) t += n;
  return a + m * t;
}

std::optional<Rat> rational_reconstruct(const Int& a, const Int& m) {
  // half-extended Euclid until remainder below sqrt(m/2)
  Int bound = isqrt(m / 2);
  Int r0 = m, r1 = a % m;
  if (r1 < 0) r1 += m;
  Int t0 = 0, t1 = 1;
  while (r1 > bound) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    Int t2 = t0 - q * t1;
    r0 = r1; r1 = r2; t0 = t1; t1 = t2;
  }
  if (t1 == 0) return std::nullopt;
  Int num = r1, den = t1;
  if (den < 0) { den = -den; num = -num; }
  if (den > bound || gcd(num, den) != 1) return std::nullopt;
  if (gcd(den, m) != 1) return std::nullopt;
  return Rat(num, den);
}

Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::optional<Int> perfect_root(const Int& n, unsigned k) {
  Int r;
  int exact = mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
  if (!exact) return std::nullopt;
  return r;
}

std::optional<Rat> rat_sqrt(const Rat& a) {
  if (a < Rat(0)) return std::nullopt;
  auto n = perfect_root(a.num(), 2);
  auto d = perfect_root(a.den(), 2);
  if (!n || !d) return std::nullopt;
  return Rat(*n, *d);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<bool> sieve(n + 1, true);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) sieve[j] = false;
  }
  return out;
}

namespace {
Int pollard_rho(const Int& n) {
  if (n % 2 == 0) return 2;
  gmp_randclass rs(gmp_randinit_default);
  rs.seed(rng_seed());
  while (true) {
    Int x = rs.get_z_range(n - 2) + 2, y = x, c = rs.get_z_range(n - 1) + 1, d = 1;
    while (d == 1) {
      x = (x * x + c) % n;
      y = (y * y + c) % n;
      y = (y * y + c) % n;
      d = gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_rec(Int n, std::vector<Int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  Int d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}
}  // namespace

std::vector<std::pair<Int, unsigned>> factor_int(Int n) {
  if (n < 0) n = -n;
  if (n == 0) throw std::domain_error("factor_int: zero");
  std::vector<Int> ps;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
    while (n % p == 0) {
      ps.push_back(Int(p));
      n /= p;
    }
  }
  factor_rec(n, ps);
  std::sort(ps.begin(), ps.end());
  std::vector<std::pair<Int, unsigned>> out;
  for (auto& p : ps) {
    if (!out.empty() && out.back().first == p)
      out.back().second++;
    else
      out.push_back({p, 1});
  }
  return out;
}

Int euler_phi(const Int& n) {
  Int r = 1;
  for (auto& [p, e] : factor_int(n)) {
    Int pe = 1;
    for (unsigned i = 1; i < e; ++i) pe *= p;
    r *= pe * (p - 1);
  }
  return r;
}

}  // namespace ellsurf
