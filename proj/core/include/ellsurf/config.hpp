#pragma once
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>

namespace ellsurf {

// Deterministic default seed for all randomized algorithms (Cantor-Zassenhaus,
// primitive-element retries, ...).  Override with set_rng_seed() or ELLSURF_SEED.
inline constexpr std::uint64_t kDefaultSeed = 0x5eed5eed12345ull;

std::uint64_t rng_seed();
void set_rng_seed(std::uint64_t s);

inline unsigned worker_count() {
  if (const char* e = std::getenv("ELLSURF_WORKERS")) {
    long n = std::atol(e);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  unsigned n = std::thread::hardware_concurrency();
  return n ? n : 1;
}

inline std::string cache_dir() {
  if (const char* e = std::getenv("ELLSURF_CACHE_DIR")) return e;
  return "";  // cache disabled unless configured
}

}  // namespace ellsurf
