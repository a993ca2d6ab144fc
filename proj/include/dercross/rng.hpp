#ifndef DERCROSS_RNG_HPP
#define DERCROSS_RNG_HPP

#include <cstdint>
#include <string_view>

namespace dercross {

/// splitmix64; deterministic across platforms, which the report byte-identity
/// contract depends on (std:: distributions are implementation-defined).
struct Rng {
  std::uint64_t state = 0x9e3779b97f4a7c15ull;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Independent stream per (seed, check name, sample index); checks may run in
/// any order or in parallel without perturbing each other's draws.
inline Rng stream_rng(std::uint64_t seed, std::string_view check, std::uint64_t sample) {
  Rng r;
  r.state = seed ^ fnv1a(check) ^ (0x9e3779b97f4a7c15ull * (sample + 1));
  r.next();
  r.next();
  return r;
}

}  // namespace dercross

#endif  // DERCROSS_RNG_HPP
