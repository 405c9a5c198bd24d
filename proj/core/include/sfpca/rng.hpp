#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sfpca {

// Counter-based random numbers. Every draw is a pure function of
// (seed, tag, index...) so simulations reproduce exactly regardless of
// evaluation order or thread count. The mixer is splitmix64's finalizer,
// chained over the key words.

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t h, std::uint64_t w) {
  return splitmix64(h ^ (w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

}  // namespace detail

// Draw tags keep independent random streams from colliding.
enum class DrawTag : std::uint64_t {
  kTheta = 1,       // basis coefficient scores
  kNoise = 2,       // additive measurement noise
  kFolds = 3,       // CV fold shuffling
  kRepSeed = 4,     // per-replication seed derivation
  kLabelNoise = 5,  // reserved for label perturbation experiments
};

inline std::uint64_t hash_key(std::uint64_t seed, DrawTag tag, std::uint64_t a = 0,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = detail::splitmix64(seed);
  h = detail::mix(h, static_cast<std::uint64_t>(tag));
  h = detail::mix(h, a);
  h = detail::mix(h, b);
  h = detail::mix(h, c);
  return h;
}

// Uniform in (0, 1): top 53 bits, offset so 0 is excluded (log-safe).
inline double uniform01(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

// Standard normal via Box-Muller from two sub-streams of one key.
inline double gaussian(std::uint64_t seed, DrawTag tag, std::uint64_t a = 0,
                       std::uint64_t b = 0, std::uint64_t c = 0) {
  const std::uint64_t h = hash_key(seed, tag, a, b, c);
  const double u1 = uniform01(detail::splitmix64(h ^ 0x5851f42d4c957f2dULL));
  const double u2 = uniform01(detail::splitmix64(h ^ 0x14057b7ef767814fULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Derive a fresh 64-bit seed for replication `rep` of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t rep) {
  return hash_key(master, DrawTag::kRepSeed, rep);
}

// Minimal stateful generator over a hashed key, for shuffles.
class HashRng {
 public:
  HashRng(std::uint64_t seed, DrawTag tag, std::uint64_t a = 0)
      : state_(hash_key(seed, tag, a)) {}

  std::uint64_t next() {
    state_ = detail::splitmix64(state_);
    return state_;
  }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0ULL - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace sfpca
