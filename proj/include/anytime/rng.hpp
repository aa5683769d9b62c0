#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace anytime::rng {

// Identifier written into code files and run manifests. Each draw is a pure
// function of (seed, domain, a, b, c), so regenerating the same object on
// another machine needs nothing beyond these five integers. Any change to the
// mixing scheme below must change this string.
inline constexpr std::string_view kPrngId = "sm64x5";

inline constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// splitmix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Counter-based keyed draw: five chained mix rounds, one per key component.
inline constexpr std::uint64_t keyed(std::uint64_t seed, std::uint64_t domain,
                                     std::uint64_t a = 0, std::uint64_t b = 0,
                                     std::uint64_t c = 0) {
  constexpr std::uint64_t g = 0x9e3779b97f4a7c15ull;
  std::uint64_t h = mix64(seed + g);
  h = mix64(h ^ (domain + g));
  h = mix64(h ^ (a + g));
  h = mix64(h ^ (b + g));
  h = mix64(h ^ (c + g));
  return h;
}

// Top 53 bits -> [0, 1). The conversion is exact, so comparisons against
// double thresholds are reproducible bit-for-bit.
inline double unit(std::uint64_t seed, std::uint64_t domain, std::uint64_t a = 0,
                   std::uint64_t b = 0, std::uint64_t c = 0) {
  return static_cast<double>(keyed(seed, domain, a, b, c) >> 11) * 0x1.0p-53;
}

inline bool bernoulli(double p, std::uint64_t seed, std::uint64_t domain,
                      std::uint64_t a = 0, std::uint64_t b = 0,
                      std::uint64_t c = 0) {
  return unit(seed, domain, a, b, c) < p;
}

inline double uniform(double lo, double hi, std::uint64_t seed,
                      std::uint64_t domain, std::uint64_t a = 0,
                      std::uint64_t b = 0, std::uint64_t c = 0) {
  return lo + unit(seed, domain, a, b, c) * (hi - lo);
}

// Standard normal truncated to [-cut, cut] by rejection. The attempt number is
// folded into the last key slot, so the draw stays a pure function of the key.
inline double trunc_gauss(double cut, std::uint64_t seed, std::uint64_t domain,
                          std::uint64_t a = 0, std::uint64_t b = 0) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    double u1 = static_cast<double>((keyed(seed, domain, a, b, 2 * attempt) >> 11) + 1) *
                0x1.0p-53;  // (0, 1]
    double u2 = unit(seed, domain, a, b, 2 * attempt + 1);
    double z = std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    if (z >= -cut && z <= cut) return z;
  }
}

// Hierarchical seed derivation. Master seeds fan out through labelled domains
// so extending one consumer (more trials, more codes) never perturbs another.
//
//   label        index            used for
//   "code"       code number      per-code seed in sweeps
//   "channel"    trial number     erasure draws of one episode
//   "message"    trial number     random message bits of one episode
//   "noise-w"    trial number     process noise of one episode
//   "noise-v"    trial number     measurement noise of one episode
inline std::uint64_t derive(std::uint64_t master, std::string_view label,
                            std::uint64_t index) {
  return keyed(master, fnv1a(label), index);
}

// Direct draw domains.
inline constexpr std::uint64_t kDomBlock = fnv1a("block");      // code block bits
inline constexpr std::uint64_t kDomErasure = fnv1a("erasure");  // channel erasures
inline constexpr std::uint64_t kDomMessage = fnv1a("message");  // test message bits
inline constexpr std::uint64_t kDomNoiseW = fnv1a("noise-w");   // process noise
inline constexpr std::uint64_t kDomNoiseV = fnv1a("noise-v");   // measurement noise

}  // namespace anytime::rng
