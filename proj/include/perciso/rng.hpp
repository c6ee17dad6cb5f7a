#pragma once

#include <cstdint>

// Counter-based random streams.  Every draw is a pure hash of
// (seed, purpose tag, canonical key), so replicas can be evaluated in any
// order, on any number of threads, with bit-identical results, and two
// occupation probabilities p <= p' sampled from the same seed are
// monotonically coupled (one uniform per edge, thresholded).

namespace perciso::rng {

enum class Tag : std::uint64_t {
  edge = 0x65646765,      // edge occupation uniforms
  eta = 0x6574611f,       // per-site tie-break uniforms
  replica = 0x7265706c,   // per-replica sub-seeds
  nudge = 0x6e756467,     // general-position perturbations
  ellipse = 0x656c6c69,   // competitor sampling in minimality checks
};

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

inline constexpr std::uint64_t hash(std::uint64_t seed, Tag tag,
                                    std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) {
  std::uint64_t h = mix64(seed);
  h = combine(h, static_cast<std::uint64_t>(tag));
  h = combine(h, a);
  h = combine(h, b);
  h = combine(h, c);
  return h;
}

inline constexpr double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline constexpr double uniform(std::uint64_t seed, Tag tag, std::uint64_t a,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
  return to_unit(hash(seed, tag, a, b, c));
}

// Sub-seed for replica r of a driver seeded with `seed`.
inline constexpr std::uint64_t subseed(std::uint64_t seed, std::uint64_t r,
                                       std::uint64_t attempt = 0) {
  return hash(seed, Tag::replica, r, attempt);
}

inline constexpr std::uint64_t zigzag(int v) {
  return static_cast<std::uint64_t>((static_cast<std::int64_t>(v) << 1) ^
                                    (static_cast<std::int64_t>(v) >> 63));
}

}  // namespace perciso::rng
