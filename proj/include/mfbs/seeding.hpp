#pragma once

#include <cstdint>
#include <random>

// Splittable counter-based seeding.
//
// Every random quantity in the library draws from its own engine, seeded by
// mixing (master seed, purpose tag, stream index) through a splitmix64-style
// finalizer. Streams are therefore independent of evaluation order and of the
// number of worker threads: subject 17 gets the same noise whether it is
// generated first, last, or concurrently with the others.

namespace mfbs {

// Stream purpose tags. Distinct tags keep e.g. the effects draw for subject k
// from colliding with the noise draw for subject k.
enum class StreamTag : std::uint64_t {
  effects = 0x45464645435453ULL,      // random-effects sampling
  fgn = 0x46474E5354524DULL,          // fractional noise per subject
  brownian = 0x42524F574E49414EULL,   // independent Brownian noise per subject
  replication = 0x5245504C49434154ULL,// per-replication master seeds
  cv_folds = 0x435646504C444953ULL,   // cross-validation fold shuffle
};

// splitmix64 finalizer: bijective 64-bit mixer with good avalanche.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for stream `index` of purpose `tag` under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, StreamTag tag,
                                    std::uint64_t index) noexcept {
  return mix64(master ^ mix64(static_cast<std::uint64_t>(tag) ^
                              mix64(index + 0x9E3779B97F4A7C15ULL)));
}

// Fresh engine for a derived stream. mt19937_64 keeps draws identical across
// runs of the same binary; across standard libraries the *distributions*
// (normal, gamma) may differ, which is fine for our reproducibility contract
// (fixed binary, any thread count).
inline std::mt19937_64 make_engine(std::uint64_t master, StreamTag tag,
                                   std::uint64_t index) {
  return std::mt19937_64(derive_seed(master, tag, index));
}

}  // namespace mfbs
