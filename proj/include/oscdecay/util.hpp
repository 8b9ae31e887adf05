#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace oscdecay {

// Counter-based stream: every draw is a pure function of (seed, stream, counter).
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

// Uniform in (0, 1): never returns 0, so logs and inverse powers are safe.
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return (static_cast<double>(counter_hash(seed, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

// Worker count: OSCDECAY_THREADS if set, else hardware concurrency.
std::size_t worker_count();

// Runs body(k) for k in [0, n). Each index writes only its own slot, so results do not
// depend on scheduling; callers reduce in index order afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace oscdecay
