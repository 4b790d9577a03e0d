#include "dpcsp/rng.h"

#include <bit>

#include "dpcsp/errors.h"

namespace dpcsp {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Gammas with too few bit transitions give weakly mixed sequences.
std::uint64_t MixGamma(std::uint64_t z) {
  z = Mix64(z) | 1;
  if (std::popcount(z ^ (z >> 1)) < 24) z ^= 0xaaaaaaaaaaaaaaaaULL;
  return z;
}

}  // namespace

MixEngine::result_type MixEngine::operator()() {
  state_ += gamma_;
  return Mix64(state_);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed),
      stream_(stream),
      engine_(SplitMix64(SplitMix64(seed) ^ SplitMix64(stream ^ 0x5851f42d4c957f2dULL)),
              MixGamma(SplitMix64(seed ^ 0x2545f4914f6cdd1dULL) + SplitMix64(~stream))) {}

double RngStream::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::UniformOpen() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::Below(std::uint64_t n) {
  if (n == 0) throw ArgumentError("RngStream::Below requires n > 0");
  // Rejection on the top of the range keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % n;
}

}  // namespace dpcsp
