#ifndef DPCSP_RNG_H_
#define DPCSP_RNG_H_

#include <cstdint>

namespace dpcsp {

std::uint64_t SplitMix64(std::uint64_t x);

// SplittableRandom-style generator: a Weyl counter with a per-stream odd
// gamma, finalized by the SplitMix64 mixer. Cheap to seed, which matters
// because every Monte Carlo trial builds its own stream.
class MixEngine {
 public:
  using result_type = std::uint64_t;
  MixEngine(std::uint64_t state, std::uint64_t gamma) : state_(state), gamma_(gamma | 1) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return UINT64_MAX; }
  result_type operator()();

 private:
  std::uint64_t state_;
  std::uint64_t gamma_;
};

// A reproducible random stream identified by (seed, stream id). Two streams
// built from the same pair produce the same draws bit-for-bit, regardless of
// which thread consumes them. Monte Carlo trials use stream id = trial index.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t NextU64() { return engine_(); }

  // 53-bit uniform in [0, 1).
  double Uniform();
  // Uniform in (0, 1); never returns 0, safe for log().
  double UniformOpen();
  bool Coin() { return (engine_() >> 63) != 0; }
  // +1 or -1 with probability 1/2 each.
  int Sign() { return Coin() ? 1 : -1; }
  bool Bernoulli(double p) { return Uniform() < p; }
  // Unbiased integer in [0, n). n must be positive.
  std::uint64_t Below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  MixEngine engine_;
};

}  // namespace dpcsp

#endif  // DPCSP_RNG_H_
