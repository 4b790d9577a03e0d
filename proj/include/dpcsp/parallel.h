#ifndef DPCSP_PARALLEL_H_
#define DPCSP_PARALLEL_H_

#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#include <omp.h>

#include "dpcsp/rng.h"

namespace dpcsp {

// Sum in a fixed binary-tree order so the result does not depend on how
// the values were produced.
inline double PairwiseSum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() <= 8) {
    double s = 0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return PairwiseSum(v.subspan(0, half)) + PairwiseSum(v.subspan(half));
}

struct MeanStats {
  double mean = 0;
  double variance = 0;  // sample variance (n - 1 denominator)
  double se = 0;
  std::size_t count = 0;
};

MeanStats Summarize(std::span<const double> values);

// Runs f(rng, t) for t in [0, trials) with rng = RngStream(seed, t) and
// returns the results by trial index. The first exception thrown by any
// trial is rethrown after the loop.
template <class T, class F>
std::vector<T> RunTrials(std::size_t trials, std::uint64_t seed, F&& f, bool parallel = true) {
  std::vector<T> out(trials);
  std::exception_ptr error = nullptr;
  const long long n = static_cast<long long>(trials);
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (long long t = 0; t < n; ++t) {
    try {
      RngStream rng(seed, static_cast<std::uint64_t>(t));
      out[t] = f(rng, static_cast<std::size_t>(t));
    } catch (...) {
#pragma omp critical(dpcsp_trial_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace dpcsp

#endif  // DPCSP_PARALLEL_H_
