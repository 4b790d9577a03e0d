#ifndef DPCSP_ENUMERATION_H_
#define DPCSP_ENUMERATION_H_

#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#include <omp.h>

#include "dpcsp/csp.h"

namespace dpcsp {

// Largest variable set the exponential mechanism will enumerate.
inline constexpr int kEmEnumerationCap = 24;
// Largest n for brute-force optimum search.
inline constexpr int kBruteForceCap = 26;

// A CSP restricted to a variable subset: only constraints whose whole scope
// lies inside `vars`, with scope entries renumbered to positions in `vars`.
struct LocalCsp {
  int n = 0;
  std::vector<Constraint> constraints;
};

LocalCsp RestrictCsp(const CspInstance& instance, std::span<const int> vars);

// Same for graphs: edges with both endpoints in `vars`, renumbered.
struct LocalGraph {
  int n = 0;
  std::vector<Edge> edges;
};

LocalGraph RestrictGraph(const WeightedGraph& graph, std::span<const int> vars);

// Score of a packed assignment; bit i set means local variable i is -1.
double ScoreMask(const LocalCsp& csp, std::uint64_t mask);
double ScoreMask(const LocalGraph& graph, std::uint64_t mask);

// Scores of all 2^bits masks, index = mask.
template <class Score>
std::vector<double> EnumerateScoresSerial(int bits, Score&& score) {
  const std::uint64_t total = std::uint64_t{1} << bits;
  std::vector<double> out(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) out[mask] = score(mask);
  return out;
}

template <class Score>
std::vector<double> EnumerateScores(int bits, Score&& score) {
  const long long total = 1LL << bits;
  std::vector<double> out(static_cast<std::size_t>(total));
  std::exception_ptr error = nullptr;
#pragma omp parallel for schedule(static)
  for (long long mask = 0; mask < total; ++mask) {
    try {
      out[mask] = score(static_cast<std::uint64_t>(mask));
    } catch (...) {
#pragma omp critical(dpcsp_enum_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

struct MaskArgmax {
  double value = 0;
  std::uint64_t mask = 0;
};

// Maximum over masks in [0, count); ties go to the smallest mask.
template <class Score>
MaskArgmax ArgmaxSerial(std::uint64_t count, Score&& score) {
  MaskArgmax best{score(0), 0};
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    double v = score(mask);
    if (v > best.value) best = {v, mask};
  }
  return best;
}

template <class Score>
MaskArgmax Argmax(std::uint64_t count, Score&& score) {
  const int threads = omp_get_max_threads();
  std::vector<MaskArgmax> partial(threads, MaskArgmax{0, UINT64_MAX});
  const long long total = static_cast<long long>(count);
#pragma omp parallel num_threads(threads)
  {
    MaskArgmax local{0, UINT64_MAX};
#pragma omp for schedule(static)
    for (long long m = 0; m < total; ++m) {
      double v = score(static_cast<std::uint64_t>(m));
      if (local.mask == UINT64_MAX || v > local.value) local = {v, static_cast<std::uint64_t>(m)};
    }
    partial[omp_get_thread_num()] = local;
  }
  MaskArgmax best{0, UINT64_MAX};
  for (const auto& p : partial) {
    if (p.mask == UINT64_MAX) continue;
    if (best.mask == UINT64_MAX || p.value > best.value ||
        (p.value == best.value && p.mask < best.mask)) {
      best = p;
    }
  }
  return best;
}

}  // namespace dpcsp

#endif  // DPCSP_ENUMERATION_H_
