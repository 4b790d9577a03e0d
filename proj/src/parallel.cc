#include "dpcsp/parallel.h"

#include <cmath>

namespace dpcsp {

MeanStats Summarize(std::span<const double> values) {
  MeanStats s;
  s.count = values.size();
  if (values.empty()) return s;
  s.mean = PairwiseSum(values) / static_cast<double>(values.size());
  if (values.size() < 2) return s;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double d = values[i] - s.mean;
    sq[i] = d * d;
  }
  s.variance = PairwiseSum(sq) / static_cast<double>(values.size() - 1);
  s.se = std::sqrt(s.variance / static_cast<double>(values.size()));
  return s;
}

}  // namespace dpcsp
