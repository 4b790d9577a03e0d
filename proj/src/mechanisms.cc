#include "dpcsp/mechanisms.h"

#include <algorithm>
#include <cmath>

#include "dpcsp/errors.h"

namespace dpcsp {

namespace {

void CheckBudget(double budget, double sensitivity) {
  if (!(budget >= 0) || !std::isfinite(budget)) throw ArgumentError("privacy budget must be >= 0");
  if (!(sensitivity > 0)) throw ArgumentError("sensitivity must be > 0");
}

void CheckCap(std::size_t size, int cap) {
  if (static_cast<long long>(size) > cap) {
    throw ResourceError("exponential mechanism candidate space 2^|V| too large",
                        static_cast<long long>(size), cap);
  }
}

std::size_t SampleFromScores(const std::vector<double>& scores, double budget,
                             double sensitivity, RngStream& rng) {
  return ExponentialMechanismIndex(scores, budget, sensitivity, rng);
}

void WriteMask(std::span<const int> vars, std::uint64_t mask, Assignment& x) {
  for (std::size_t i = 0; i < vars.size(); ++i) x.Set(vars[i], ((mask >> i) & 1) ? -1 : 1);
}

}  // namespace

double SampleLaplace(double scale, RngStream& rng) {
  if (!(scale > 0) || !std::isfinite(scale)) throw ArgumentError("Laplace scale must be > 0");
  double u = rng.UniformOpen() - 0.5;
  double sgn = u < 0 ? -1.0 : 1.0;
  return -scale * sgn * std::log1p(-2.0 * std::abs(u));
}

double DiscreteLaplaceMass(long long x, double epsilon) {
  if (!(epsilon > 0)) throw ArgumentError("discrete Laplace needs epsilon > 0");
  return std::tanh(epsilon / 2) * std::exp(-epsilon * static_cast<double>(std::llabs(x)));
}

long long SampleDiscreteLaplace(double epsilon, RngStream& rng) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    throw ArgumentError("discrete Laplace needs epsilon > 0");
  }
  double u1 = rng.Uniform();
  double u2 = rng.UniformOpen();
  // (e^eps - 1)/(e^eps + 1) = tanh(eps/2)
  double p0 = std::tanh(epsilon / 2);
  if (u1 < p0) return 0;
  int sign = (u1 - p0) < (1 - p0) / 2 ? 1 : -1;
  // Given X != 0, |X| - 1 is geometric with ratio e^-eps.
  double k = std::floor(std::log(u2) / -epsilon);
  return sign * (1 + static_cast<long long>(k));
}

double RrKeepProbability(double epsilon) {
  if (!(epsilon >= 0)) throw ArgumentError("epsilon must be >= 0");
  return 1.0 / (1.0 + std::exp(-epsilon));
}

int RandomizedResponse(int bit, double epsilon, RngStream& rng, BitDomain domain) {
  if (domain == BitDomain::kSign && bit != 1 && bit != -1) {
    throw ArgumentError("randomized response input must be +1 or -1");
  }
  if (domain == BitDomain::kBinary && bit != 0 && bit != 1) {
    throw ArgumentError("randomized response input must be 0 or 1");
  }
  const bool flip = !(rng.Uniform() < RrKeepProbability(epsilon));
  if (!flip) return bit;
  return domain == BitDomain::kSign ? -bit : 1 - bit;
}

std::vector<double> ExponentialWeights(std::span<const double> scores, double budget,
                                       double sensitivity) {
  CheckBudget(budget, sensitivity);
  if (scores.empty()) throw ArgumentError("exponential mechanism needs a candidate");
  double best = -INFINITY;
  for (double s : scores) {
    if (!std::isfinite(s)) throw DomainError("non-finite exponential mechanism score");
    best = std::max(best, s);
  }
  const double coeff = budget / (2 * sensitivity);
  std::vector<double> w(scores.size());
  double total = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    w[i] = std::exp(coeff * (scores[i] - best));
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

std::size_t ExponentialMechanismIndex(std::span<const double> scores, double budget,
                                      double sensitivity, RngStream& rng) {
  CheckBudget(budget, sensitivity);
  if (scores.empty()) throw ArgumentError("exponential mechanism needs a candidate");
  double best = -INFINITY;
  for (double s : scores) {
    if (!std::isfinite(s)) throw DomainError("non-finite exponential mechanism score");
    best = std::max(best, s);
  }
  const double coeff = budget / (2 * sensitivity);
  std::vector<double> cum(scores.size());
  double total = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    total += std::exp(coeff * (scores[i] - best));
    cum[i] = total;
  }
  double target = rng.Uniform() * total;
  auto it = std::upper_bound(cum.begin(), cum.end(), target);
  if (it == cum.end()) --it;
  return static_cast<std::size_t>(it - cum.begin());
}

void EmOverAssignments(const CspInstance& instance, std::span<const int> vars, double budget,
                       double sensitivity, Assignment& x, RngStream& rng, int cap) {
  CheckBudget(budget, sensitivity);
  if (vars.empty()) return;
  CheckCap(vars.size(), cap);
  LocalCsp local = RestrictCsp(instance, vars);
  auto scores = EnumerateScores(local.n, [&](std::uint64_t m) { return ScoreMask(local, m); });
  WriteMask(vars, SampleFromScores(scores, budget, sensitivity, rng), x);
}

void EmOverAssignments(const WeightedGraph& graph, std::span<const int> vars, double budget,
                       double sensitivity, Assignment& x, RngStream& rng, int cap) {
  CheckBudget(budget, sensitivity);
  if (vars.empty()) return;
  CheckCap(vars.size(), cap);
  LocalGraph local = RestrictGraph(graph, vars);
  auto scores = EnumerateScores(local.n, [&](std::uint64_t m) { return ScoreMask(local, m); });
  WriteMask(vars, SampleFromScores(scores, budget, sensitivity, rng), x);
}

void EmOverAssignmentsSerial(const WeightedGraph& graph, std::span<const int> vars, double budget,
                             double sensitivity, Assignment& x, RngStream& rng, int cap) {
  CheckBudget(budget, sensitivity);
  if (vars.empty()) return;
  CheckCap(vars.size(), cap);
  LocalGraph local = RestrictGraph(graph, vars);
  auto scores =
      EnumerateScoresSerial(local.n, [&](std::uint64_t m) { return ScoreMask(local, m); });
  WriteMask(vars, SampleFromScores(scores, budget, sensitivity, rng), x);
}

}  // namespace dpcsp
