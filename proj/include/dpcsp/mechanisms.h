#ifndef DPCSP_MECHANISMS_H_
#define DPCSP_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dpcsp/assignment.h"
#include "dpcsp/csp.h"
#include "dpcsp/enumeration.h"
#include "dpcsp/rng.h"

namespace dpcsp {

// Continuous Laplace with density exp(-|x|/b) / 2b, by inverse CDF on one
// uniform draw. Throws ArgumentError unless scale > 0.
double SampleLaplace(double scale, RngStream& rng);

// Pr[X = x] = (e^eps - 1)/(e^eps + 1) * exp(-eps |x|).
double DiscreteLaplaceMass(long long x, double epsilon);

// Always consumes exactly two uniforms: one picks zero / sign, the other a
// geometric magnitude. Throws ArgumentError unless epsilon > 0.
long long SampleDiscreteLaplace(double epsilon, RngStream& rng);

// e^eps / (1 + e^eps).
double RrKeepProbability(double epsilon);

enum class BitDomain { kSign, kBinary };  // {-1, +1} or {0, 1}

// Keeps `bit` with probability RrKeepProbability(epsilon), otherwise flips
// it within `domain`. Throws ArgumentError if bit is outside the domain.
int RandomizedResponse(int bit, double epsilon, RngStream& rng,
                       BitDomain domain = BitDomain::kSign);

// Weight of a candidate is exp(budget * score / (2 * sensitivity)).
// Returns the normalized probability vector (max-subtracted, double).
std::vector<double> ExponentialWeights(std::span<const double> scores, double budget,
                                       double sensitivity);

// Samples an index by one uniform draw against the cumulative weights.
// Throws ArgumentError on an empty list or sensitivity <= 0, DomainError on a
// non-finite score.
std::size_t ExponentialMechanismIndex(std::span<const double> scores, double budget,
                                      double sensitivity, RngStream& rng);

template <class Candidate, class ScoreFn>
const Candidate& ExponentialMechanism(const std::vector<Candidate>& candidates, ScoreFn&& score,
                                      double budget, double sensitivity, RngStream& rng) {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(score(c));
  return candidates[ExponentialMechanismIndex(scores, budget, sensitivity, rng)];
}

// Exponential mechanism over all 2^|vars| assignments of `vars`, scoring
// each by the value of the constraints (edges) lying entirely inside vars.
// Writes the sampled values into `x`; other coordinates are untouched. An
// empty `vars` consumes no randomness. Throws ResourceError when |vars|
// exceeds `cap`.
void EmOverAssignments(const CspInstance& instance, std::span<const int> vars, double budget,
                       double sensitivity, Assignment& x, RngStream& rng,
                       int cap = kEmEnumerationCap);
void EmOverAssignments(const WeightedGraph& graph, std::span<const int> vars, double budget,
                       double sensitivity, Assignment& x, RngStream& rng,
                       int cap = kEmEnumerationCap);

// Single-threaded reference used to cross-check the parallel enumeration.
void EmOverAssignmentsSerial(const WeightedGraph& graph, std::span<const int> vars, double budget,
                             double sensitivity, Assignment& x, RngStream& rng,
                             int cap = kEmEnumerationCap);

}  // namespace dpcsp

#endif  // DPCSP_MECHANISMS_H_
