#ifndef DPCSP_ORACLES_H_
#define DPCSP_ORACLES_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpcsp/assignment.h"
#include "dpcsp/csp.h"

namespace dpcsp {

struct OptResult {
  double value = 0;
  Assignment argmax;
};

// Exact maximum over all 2^n assignments; the argmax is the first one found
// in mask order (bit i set iff x_i = -1). Cuts enumerate the 2^(n-1) masks
// with vertex n-1 on the +1 side. Throws ResourceError for n > 26.
OptResult BruteForceOpt(const CspInstance& instance);
OptResult BruteForceOpt(const WeightedGraph& graph);
OptResult BruteForceOptSerial(const CspInstance& instance);
OptResult BruteForceOptSerial(const WeightedGraph& graph);

// Distribution of T = sum_{l in N_j} 2 Q_l (an integer) under a uniform
// assignment of the other scope variables. Keys are values of T.
using SumDistribution = std::map<int, double>;

// Enumerates all 2^|A_j| assignments of the variables other than j in the
// active constraints. Throws ResourceError when |A_j| > cap.
SumDistribution SumDistributionByEnumeration(const CspInstance& instance, int j,
                                             std::span<const std::size_t> active, int cap = 22);
// Convolves per-constraint distributions. Exact when the active constraints
// share no variable besides j (true on triangle-free instances).
SumDistribution SumDistributionByConvolution(const CspInstance& instance, int j,
                                             std::span<const std::size_t> active);

struct MedianTheta {
  double theta = 0;     // median of sum Q_l (half the median of T)
  double tie_prob = 0.5;  // Pr[Z = +1 | sum == theta]
};

// theta is the smallest t with Pr[sum <= t] >= 1/2; tie_prob makes
// Pr[Z = +1] = 1/2 exactly.
MedianTheta MedianFromDistribution(const SumDistribution& dist);

enum class ThetaMethod { kAuto, kEnumerate, kConvolve };

// kAuto enumerates when |A_j| <= 22 and convolves otherwise.
MedianTheta ExactMedianTheta(const CspInstance& instance, int j,
                             std::span<const std::size_t> active,
                             ThetaMethod method = ThetaMethod::kAuto);

// pmf of Y = X + Z with X ~ Bin(d-1, 1/2) and Pr[Z = z] proportional to
// exp(-eps |z|), Z truncated where the tail mass drops below 1e-15.
std::map<long long, double> AtThresholdPmf(int d, double epsilon);
// Pr[Y = ceil((d-1)/2)].
double AtThresholdProb(int d, double epsilon);

// Exponential mechanism probabilities in long double with log-sum-exp.
std::vector<double> ExactEmDistribution(std::span<const double> scores, double budget,
                                        double sensitivity);
double ExactEmExpectedScore(std::span<const double> scores, double budget, double sensitivity);

struct AuditBucket {
  std::uint32_t label = 0;
  std::uint64_t hits_a = 0;
  std::uint64_t hits_b = 0;
  double point = 0;  // |ln(p_a / p_b)|, or the lower bound when one side is 0
  double lower = 0;
  double upper = 0;  // +inf for lower-bound-only buckets
  bool lower_bound_only = false;
  bool reliable = true;  // both sides have >= 100 hits
};

struct AuditReport {
  std::string mechanism;
  double epsilon = 0;  // configured budget
  double epsilon_hat = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  double confidence = 0.95;
  std::uint64_t trials = 0;
  std::string coarsening;
  std::vector<AuditBucket> buckets;
  bool any_unreliable = false;
};

// Runs `mechanism` on input A (false) and B (true), `trials` times each, and
// compares bucket frequencies. Bucket labels must be < 64. Wilson intervals
// per bucket with a Bonferroni split of 1 - confidence.
using AuditedMechanism = std::function<std::uint32_t(bool use_b, RngStream& rng)>;
AuditReport EmpiricalEpsilon(const AuditedMechanism& mechanism, std::uint64_t trials,
                             std::uint64_t seed, std::string coarsening,
                             double confidence = 0.95);

// A mechanism over CSP instances, for the single-constraint adversary.
using CspMechanism = std::function<Assignment(const CspInstance&, RngStream&)>;

struct AdversaryReport {
  std::vector<std::int8_t> pattern;  // chosen negation pattern c*
  double empty_mass = 0;  // Pr over the empty instance that x_S satisfies P(c* . x_S)
  double satisfaction = 0;  // measured on the single-constraint instance
  double se = 0;
  double mu = 0;
  double bound = 0;  // 1 - e^-eps (1 - mu)
  bool within_bound = false;  // satisfaction <= bound + 3 se
  std::uint64_t trials = 0;
};

// Scope is (0, ..., arity-1). `patterns` restricts the adversary's choice
// (e.g. to negations that keep a 2XOR a cut constraint); empty means all.
AdversaryReport AdversarialSingleConstraint(const CspMechanism& mechanism, int n,
                                            const Predicate& predicate, double epsilon,
                                            std::uint64_t trials, std::uint64_t seed,
                                            std::vector<std::vector<std::int8_t>> patterns = {});

// Packing family: size-n/2 supports with pairwise intersections strictly
// inside (n/8, 3n/8). Graph G_S is complete bipartite between S and its
// complement with weight 1/(64 n eps) per edge.
class PackingFamily {
 public:
  // Throws ValidationError if a support has the wrong size or a pair
  // violates the intersection window.
  PackingFamily(int n, double epsilon, std::vector<std::uint64_t> supports);

  int n() const { return n_; }
  double epsilon() const { return epsilon_; }
  const std::vector<std::uint64_t>& supports() const { return supports_; }
  std::size_t size() const { return supports_.size(); }
  double weight() const { return 1.0 / (64.0 * n_ * epsilon_); }
  double degree() const { return 1.0 / (128.0 * epsilon_); }
  WeightedGraph Graph(std::size_t i) const;

  static bool IntersectionOk(int n, std::uint64_t a, std::uint64_t b);

 private:
  int n_;
  double epsilon_;
  std::vector<std::uint64_t> supports_;
};

struct SeparationResult {
  bool ok = true;
  // First violation in (cut mask, S index, T index) order.
  std::uint64_t cut = 0;
  std::size_t s = 0;
  std::size_t t = 0;
};

// For every cut R and ordered pair S != T: Phi_S(R) > 7nd/16 implies
// Phi_T(R) <= 6nd/16. Compared on integer crossing counts. n <= 24.
SeparationResult VerifyPackingSeparation(const PackingFamily& family);
SeparationResult VerifyPackingSeparationSerial(const PackingFamily& family);

}  // namespace dpcsp

#endif  // DPCSP_ORACLES_H_
