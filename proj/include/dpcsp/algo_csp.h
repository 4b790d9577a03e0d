#ifndef DPCSP_ALGO_CSP_H_
#define DPCSP_ALGO_CSP_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpcsp/assignment.h"
#include "dpcsp/csp.h"
#include "dpcsp/enumeration.h"
#include "dpcsp/oracles.h"
#include "dpcsp/rng.h"

namespace dpcsp {

// Per-variable record of one alg1 run.
struct Alg1Trace {
  std::vector<bool> in_g;
  std::vector<int> active_count;  // |N_j| for j in G, 0 otherwise
  std::vector<int> twice_q_sum;   // 2 * sum_{l in N_j} Q_l for j in G
  std::vector<std::int8_t> z;     // Z_j before randomized response (0 for j in F)
};

struct Alg1Options {
  ThetaMethod theta_method = ThetaMethod::kAuto;
};

// Triangle-free Max-CSP. Each variable joins G by a fair coin; F is uniform;
// j in G gets Y_j * Z_j with Z_j = sign(sum Q_l - theta_j) (exact median,
// randomized on ties) and Y_j randomized response at epsilon. Throws
// PreconditionError on non-triangle-free input.
Assignment Alg1TriangleFreeBounded(const CspInstance& instance, double epsilon, RngStream& rng,
                                   const Alg1Options& options = {}, Alg1Trace* trace = nullptr);

enum class GlobalSign {
  kRandomFlip,        // output x or -x with probability 1/2 each
  kNone,              // output x
  kDiagnosticArgmax,  // NOT private: the better of x and -x
  kEmOverPair,        // two-candidate EM over {x, -x} at extra budget
};

std::string GlobalSignName(GlobalSign g);
GlobalSign ParseGlobalSign(const std::string& name);

struct AdvRandConfig {
  GlobalSign global_sign = GlobalSign::kRandomFlip;
  // kEmOverPair spends pair_budget_fraction * epsilon on top of epsilon.
  double pair_budget_fraction = 0.1;
  // Pin the data-independent draws (tests only).
  std::optional<int> fixed_s{};
  std::optional<int> fixed_r{};
};

struct AdvRandTrace {
  int s = 1;
  double p = 0.5;
  int r = 0;
  double eta = 0.5;
  double eps_prime = 0;
  std::vector<bool> in_u;
  std::vector<double> lambda;  // Lambda_j for j in U, 0 elsewhere
  Assignment pre_flip;         // after the private boost, before Chebyshev flips
  Assignment post_flip;        // after flips, before the global sign step
  bool negated = false;
  double boost_budget = 0;
  double sign_budget = 0;
};

// DP-AdvRand for kXOR instances with distinct scopes. Pr[x_j = +1] =
// (1 + tanh(eps' Lambda_j))/2 with eps' = eps sqrt(m)/2. Throws
// ValidationError on duplicate scopes, PreconditionError on non-XOR input.
Assignment Alg3DpAdvRand(const CspInstance& instance, double epsilon, const AdvRandConfig& config,
                         RngStream& rng, AdvRandTrace* trace = nullptr);

// Largest scale for arity k: max(1, ceil(log2 k)).
int AdvRandMaxScale(int k);

enum class LowDegreeSubroutine { kAlg1, kAlg3 };

struct Alg2Options {
  LowDegreeSubroutine subroutine = LowDegreeSubroutine::kAlg1;
  // Defaults: 10000/eps^4 for kAlg1, oddk_constant/eps^2 for kAlg3.
  std::optional<double> threshold;
  double oddk_constant = 100.0;
  int em_cap = kEmEnumerationCap;
  AdvRandConfig alg3;
  Alg1Options alg1;
};

double Alg2DefaultThreshold(double epsilon, const Alg2Options& options);

struct Alg2Trace {
  double threshold = 0;
  std::vector<double> noisy_degree;
  std::vector<bool> high;
  std::vector<std::size_t> high_constraints;
  Assignment x1;
  Assignment x2;
  bool chose_first = false;
};

// Degree partition for Max-kXOR: Lap(3k/eps) noisy degrees, EM at eps/3 on
// the constraints inside the high set, the subroutine at eps/3 on the whole
// instance, fair coin between the two. Requires epsilon > 0.
Assignment Alg2PartitionKxor(const CspInstance& instance, double epsilon,
                             const Alg2Options& options, RngStream& rng,
                             Alg2Trace* trace = nullptr);

// alg2 with alg3 as subroutine and threshold c/eps^2.
// Throws PreconditionError for even k.
Assignment AlgOddkUnbounded(const CspInstance& instance, double epsilon, RngStream& rng,
                            double constant = 100.0, const AdvRandConfig& config = {});

// Exponential mechanism over all assignments of the non-isolated variables,
// score = value, sensitivity 1; isolated variables uniform.
Assignment EmBaseline(const CspInstance& instance, double epsilon, RngStream& rng,
                      int cap = kEmEnumerationCap);

Assignment RandomBaseline(const CspInstance& instance, RngStream& rng);

}  // namespace dpcsp

#endif  // DPCSP_ALGO_CSP_H_
