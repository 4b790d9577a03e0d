#ifndef DPCSP_ALGO_MAXCUT_H_
#define DPCSP_ALGO_MAXCUT_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpcsp/assignment.h"
#include "dpcsp/csp.h"
#include "dpcsp/enumeration.h"
#include "dpcsp/rng.h"

namespace dpcsp {

// Shearer's two-coloring: keep c1(v) when fewer than d(v)/2 neighbors share
// its c1 color, take c2(v) when more, fair coin on equality.
// Throws PreconditionError on weighted input.
Cut ShearerBaseline(const WeightedGraph& graph, RngStream& rng);

// Pure-DP Shearer: keep c1(v) iff l(v) - ceil((d(v)-1)/2) + zeta_v <= 0 with
// zeta_v ~ DLap(eps/2). Requires epsilon > 0.
Cut DpShearer(const WeightedGraph& graph, double epsilon, RngStream& rng);

// One named slice of the privacy budget, as a fraction num/den of epsilon.
struct BudgetStage {
  std::string name;
  int num = 0;
  int den = 1;
};

struct BudgetLedger {
  double epsilon = 0;
  std::vector<BudgetStage> stages;
  // Exact rational sum of the stage fractions, as (num, den) in lowest terms.
  std::pair<long long, long long> TotalFraction() const;
  double Total() const;
};

struct Alg5Options {
  // Degree noise is Lap(degree_noise_factor / eps). The degree vector has
  // sensitivity 2 under edge changes, so eps/3 of budget needs factor 6.
  double degree_noise_factor = 6.0;
  std::optional<double> threshold;  // default 10000 / eps^2
  int em_cap = kEmEnumerationCap;
};

struct Alg5Trace {
  double threshold = 0;
  std::vector<double> noisy_degree;
  std::vector<bool> high;
  Cut s1;
  Cut s2;
  bool chose_first = false;
  BudgetLedger ledger;
};

// Unbounded-degree Max-Cut: EM (budget eps/3) on the graph induced by the
// noisy high-degree set, uniform elsewhere; DpShearer(G, eps/3); fair coin.
Cut DpMaxCutUnbounded(const WeightedGraph& graph, double epsilon, RngStream& rng,
                      const Alg5Options& options = {}, Alg5Trace* trace = nullptr);

// f[v] = chosen neighbor or -1; edges are mutual choices in edge-list order.
struct MatchingState {
  std::vector<int> f;
  std::vector<std::pair<int, int>> edges;
};

// Each vertex picks a uniform distinct neighbor by reservoir sampling over
// its neighbors in edge-list order, using RngStream(rng.NextU64(), v).
// Adding one edge therefore only changes the choices of its endpoints.
MatchingState MutualChoiceMatching(const WeightedGraph& graph, RngStream& rng);
MatchingState MutualChoiceMatchingWithKey(const WeightedGraph& graph, std::uint64_t key);

// e^{2.5/4} / (1 + e^{2.5/4}).
double MatchingEdgeCutProbability();

// EM with exponent 2.5 val / 4 over the graph formed by the matching edges,
// sampled factorized: each matched pair is cut with
// MatchingEdgeCutProbability(), every other vertex is uniform.
Cut SampleMatchingCut(int n, const MatchingState& matching, RngStream& rng);

struct Alg6Options {
  std::optional<double> threshold;  // default 24 / eps^(1+alpha)
  int em_cap = kEmEnumerationCap;
};

struct Alg6Trace {
  double threshold = 0;
  double subsample_rate = 0;
  std::vector<double> noisy_degree;
  std::vector<bool> v1;
  std::vector<Edge> subsampled;
  MatchingState matching;
  std::array<Cut, 3> cuts;
  std::array<double, 3> scores{};
  std::size_t chosen = 0;
  BudgetLedger ledger;
  double amplified_matching_budget = 0;  // ln(1 + q (e^2.5 - 1))
  std::vector<std::string> warnings;
};

// ln(1 + (eps^(1+alpha)/70)(e^2.5 - 1)).
double Alg6AmplifiedBudget(double epsilon, double alpha);

// eps^alpha <= min{0.0106, 1.8 / ln(10 / eps^(1+alpha))}.
bool Alg6ParametersOk(double epsilon, double alpha);

// General-graph Max-Cut: S1 from EM on the high-degree graph, S2 from the
// factorized EM on a subsampled mutual-choice matching, S3 = (V1, V2), final
// EM over {S1, S2, S3} at eps/2. Requires 0 < eps <= 0.1 and alpha > 0; a
// violated (eps, alpha) utility condition is reported as a warning.
Cut DpMaxCutGeneral(const WeightedGraph& graph, double epsilon, double alpha, RngStream& rng,
                    const Alg6Options& options = {}, Alg6Trace* trace = nullptr);

}  // namespace dpcsp

#endif  // DPCSP_ALGO_MAXCUT_H_
