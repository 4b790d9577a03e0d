#ifndef DPCSP_GENERATORS_H_
#define DPCSP_GENERATORS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "dpcsp/csp.h"
#include "dpcsp/oracles.h"

namespace dpcsp {

struct GenSpec {
  int n = 0;
  int m = 0;
  int k = 2;
  std::uint64_t seed = 0;
  bool triangle_free = false;
  std::optional<int> max_degree{};
};

// Throws InfeasibleError when the combination cannot be met (e.g. m * k >
// n * D, more distinct scopes than C(n, k), or more constraints than a
// linear hypergraph on n vertices allows).
void CheckFeasible(const GenSpec& spec);

// m kXOR constraints with distinct sorted scopes and uniform signs. Scopes
// are drawn uniformly and rejected against the requested structure; 10^6
// consecutive rejections throw InfeasibleError.
CspInstance GenRandomKxor(const GenSpec& spec);

WeightedGraph GenEvenCycle(int n);
WeightedGraph GenCompleteBipartite(int a, int b);
// m distinct edges between parts [0, a) and [a, a + b).
WeightedGraph GenRandomBipartite(int a, int b, int m, std::uint64_t seed);

struct HardFamilyResult {
  PackingFamily family;
  std::size_t requested = 0;
  bool shortfall = false;
  std::uint64_t attempts = 0;
};

// Size-n/2 supports drawn uniformly, each accepted only if it meets the
// pairwise intersection window against every accepted support.
HardFamilyResult GenHardFamily(int n, double epsilon, std::size_t count, std::uint64_t seed,
                               std::uint64_t retry_budget = 100000);

// One constraint P(c . x_S). Parity predicates come back in sign form (kind
// kxor, or maxcut for 2XOR with b = -1); others as a truth table.
CspInstance GenSingleConstraint(int n, const Predicate& predicate,
                                const std::vector<std::int8_t>& pattern,
                                const std::vector<int>& scope);
CspInstance GenEmptyInstance(int n);

}  // namespace dpcsp

#endif  // DPCSP_GENERATORS_H_
