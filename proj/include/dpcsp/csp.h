#ifndef DPCSP_CSP_H_
#define DPCSP_CSP_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpcsp/assignment.h"

namespace dpcsp {

// Truth tables are enumerated explicitly, so arity is hard-capped.
inline constexpr int kMaxArity = 20;

// A predicate P : {+/-1}^arity -> {0,1} stored as a truth table. Entry idx
// holds P(a) where bit i of idx is set iff a_i = +1.
class Predicate {
 public:
  explicit Predicate(std::vector<std::uint8_t> table);

  // Satisfied iff the product of the arguments equals sign.
  static Predicate Parity(int arity, int sign = 1);
  // Satisfied iff every argument is +1.
  static Predicate And(int arity);
  static Predicate AlwaysTrue(int arity);

  int arity() const { return arity_; }
  const std::vector<std::uint8_t>& table() const { return table_; }

  bool EvalIndex(std::uint32_t idx) const { return table_[idx] != 0; }
  bool Eval(std::span<const std::int8_t> args) const;

  // P applied to (c_1 a_1, ..., c_k a_k); c_i = -1 negates argument i.
  Predicate WithNegation(std::span<const std::int8_t> pattern) const;

  // Returns b when this predicate is exactly "product of args == b".
  std::optional<int> ParitySign() const;

  friend bool operator==(const Predicate&, const Predicate&) = default;

 private:
  int arity_ = 0;
  std::vector<std::uint8_t> table_;
};

// One constraint over an ordered scope of distinct variable indices, either
// a kXOR sign form (satisfied iff prod_{i in scope} x_i == b) or an explicit
// truth table.
class Constraint {
 public:
  static Constraint Xor(std::vector<int> scope, int sign);
  static Constraint Table(std::vector<int> scope, Predicate predicate);

  const std::vector<int>& scope() const { return scope_; }
  int arity() const { return static_cast<int>(scope_.size()); }
  bool is_xor() const { return !predicate_.has_value(); }
  // Sign b of a kXOR constraint. Throws DomainError for table constraints.
  int sign() const;
  // Truth table; for sign-form constraints the equivalent parity table.
  Predicate AsPredicate() const;

  // args[i] is the value of scope()[i].
  bool SatisfiedLocal(std::span<const std::int8_t> args) const;
  bool Satisfied(const Assignment& x) const;
  // Satisfied on the packed assignment (bit v set iff x_v = -1).
  bool SatisfiedMask(std::uint64_t mask) const;

  bool Contains(int var) const;

  friend bool operator==(const Constraint&, const Constraint&) = default;

 private:
  Constraint(std::vector<int> scope, int sign, std::optional<Predicate> predicate);

  std::vector<int> scope_;
  int sign_ = 1;
  std::optional<Predicate> predicate_;
};

enum class InstanceKind { kGeneral, kKxor, kMaxCut };

std::string KindName(InstanceKind kind);

// A multiset of constraints over n variables. Immutable after construction.
class CspInstance {
 public:
  // Validates scope indices against n and the invariants implied by kind:
  // kKxor requires every constraint in sign form with arity k; kMaxCut
  // requires every constraint to be a 2XOR with b = -1.
  CspInstance(int n, std::vector<Constraint> constraints,
              InstanceKind kind = InstanceKind::kGeneral);

  static CspInstance Kxor(int n, int k, std::vector<Constraint> constraints);

  int n() const { return n_; }
  std::size_t m() const { return constraints_.size(); }
  InstanceKind kind() const { return kind_; }
  // Common arity for kKxor/kMaxCut, max arity for general instances.
  int k() const { return k_; }
  int max_arity() const;
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Constraint& constraint(std::size_t i) const { return constraints_[i]; }

  bool HasDistinctScopes() const;

  // Same instance plus / minus one constraint (neighboring instances).
  CspInstance WithAdded(const Constraint& c) const;
  CspInstance WithRemoved(std::size_t index) const;

 private:
  int n_ = 0;
  int k_ = 0;
  InstanceKind kind_ = InstanceKind::kGeneral;
  std::vector<Constraint> constraints_;
};

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Max-Cut view: n vertices and a weighted undirected edge multiset.
class WeightedGraph {
 public:
  WeightedGraph(int n, std::vector<Edge> edges);
  static WeightedGraph Unweighted(int n, const std::vector<std::pair<int, int>>& edges);

  int n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool IsUnweighted() const;
  double TotalWeight() const;
  double MaxWeight() const;
  // Incident edge count per vertex (multi-edges counted with multiplicity).
  std::vector<int> Degrees() const;
  std::vector<double> WeightedDegrees() const;
  // Neighbor lists with multiplicity, in edge-list order.
  std::vector<std::vector<int>> Adjacency() const;
  // Subgraph on the same vertex set keeping edges with both ends in `keep`.
  WeightedGraph Induced(const std::vector<bool>& keep) const;

  WeightedGraph WithAddedEdge(Edge e) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

// Max-Cut instance <-> unit-weight graph. ToGraph accepts any instance whose
// constraints are all 2XOR with b = -1; ToMaxCutInstance requires unit weights.
WeightedGraph ToGraph(const CspInstance& instance);
CspInstance ToMaxCutInstance(const WeightedGraph& graph);

// Number of satisfied constraints. Throws ArgumentError on length mismatch.
long long EvalValue(const CspInstance& instance, const Assignment& x);
// Total weight of edges with endpoints on opposite sides.
double CutValue(const WeightedGraph& graph, const Assignment& x);

// Probability that a uniform assignment satisfies the predicate, by
// enumerating all 2^arity inputs.
double Mu(const Predicate& p);
double Mu(const Constraint& c);
// Constraint average. Throws DomainError when m = 0.
double Mu(const CspInstance& instance);

// (1/m) sum_l (P_l(x) - E[P_l]); val = (mu + advantage) * m.
double AssociatedAdvantage(const CspInstance& instance, const Assignment& x);

// g(x) = (1/sqrt(m)) sum_l b_l prod_{i in S_l} x_i = 2 sqrt(m) advantage(x).
// Requires a kXOR or Max-Cut instance.
double GValue(const CspInstance& instance, const Assignment& x);

// Pairwise scope overlaps are at most one variable and no three constraints
// form a hyper-triangle (pairwise intersecting with no common variable).
bool IsTriangleFree(const CspInstance& instance);
// Graph sense: no 3-cycle and no parallel edges.
bool IsTriangleFree(const WeightedGraph& graph);

// deg(x_i): number of constraints whose scope contains i.
std::vector<int> Degrees(const CspInstance& instance);

// Entries in {-1, 0, +1}; 0 marks an unassigned variable.
using PartialAssignment = std::span<const std::int8_t>;

// Q = (P(x_j = +1) - P(x_j = -1)) / 2 with the rest of the scope taken from
// `fixed`. Returns 0 when j is not in the scope. Throws ArgumentError if a
// scope variable other than j is unassigned.
double DerivativeQ(const Constraint& c, int j, PartialAssignment fixed);

// sum_{l in Act(j)} b_l prod_{i in S_l \ {j}} y_i for every j in U, where
// Act(j) holds the constraints containing j and no other index of U.
// Entries for j outside U are 0. Requires a kXOR/Max-Cut instance.
std::vector<int> ActiveSignSums(const CspInstance& instance, const std::vector<bool>& in_u,
                                const Assignment& y);

// Lambda_j = ActiveSignSums[j] / sqrt(m). Throws ArgumentError if j is not in U.
double LambdaJ(const CspInstance& instance, int j, const std::vector<bool>& in_u,
               const Assignment& y);

}  // namespace dpcsp

#endif  // DPCSP_CSP_H_
