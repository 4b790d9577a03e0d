#include "dpcsp/csp.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "dpcsp/errors.h"

namespace dpcsp {

namespace {

void CheckArity(int arity) {
  if (arity < 0) throw ArgumentError("negative arity");
  if (arity > kMaxArity) {
    throw ResourceError("predicate arity over enumeration cap", arity, kMaxArity);
  }
}

std::uint32_t LocalIndex(std::span<const std::int8_t> args) {
  std::uint32_t idx = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] > 0) idx |= 1u << i;
  }
  return idx;
}

std::uint64_t PairKey(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

}  // namespace

Predicate::Predicate(std::vector<std::uint8_t> table) : table_(std::move(table)) {
  std::size_t size = table_.size();
  if (size == 0 || (size & (size - 1)) != 0) {
    throw ArgumentError("truth table length must be a power of two");
  }
  int arity = 0;
  while ((std::size_t{1} << arity) < size) ++arity;
  CheckArity(arity);
  arity_ = arity;
  for (auto& b : table_) {
    if (b > 1) throw ArgumentError("truth table entries must be 0 or 1");
  }
}

Predicate Predicate::Parity(int arity, int sign) {
  CheckArity(arity);
  if (sign != 1 && sign != -1) throw ArgumentError("parity sign must be +/-1");
  std::vector<std::uint8_t> t(std::size_t{1} << arity);
  for (std::uint32_t idx = 0; idx < t.size(); ++idx) {
    int minus = arity - std::popcount(idx);
    int prod = (minus % 2 == 0) ? 1 : -1;
    t[idx] = prod == sign ? 1 : 0;
  }
  return Predicate(std::move(t));
}

Predicate Predicate::And(int arity) {
  CheckArity(arity);
  std::vector<std::uint8_t> t(std::size_t{1} << arity, 0);
  t.back() = 1;
  return Predicate(std::move(t));
}

Predicate Predicate::AlwaysTrue(int arity) {
  CheckArity(arity);
  return Predicate(std::vector<std::uint8_t>(std::size_t{1} << arity, 1));
}

bool Predicate::Eval(std::span<const std::int8_t> args) const {
  if (static_cast<int>(args.size()) != arity_) throw ArgumentError("predicate arity mismatch");
  return EvalIndex(LocalIndex(args));
}

Predicate Predicate::WithNegation(std::span<const std::int8_t> pattern) const {
  if (static_cast<int>(pattern.size()) != arity_) throw ArgumentError("negation pattern arity mismatch");
  std::uint32_t flip = 0;
  for (int i = 0; i < arity_; ++i) {
    if (pattern[i] == -1) {
      flip |= 1u << i;
    } else if (pattern[i] != 1) {
      throw ArgumentError("negation pattern entries must be +/-1");
    }
  }
  std::vector<std::uint8_t> t(table_.size());
  for (std::uint32_t idx = 0; idx < t.size(); ++idx) t[idx] = table_[idx ^ flip];
  return Predicate(std::move(t));
}

std::optional<int> Predicate::ParitySign() const {
  for (int sign : {1, -1}) {
    if (Parity(arity_, sign) == *this) return sign;
  }
  return std::nullopt;
}

Constraint::Constraint(std::vector<int> scope, int sign, std::optional<Predicate> predicate)
    : scope_(std::move(scope)), sign_(sign), predicate_(std::move(predicate)) {
  CheckArity(static_cast<int>(scope_.size()));
  std::vector<int> sorted = scope_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ArgumentError("constraint scope has repeated variables");
  }
  if (!sorted.empty() && sorted.front() < 0) throw ArgumentError("negative variable index");
}

Constraint Constraint::Xor(std::vector<int> scope, int sign) {
  if (sign != 1 && sign != -1) throw ArgumentError("xor sign must be +/-1");
  if (scope.empty()) throw ArgumentError("xor constraint needs a nonempty scope");
  return Constraint(std::move(scope), sign, std::nullopt);
}

Constraint Constraint::Table(std::vector<int> scope, Predicate predicate) {
  if (predicate.arity() != static_cast<int>(scope.size())) {
    throw ArgumentError("truth table length must be 2^arity");
  }
  return Constraint(std::move(scope), 1, std::move(predicate));
}

int Constraint::sign() const {
  if (!is_xor()) throw DomainError("sign() called on a truth-table constraint");
  return sign_;
}

Predicate Constraint::AsPredicate() const {
  if (predicate_) return *predicate_;
  return Predicate::Parity(arity(), sign_);
}

bool Constraint::SatisfiedLocal(std::span<const std::int8_t> args) const {
  if (args.size() != scope_.size()) throw ArgumentError("constraint arity mismatch");
  if (predicate_) return predicate_->EvalIndex(LocalIndex(args));
  int prod = 1;
  for (auto a : args) prod *= a;
  return prod == sign_;
}

bool Constraint::Satisfied(const Assignment& x) const {
  if (predicate_) {
    std::uint32_t idx = 0;
    for (std::size_t i = 0; i < scope_.size(); ++i) {
      if (x[scope_[i]] > 0) idx |= 1u << i;
    }
    return predicate_->EvalIndex(idx);
  }
  int prod = 1;
  for (int v : scope_) prod *= x[v];
  return prod == sign_;
}

bool Constraint::SatisfiedMask(std::uint64_t mask) const {
  if (predicate_) {
    std::uint32_t idx = 0;
    for (std::size_t i = 0; i < scope_.size(); ++i) {
      if (((mask >> scope_[i]) & 1) == 0) idx |= 1u << i;
    }
    return predicate_->EvalIndex(idx);
  }
  int minus = 0;
  for (int v : scope_) minus += static_cast<int>((mask >> v) & 1);
  int prod = (minus % 2 == 0) ? 1 : -1;
  return prod == sign_;
}

bool Constraint::Contains(int var) const {
  return std::find(scope_.begin(), scope_.end(), var) != scope_.end();
}

std::string KindName(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kGeneral: return "general";
    case InstanceKind::kKxor: return "kxor";
    case InstanceKind::kMaxCut: return "maxcut";
  }
  return "general";
}

CspInstance::CspInstance(int n, std::vector<Constraint> constraints, InstanceKind kind)
    : n_(n), kind_(kind), constraints_(std::move(constraints)) {
  if (n < 0) throw ArgumentError("negative variable count");
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    for (int v : constraints_[i].scope()) {
      if (v >= n_) {
        throw ArgumentError("constraint " + std::to_string(i) + " references variable " +
                            std::to_string(v) + " outside [0, " + std::to_string(n_) + ")");
      }
    }
  }
  switch (kind_) {
    case InstanceKind::kGeneral:
      k_ = max_arity();
      break;
    case InstanceKind::kKxor:
      k_ = constraints_.empty() ? 0 : constraints_.front().arity();
      for (const auto& c : constraints_) {
        if (!c.is_xor()) throw ValidationError("kxor instance contains a truth-table constraint");
        if (c.arity() != k_) throw ValidationError("kxor instance has mixed arities");
      }
      break;
    case InstanceKind::kMaxCut:
      k_ = 2;
      for (const auto& c : constraints_) {
        if (!c.is_xor() || c.arity() != 2 || c.sign() != -1) {
          throw ValidationError("maxcut constraints must be 2XOR with b = -1");
        }
      }
      break;
  }
}

CspInstance CspInstance::Kxor(int n, int k, std::vector<Constraint> constraints) {
  if (k < 1) throw ArgumentError("kxor arity must be >= 1");
  for (const auto& c : constraints) {
    if (c.arity() != k) throw ValidationError("kxor instance has a constraint of the wrong arity");
  }
  CspInstance out(n, std::move(constraints), InstanceKind::kKxor);
  out.k_ = k;
  return out;
}

int CspInstance::max_arity() const {
  int k = 0;
  for (const auto& c : constraints_) k = std::max(k, c.arity());
  return k;
}

bool CspInstance::HasDistinctScopes() const {
  std::set<std::vector<int>> seen;
  for (const auto& c : constraints_) {
    std::vector<int> s = c.scope();
    std::sort(s.begin(), s.end());
    if (!seen.insert(std::move(s)).second) return false;
  }
  return true;
}

CspInstance CspInstance::WithAdded(const Constraint& c) const {
  std::vector<Constraint> cs = constraints_;
  cs.push_back(c);
  if (kind_ == InstanceKind::kKxor) return Kxor(n_, k_, std::move(cs));
  return CspInstance(n_, std::move(cs), kind_);
}

CspInstance CspInstance::WithRemoved(std::size_t index) const {
  if (index >= constraints_.size()) throw ArgumentError("constraint index out of range");
  std::vector<Constraint> cs = constraints_;
  cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(index));
  if (kind_ == InstanceKind::kKxor) return Kxor(n_, k_, std::move(cs));
  return CspInstance(n_, std::move(cs), kind_);
}

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw ArgumentError("negative vertex count");
  for (const auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) throw ArgumentError("edge endpoint out of range");
    if (e.u == e.v) throw ArgumentError("self-loops are not allowed");
    if (!(e.weight > 0) || !std::isfinite(e.weight)) throw ArgumentError("edge weights must be positive");
  }
}

WeightedGraph WeightedGraph::Unweighted(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (auto [u, v] : edges) es.push_back({u, v, 1.0});
  return WeightedGraph(n, std::move(es));
}

bool WeightedGraph::IsUnweighted() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight == 1.0; });
}

double WeightedGraph::TotalWeight() const {
  double s = 0;
  for (const auto& e : edges_) s += e.weight;
  return s;
}

double WeightedGraph::MaxWeight() const {
  double w = 0;
  for (const auto& e : edges_) w = std::max(w, e.weight);
  return w;
}

std::vector<int> WeightedGraph::Degrees() const {
  std::vector<int> d(n_, 0);
  for (const auto& e : edges_) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

std::vector<double> WeightedGraph::WeightedDegrees() const {
  std::vector<double> d(n_, 0.0);
  for (const auto& e : edges_) {
    d[e.u] += e.weight;
    d[e.v] += e.weight;
  }
  return d;
}

std::vector<std::vector<int>> WeightedGraph::Adjacency() const {
  std::vector<std::vector<int>> adj(n_);
  for (const auto& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

WeightedGraph WeightedGraph::Induced(const std::vector<bool>& keep) const {
  if (keep.size() != static_cast<std::size_t>(n_)) throw ArgumentError("mask length mismatch");
  std::vector<Edge> es;
  for (const auto& e : edges_) {
    if (keep[e.u] && keep[e.v]) es.push_back(e);
  }
  return WeightedGraph(n_, std::move(es));
}

WeightedGraph WeightedGraph::WithAddedEdge(Edge e) const {
  std::vector<Edge> es = edges_;
  es.push_back(e);
  return WeightedGraph(n_, std::move(es));
}

WeightedGraph ToGraph(const CspInstance& instance) {
  std::vector<Edge> es;
  es.reserve(instance.m());
  for (const auto& c : instance.constraints()) {
    if (!c.is_xor() || c.arity() != 2 || c.sign() != -1) {
      throw DomainError("only 2XOR constraints with b = -1 convert to edges");
    }
    es.push_back({c.scope()[0], c.scope()[1], 1.0});
  }
  return WeightedGraph(instance.n(), std::move(es));
}

CspInstance ToMaxCutInstance(const WeightedGraph& graph) {
  if (!graph.IsUnweighted()) throw DomainError("weighted graphs have no Max-Cut CSP view");
  std::vector<Constraint> cs;
  cs.reserve(graph.m());
  for (const auto& e : graph.edges()) cs.push_back(Constraint::Xor({e.u, e.v}, -1));
  return CspInstance(graph.n(), std::move(cs), InstanceKind::kMaxCut);
}

long long EvalValue(const CspInstance& instance, const Assignment& x) {
  if (x.size() != static_cast<std::size_t>(instance.n())) {
    throw ArgumentError("assignment length " + std::to_string(x.size()) + " != n = " +
                        std::to_string(instance.n()));
  }
  long long v = 0;
  for (const auto& c : instance.constraints()) v += c.Satisfied(x) ? 1 : 0;
  return v;
}

double CutValue(const WeightedGraph& graph, const Assignment& x) {
  if (x.size() != static_cast<std::size_t>(graph.n())) throw ArgumentError("cut length mismatch");
  double v = 0;
  for (const auto& e : graph.edges()) {
    if (x[e.u] != x[e.v]) v += e.weight;
  }
  return v;
}

double Mu(const Predicate& p) {
  long long sat = 0;
  for (auto b : p.table()) sat += b;
  return static_cast<double>(sat) / static_cast<double>(p.table().size());
}

double Mu(const Constraint& c) {
  if (c.is_xor()) return 0.5;
  return Mu(c.AsPredicate());
}

double Mu(const CspInstance& instance) {
  if (instance.m() == 0) throw DomainError("mu of an empty instance is undefined");
  double s = 0;
  for (const auto& c : instance.constraints()) s += Mu(c);
  return s / static_cast<double>(instance.m());
}

double AssociatedAdvantage(const CspInstance& instance, const Assignment& x) {
  if (instance.m() == 0) throw DomainError("advantage of an empty instance is undefined");
  if (x.size() != static_cast<std::size_t>(instance.n())) throw ArgumentError("assignment length mismatch");
  double s = 0;
  for (const auto& c : instance.constraints()) s += (c.Satisfied(x) ? 1.0 : 0.0) - Mu(c);
  return s / static_cast<double>(instance.m());
}

double GValue(const CspInstance& instance, const Assignment& x) {
  if (instance.kind() == InstanceKind::kGeneral) throw DomainError("g is defined for kXOR instances only");
  if (instance.m() == 0) throw DomainError("g of an empty instance is undefined");
  if (x.size() != static_cast<std::size_t>(instance.n())) throw ArgumentError("assignment length mismatch");
  long long s = 0;
  for (const auto& c : instance.constraints()) {
    int prod = c.sign();
    for (int v : c.scope()) prod *= x[v];
    s += prod;
  }
  return static_cast<double>(s) / std::sqrt(static_cast<double>(instance.m()));
}

bool IsTriangleFree(const CspInstance& instance) {
  const auto& cs = instance.constraints();
  std::vector<std::vector<std::size_t>> by_var(instance.n());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (int v : cs[i].scope()) by_var[v].push_back(i);
  }
  // shared[i] maps each constraint intersecting i to the shared variable.
  std::vector<std::unordered_map<std::size_t, int>> shared(cs.size());
  std::unordered_set<std::uint64_t> intersecting;
  for (int v = 0; v < instance.n(); ++v) {
    const auto& list = by_var[v];
    for (std::size_t a = 0; a < list.size(); ++a) {
      for (std::size_t b = a + 1; b < list.size(); ++b) {
        std::size_t i = list[a], j = list[b];
        if (!shared[i].emplace(j, v).second) return false;
        shared[j].emplace(i, v);
        intersecting.insert(PairKey(i, j));
      }
    }
  }
  for (std::size_t c = 0; c < cs.size(); ++c) {
    std::vector<std::pair<std::size_t, int>> nb(shared[c].begin(), shared[c].end());
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (nb[a].second == nb[b].second) continue;
        if (intersecting.count(PairKey(nb[a].first, nb[b].first))) return false;
      }
    }
  }
  return true;
}

bool IsTriangleFree(const WeightedGraph& graph) {
  std::vector<std::unordered_set<int>> adj(graph.n());
  for (const auto& e : graph.edges()) {
    if (!adj[e.u].insert(e.v).second) return false;
    adj[e.v].insert(e.u);
  }
  for (const auto& e : graph.edges()) {
    const auto& small = adj[e.u].size() < adj[e.v].size() ? adj[e.u] : adj[e.v];
    const auto& big = adj[e.u].size() < adj[e.v].size() ? adj[e.v] : adj[e.u];
    for (int w : small) {
      if (big.count(w)) return false;
    }
  }
  return true;
}

std::vector<int> Degrees(const CspInstance& instance) {
  std::vector<int> d(instance.n(), 0);
  for (const auto& c : instance.constraints()) {
    for (int v : c.scope()) ++d[v];
  }
  return d;
}

double DerivativeQ(const Constraint& c, int j, PartialAssignment fixed) {
  int pos = -1;
  std::uint32_t idx = 0;
  for (int i = 0; i < c.arity(); ++i) {
    int v = c.scope()[i];
    if (v == j) {
      pos = i;
      continue;
    }
    if (static_cast<std::size_t>(v) >= fixed.size() || fixed[v] == 0) {
      throw ArgumentError("partial assignment does not cover variable " + std::to_string(v));
    }
    if (fixed[v] > 0) idx |= 1u << i;
  }
  if (pos < 0) return 0.0;
  if (c.is_xor()) {
    int prod = c.sign();
    for (int v : c.scope()) {
      if (v != j) prod *= fixed[v];
    }
    return 0.5 * prod;
  }
  Predicate p = c.AsPredicate();
  double plus = p.EvalIndex(idx | (1u << pos)) ? 1.0 : 0.0;
  double minus = p.EvalIndex(idx) ? 1.0 : 0.0;
  return (plus - minus) / 2.0;
}

std::vector<int> ActiveSignSums(const CspInstance& instance, const std::vector<bool>& in_u,
                                const Assignment& y) {
  if (instance.kind() == InstanceKind::kGeneral) throw DomainError("Lambda is defined for kXOR instances only");
  if (in_u.size() != static_cast<std::size_t>(instance.n()) ||
      y.size() != static_cast<std::size_t>(instance.n())) {
    throw ArgumentError("U mask / y length mismatch");
  }
  std::vector<int> sums(instance.n(), 0);
  for (const auto& c : instance.constraints()) {
    int j = -1, count = 0;
    int prod = c.sign();
    for (int v : c.scope()) {
      if (in_u[v]) {
        j = v;
        ++count;
      } else {
        prod *= y[v];
      }
    }
    if (count == 1) sums[j] += prod;
  }
  return sums;
}

double LambdaJ(const CspInstance& instance, int j, const std::vector<bool>& in_u,
               const Assignment& y) {
  if (j < 0 || j >= instance.n() || !in_u.at(j)) throw ArgumentError("j is not in U");
  if (instance.m() == 0) return 0.0;
  auto sums = ActiveSignSums(instance, in_u, y);
  return sums[j] / std::sqrt(static_cast<double>(instance.m()));
}

}  // namespace dpcsp
