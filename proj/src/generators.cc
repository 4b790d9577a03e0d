#include "dpcsp/generators.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "dpcsp/errors.h"
#include "dpcsp/rng.h"

namespace dpcsp {

namespace {

constexpr std::uint64_t kMaxRejections = 1'000'000;

double LogBinomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::vector<int> SampleSubset(int n, int k, RngStream& rng) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.Below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::uint64_t PairKey(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Incremental overlap and hyper-triangle checks for candidate scopes.
class TriangleFreeIndex {
 public:
  explicit TriangleFreeIndex(int n) : by_var_(n) {}

  bool Accepts(const std::vector<int>& scope) const {
    std::unordered_map<std::size_t, int> hit;  // constraint -> shared var
    for (int v : scope) {
      for (std::size_t c : by_var_[v]) {
        if (!hit.emplace(c, v).second) return false;
      }
    }
    std::vector<std::pair<std::size_t, int>> nb(hit.begin(), hit.end());
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (nb[a].second != nb[b].second && intersecting_.count(PairKey(nb[a].first, nb[b].first))) {
          return false;
        }
      }
    }
    return true;
  }

  void Add(const std::vector<int>& scope) {
    std::size_t id = count_++;
    for (int v : scope) {
      for (std::size_t c : by_var_[v]) intersecting_.insert(PairKey(c, id));
      by_var_[v].push_back(id);
    }
  }

 private:
  std::vector<std::vector<std::size_t>> by_var_;
  std::unordered_set<std::uint64_t> intersecting_;
  std::size_t count_ = 0;
};

}  // namespace

void CheckFeasible(const GenSpec& spec) {
  if (spec.n < 0 || spec.m < 0) throw ArgumentError("n and m must be nonnegative");
  if (spec.k < 1 || spec.k > kMaxArity) throw ArgumentError("k must be in [1, 20]");
  if (spec.m == 0) return;
  if (spec.k > spec.n) throw InfeasibleError("k exceeds n");
  if (std::log(static_cast<double>(spec.m)) > LogBinomial(spec.n, spec.k) + 1e-9) {
    throw InfeasibleError("more constraints than distinct scopes C(n, k)");
  }
  if (spec.max_degree) {
    if (*spec.max_degree < 0) throw ArgumentError("max degree must be nonnegative");
    if (static_cast<long long>(spec.m) * spec.k > static_cast<long long>(spec.n) * *spec.max_degree) {
      throw InfeasibleError("m * k exceeds n * D; degree cap cannot be met");
    }
  }
  if (spec.triangle_free && spec.k >= 2) {
    // Scopes pairwise share at most one variable, so their pairs are disjoint.
    long long pairs = static_cast<long long>(spec.n) * (spec.n - 1) / 2;
    long long per = static_cast<long long>(spec.k) * (spec.k - 1) / 2;
    if (static_cast<long long>(spec.m) * per > pairs) {
      throw InfeasibleError("too many constraints for pairwise overlap <= 1");
    }
  }
}

CspInstance GenRandomKxor(const GenSpec& spec) {
  CheckFeasible(spec);
  RngStream rng(spec.seed, 0);
  std::vector<Constraint> out;
  std::set<std::vector<int>> seen;
  std::vector<int> degree(spec.n, 0);
  TriangleFreeIndex index(spec.n);
  std::uint64_t rejections = 0;
  std::uint64_t reject_dup = 0, reject_degree = 0, reject_triangle = 0;
  while (static_cast<int>(out.size()) < spec.m) {
    std::vector<int> scope = SampleSubset(spec.n, spec.k, rng);
    const int sign = rng.Sign();
    bool ok = true;
    if (seen.count(scope)) {
      ok = false;
      ++reject_dup;
    } else if (spec.max_degree &&
               std::any_of(scope.begin(), scope.end(), [&](int v) { return degree[v] >= *spec.max_degree; })) {
      ok = false;
      ++reject_degree;
    } else if (spec.triangle_free && !index.Accepts(scope)) {
      ok = false;
      ++reject_triangle;
    }
    if (!ok) {
      if (++rejections >= kMaxRejections) {
        throw InfeasibleError("gave up after " + std::to_string(kMaxRejections) +
                              " consecutive rejections with " + std::to_string(out.size()) + "/" +
                              std::to_string(spec.m) + " constraints placed (duplicate " +
                              std::to_string(reject_dup) + ", degree " + std::to_string(reject_degree) +
                              ", triangle " + std::to_string(reject_triangle) + ")");
      }
      continue;
    }
    rejections = 0;
    seen.insert(scope);
    for (int v : scope) ++degree[v];
    if (spec.triangle_free) index.Add(scope);
    out.push_back(Constraint::Xor(std::move(scope), sign));
  }
  return CspInstance::Kxor(spec.n, spec.k, std::move(out));
}

WeightedGraph GenEvenCycle(int n) {
  if (n < 4 || n % 2 != 0) throw ArgumentError("even cycle needs even n >= 4");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return WeightedGraph::Unweighted(n, edges);
}

WeightedGraph GenCompleteBipartite(int a, int b) {
  if (a < 1 || b < 1) throw ArgumentError("complete bipartite needs positive part sizes");
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < a; ++u) {
    for (int v = 0; v < b; ++v) edges.emplace_back(u, a + v);
  }
  return WeightedGraph::Unweighted(a + b, edges);
}

WeightedGraph GenRandomBipartite(int a, int b, int m, std::uint64_t seed) {
  if (a < 1 || b < 1) throw ArgumentError("random bipartite needs positive part sizes");
  const long long total = static_cast<long long>(a) * b;
  if (m < 0 || m > total) throw ArgumentError("random bipartite needs 0 <= m <= a * b");
  RngStream rng(seed, 0);
  // Floyd's algorithm: m distinct indices out of a * b.
  std::vector<long long> chosen;
  std::unordered_set<long long> in;
  for (long long j = total - m; j < total; ++j) {
    long long t = static_cast<long long>(rng.Below(static_cast<std::uint64_t>(j + 1)));
    long long pick = in.count(t) ? j : t;
    in.insert(pick);
    chosen.push_back(pick);
  }
  std::vector<std::pair<int, int>> edges;
  for (long long idx : chosen) edges.emplace_back(static_cast<int>(idx / b), a + static_cast<int>(idx % b));
  WeightedGraph g = WeightedGraph::Unweighted(a + b, edges);
  if (!IsTriangleFree(g)) throw std::logic_error("bipartite generator produced a triangle");
  return g;
}

HardFamilyResult GenHardFamily(int n, double epsilon, std::size_t count, std::uint64_t seed,
                               std::uint64_t retry_budget) {
  if (n < 8 || n % 2 != 0 || n > 64) throw ArgumentError("hard family needs even n in [8, 64]");
  if (!(epsilon > 0)) throw ArgumentError("hard family needs epsilon > 0");
  RngStream rng(seed, 0);
  std::vector<std::uint64_t> supports;
  std::uint64_t attempts = 0;
  while (supports.size() < count && attempts < retry_budget) {
    ++attempts;
    std::uint64_t s = 0;
    for (int v : SampleSubset(n, n / 2, rng)) s |= std::uint64_t{1} << v;
    bool ok = std::all_of(supports.begin(), supports.end(),
                          [&](std::uint64_t t) { return PackingFamily::IntersectionOk(n, s, t); });
    if (ok) supports.push_back(s);
  }
  bool shortfall = supports.size() < count;
  return {PackingFamily(n, epsilon, std::move(supports)), count, shortfall, attempts};
}

CspInstance GenSingleConstraint(int n, const Predicate& predicate,
                                const std::vector<std::int8_t>& pattern,
                                const std::vector<int>& scope) {
  if (static_cast<int>(scope.size()) != predicate.arity()) {
    throw ArgumentError("scope size does not match predicate arity");
  }
  Predicate p = predicate.WithNegation(pattern);
  if (auto b = p.ParitySign(); b && p.arity() > 0) {
    if (p.arity() == 2 && *b == -1) return CspInstance(n, {Constraint::Xor(scope, *b)}, InstanceKind::kMaxCut);
    return CspInstance::Kxor(n, p.arity(), {Constraint::Xor(scope, *b)});
  }
  return CspInstance(n, {Constraint::Table(scope, p)});
}

CspInstance GenEmptyInstance(int n) { return CspInstance(n, {}); }

}  // namespace dpcsp
