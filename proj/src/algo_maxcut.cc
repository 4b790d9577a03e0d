#include "dpcsp/algo_maxcut.h"

#include <cmath>
#include <numeric>

#include "dpcsp/errors.h"
#include "dpcsp/mechanisms.h"

namespace dpcsp {

namespace {

void RequireUnweighted(const WeightedGraph& graph, const char* who) {
  if (!graph.IsUnweighted()) throw PreconditionError(std::string(who) + " requires an unweighted graph");
}

struct Colors {
  std::vector<int> c1;
  std::vector<int> c2;
  std::vector<int> same;  // l(v)
  std::vector<int> degree;
};

Colors DrawColors(const WeightedGraph& graph, RngStream& rng) {
  const int n = graph.n();
  Colors c;
  c.c1.resize(n);
  c.c2.resize(n);
  for (int v = 0; v < n; ++v) {
    c.c1[v] = rng.Sign();
    c.c2[v] = rng.Sign();
  }
  c.same.assign(n, 0);
  c.degree = graph.Degrees();
  for (const auto& e : graph.edges()) {
    if (c.c1[e.u] == c.c1[e.v]) {
      ++c.same[e.u];
      ++c.same[e.v];
    }
  }
  return c;
}

std::vector<int> NonIsolatedVertices(const WeightedGraph& graph) {
  std::vector<bool> seen(graph.n(), false);
  for (const auto& e : graph.edges()) seen[e.u] = seen[e.v] = true;
  std::vector<int> out;
  for (int v = 0; v < graph.n(); ++v) {
    if (seen[v]) out.push_back(v);
  }
  return out;
}

void RequirePositiveEpsilon(double epsilon, const char* who) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    throw ArgumentError(std::string(who) + " requires epsilon > 0");
  }
}

}  // namespace

Cut ShearerBaseline(const WeightedGraph& graph, RngStream& rng) {
  RequireUnweighted(graph, "Shearer's algorithm");
  Colors c = DrawColors(graph, rng);
  Cut out(graph.n());
  for (int v = 0; v < graph.n(); ++v) {
    const bool coin = rng.Coin();
    const int twice_l = 2 * c.same[v];
    int side;
    if (twice_l < c.degree[v]) {
      side = c.c1[v];
    } else if (twice_l > c.degree[v]) {
      side = c.c2[v];
    } else {
      side = coin ? c.c1[v] : c.c2[v];
    }
    out.Set(v, side);
  }
  return out;
}

Cut DpShearer(const WeightedGraph& graph, double epsilon, RngStream& rng) {
  RequireUnweighted(graph, "DP Shearer");
  RequirePositiveEpsilon(epsilon, "DP Shearer");
  const double eps0 = epsilon / 2;
  Colors c = DrawColors(graph, rng);
  Cut out(graph.n());
  for (int v = 0; v < graph.n(); ++v) {
    const long long zeta = SampleDiscreteLaplace(eps0, rng);
    // ceil((d - 1)/2) == floor(d/2) for d >= 0
    const long long stat = c.same[v] - c.degree[v] / 2 + zeta;
    out.Set(v, stat <= 0 ? c.c1[v] : c.c2[v]);
  }
  return out;
}

std::pair<long long, long long> BudgetLedger::TotalFraction() const {
  long long num = 0, den = 1;
  for (const auto& s : stages) {
    long long l = std::lcm(den, static_cast<long long>(s.den));
    num = num * (l / den) + static_cast<long long>(s.num) * (l / s.den);
    den = l;
    long long g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  return {num, den};
}

double BudgetLedger::Total() const {
  auto [num, den] = TotalFraction();
  return epsilon * static_cast<double>(num) / static_cast<double>(den);
}

Cut DpMaxCutUnbounded(const WeightedGraph& graph, double epsilon, RngStream& rng,
                      const Alg5Options& options, Alg5Trace* trace) {
  RequireUnweighted(graph, "alg5");
  RequirePositiveEpsilon(epsilon, "alg5");
  if (!(options.degree_noise_factor > 0)) throw ArgumentError("degree noise factor must be > 0");
  const int n = graph.n();
  const double threshold = options.threshold.value_or(10000.0 / (epsilon * epsilon));
  const auto deg = graph.Degrees();
  std::vector<double> noisy(n);
  std::vector<bool> high(n);
  for (int v = 0; v < n; ++v) {
    noisy[v] = deg[v] + SampleLaplace(options.degree_noise_factor / epsilon, rng);
    high[v] = noisy[v] > threshold;
  }
  WeightedGraph g1 = graph.Induced(high);
  Cut s1 = Assignment::Uniform(n, rng);
  EmOverAssignments(g1, NonIsolatedVertices(g1), epsilon / 3, 1.0, s1, rng, options.em_cap);
  Cut s2 = DpShearer(graph, epsilon / 3, rng);
  const bool first = rng.Coin();
  if (trace) {
    trace->threshold = threshold;
    trace->noisy_degree = noisy;
    trace->high = high;
    trace->s1 = s1;
    trace->s2 = s2;
    trace->chose_first = first;
    trace->ledger = {epsilon, {{"degree_noise", 1, 3}, {"em_high_degree", 1, 3}, {"dp_shearer", 1, 3}}};
  }
  return first ? s1 : s2;
}

MatchingState MutualChoiceMatchingWithKey(const WeightedGraph& graph, std::uint64_t key) {
  const int n = graph.n();
  MatchingState st;
  st.f.assign(n, -1);
  std::vector<std::vector<int>> distinct(n);
  {
    std::vector<std::vector<int>> adj = graph.Adjacency();
    std::vector<int> mark(n, -1);
    for (int v = 0; v < n; ++v) {
      for (int u : adj[v]) {
        if (mark[u] == v) continue;
        mark[u] = v;
        distinct[v].push_back(u);
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    RngStream vr(key, static_cast<std::uint64_t>(v));
    for (std::size_t i = 0; i < distinct[v].size(); ++i) {
      if (vr.Below(i + 1) == 0) st.f[v] = distinct[v][i];
    }
  }
  std::vector<bool> matched(n, false);
  for (const auto& e : graph.edges()) {
    if (st.f[e.u] == e.v && st.f[e.v] == e.u && !matched[e.u] && !matched[e.v]) {
      matched[e.u] = matched[e.v] = true;
      st.edges.emplace_back(e.u, e.v);
    }
  }
  return st;
}

MatchingState MutualChoiceMatching(const WeightedGraph& graph, RngStream& rng) {
  return MutualChoiceMatchingWithKey(graph, rng.NextU64());
}

double MatchingEdgeCutProbability() {
  const double a = std::exp(2.5 / 4);
  return a / (1 + a);
}

Cut SampleMatchingCut(int n, const MatchingState& matching, RngStream& rng) {
  Cut s = Assignment::Uniform(n, rng);
  const double p_cut = MatchingEdgeCutProbability();
  for (auto [u, v] : matching.edges) {
    const int side = rng.Sign();
    s.Set(u, side);
    s.Set(v, rng.Bernoulli(p_cut) ? -side : side);
  }
  return s;
}

double Alg6AmplifiedBudget(double epsilon, double alpha) {
  const double q = std::pow(epsilon, 1 + alpha) / 70;
  return std::log1p(q * std::expm1(2.5));
}

bool Alg6ParametersOk(double epsilon, double alpha) {
  const double lhs = std::pow(epsilon, alpha);
  const double rhs = std::min(0.0106, 1.8 / std::log(10 / std::pow(epsilon, 1 + alpha)));
  return lhs <= rhs;
}

Cut DpMaxCutGeneral(const WeightedGraph& graph, double epsilon, double alpha, RngStream& rng,
                    const Alg6Options& options, Alg6Trace* trace) {
  RequireUnweighted(graph, "alg6");
  if (!(epsilon > 0 && epsilon <= 0.1)) throw ArgumentError("alg6 requires 0 < epsilon <= 0.1");
  if (!(alpha > 0) || !std::isfinite(alpha)) throw ArgumentError("alg6 requires alpha > 0");
  const double amplified = Alg6AmplifiedBudget(epsilon, alpha);
  if (amplified > epsilon / 6) {
    throw PreconditionError("subsampled matching stage would exceed its eps/6 budget");
  }
  std::vector<std::string> warnings;
  if (!Alg6ParametersOk(epsilon, alpha)) {
    warnings.push_back("(epsilon, alpha) violates eps^alpha <= min{0.0106, 1.8/ln(10/eps^(1+alpha))}; "
                       "output stays private but the utility guarantee does not apply");
  }
  const double final_error = 4 * (std::log(3.0) + 1) / epsilon;
  if (final_error > 0.01 * static_cast<double>(graph.m()) / 2) {
    warnings.push_back("final selection error term 4(ln 3 + 1)/eps exceeds 1% of m/2");
  }

  const int n = graph.n();
  const double threshold = options.threshold.value_or(24.0 / std::pow(epsilon, 1 + alpha));
  const double q = std::pow(epsilon, 1 + alpha) / 70;
  const auto deg = graph.Degrees();
  std::vector<double> noisy(n);
  std::vector<bool> v1(n), v2(n);
  for (int v = 0; v < n; ++v) {
    noisy[v] = deg[v] + SampleLaplace(12.0 / epsilon, rng);
    v1[v] = noisy[v] > threshold;
    v2[v] = !v1[v];
  }

  WeightedGraph g1 = graph.Induced(v1);
  Cut s1 = Assignment::Uniform(n, rng);
  EmOverAssignments(g1, NonIsolatedVertices(g1), epsilon / 6, 1.0, s1, rng, options.em_cap);

  std::vector<Edge> sampled;
  for (const auto& e : graph.edges()) {
    if (v2[e.u] && v2[e.v] && rng.Bernoulli(q)) sampled.push_back(e);
  }
  WeightedGraph g2(n, sampled);
  MatchingState matching = MutualChoiceMatching(g2, rng);
  Cut s2 = SampleMatchingCut(n, matching, rng);

  Cut s3(n);
  for (int v = 0; v < n; ++v) s3.Set(v, v1[v] ? 1 : -1);

  std::array<Cut, 3> cuts = {s1, s2, s3};
  std::array<double, 3> scores{};
  for (int i = 0; i < 3; ++i) scores[i] = CutValue(graph, cuts[i]);
  const std::size_t chosen = ExponentialMechanismIndex(scores, epsilon / 2, 1.0, rng);

  if (trace) {
    trace->threshold = threshold;
    trace->subsample_rate = q;
    trace->noisy_degree = std::move(noisy);
    trace->v1 = v1;
    trace->subsampled = std::move(sampled);
    trace->matching = std::move(matching);
    trace->cuts = cuts;
    trace->scores = scores;
    trace->chosen = chosen;
    trace->ledger = {epsilon,
                     {{"degree_noise", 1, 6}, {"em_high_degree", 1, 6}, {"matching_em", 1, 6},
                      {"final_selection", 1, 2}}};
    trace->amplified_matching_budget = amplified;
    trace->warnings = std::move(warnings);
  }
  return cuts[chosen];
}

}  // namespace dpcsp
