#include "dpcsp/algo_csp.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dpcsp/errors.h"
#include "dpcsp/mechanisms.h"

namespace dpcsp {

namespace {

void RequireXorInstance(const CspInstance& instance, const char* who) {
  if (instance.kind() == InstanceKind::kGeneral) {
    throw PreconditionError(std::string(who) + " requires a kxor or maxcut instance");
  }
}

std::vector<int> NonIsolated(const CspInstance& instance, const std::vector<std::size_t>& constraints) {
  std::vector<bool> seen(instance.n(), false);
  for (std::size_t l : constraints) {
    for (int v : instance.constraint(l).scope()) seen[v] = true;
  }
  std::vector<int> vars;
  for (int v = 0; v < instance.n(); ++v) {
    if (seen[v]) vars.push_back(v);
  }
  return vars;
}

#ifndef NDEBUG
// A_j and A_j' are disjoint whenever j and j' share a constraint.
void CheckActiveSetsDisjoint(const CspInstance& instance, const std::vector<std::vector<std::size_t>>& nj,
                             const std::vector<bool>& in_g) {
  const int n = instance.n();
  std::vector<std::vector<int>> a(n);
  for (int j = 0; j < n; ++j) {
    for (std::size_t l : nj[j]) {
      for (int v : instance.constraint(l).scope()) {
        if (v != j) a[j].push_back(v);
      }
    }
    std::sort(a[j].begin(), a[j].end());
  }
  for (const auto& c : instance.constraints()) {
    for (int j : c.scope()) {
      for (int j2 : c.scope()) {
        if (j >= j2 || !in_g[j] || !in_g[j2]) continue;
        std::vector<int> common;
        std::set_intersection(a[j].begin(), a[j].end(), a[j2].begin(), a[j2].end(),
                              std::back_inserter(common));
        if (!common.empty()) throw std::logic_error("A_j sets overlap on a triangle-free instance");
      }
    }
  }
}
#endif

}  // namespace

Assignment Alg1TriangleFreeBounded(const CspInstance& instance, double epsilon, RngStream& rng,
                                   const Alg1Options& options, Alg1Trace* trace) {
  if (!(epsilon >= 0)) throw ArgumentError("epsilon must be >= 0");
  if (!IsTriangleFree(instance)) throw PreconditionError("alg1 requires a triangle-free instance");
  const int n = instance.n();
  std::vector<bool> in_g(n);
  for (int v = 0; v < n; ++v) in_g[v] = rng.Coin();
  Assignment x(n);
  for (int v = 0; v < n; ++v) {
    if (!in_g[v]) x.Set(v, rng.Sign());
  }
  // N_j: constraints whose only G variable is j.
  std::vector<std::vector<std::size_t>> nj(n);
  for (std::size_t l = 0; l < instance.m(); ++l) {
    int j = -1, count = 0;
    for (int v : instance.constraint(l).scope()) {
      if (in_g[v]) {
        j = v;
        ++count;
      }
    }
    if (count == 1) nj[j].push_back(l);
  }
#ifndef NDEBUG
  CheckActiveSetsDisjoint(instance, nj, in_g);
#endif
  if (trace) {
    trace->in_g = in_g;
    trace->active_count.assign(n, 0);
    trace->twice_q_sum.assign(n, 0);
    trace->z.assign(n, 0);
  }
  std::vector<std::int8_t> fixed(x.values().begin(), x.values().end());
  for (int v = 0; v < n; ++v) {
    if (in_g[v]) fixed[v] = 0;
  }
  for (int j = 0; j < n; ++j) {
    if (!in_g[j]) continue;
    MedianTheta med = ExactMedianTheta(instance, j, nj[j], options.theta_method);
    int twice = 0;
    for (std::size_t l : nj[j]) {
      twice += static_cast<int>(std::lround(2.0 * DerivativeQ(instance.constraint(l), j, fixed)));
    }
    const int twice_theta = static_cast<int>(std::lround(2.0 * med.theta));
    const double tie = rng.Uniform();
    int z;
    if (twice > twice_theta) {
      z = 1;
    } else if (twice < twice_theta) {
      z = -1;
    } else {
      z = tie < med.tie_prob ? 1 : -1;
    }
    x.Set(j, RandomizedResponse(z, epsilon, rng));
    if (trace) {
      trace->active_count[j] = static_cast<int>(nj[j].size());
      trace->twice_q_sum[j] = twice;
      trace->z[j] = static_cast<std::int8_t>(z);
    }
  }
  return x;
}

std::string GlobalSignName(GlobalSign g) {
  switch (g) {
    case GlobalSign::kRandomFlip: return "random_flip";
    case GlobalSign::kNone: return "none";
    case GlobalSign::kDiagnosticArgmax: return "diagnostic_argmax";
    case GlobalSign::kEmOverPair: return "em_over_pair";
  }
  return "random_flip";
}

GlobalSign ParseGlobalSign(const std::string& name) {
  for (auto g : {GlobalSign::kRandomFlip, GlobalSign::kNone, GlobalSign::kDiagnosticArgmax,
                 GlobalSign::kEmOverPair}) {
    if (GlobalSignName(g) == name) return g;
  }
  throw ValidationError("unknown global sign strategy '" + name + "'");
}

int AdvRandMaxScale(int k) {
  int s = 0;
  while ((1 << s) < k) ++s;
  return std::max(1, s);
}

Assignment Alg3DpAdvRand(const CspInstance& instance, double epsilon, const AdvRandConfig& config,
                         RngStream& rng, AdvRandTrace* trace) {
  if (!(epsilon >= 0)) throw ArgumentError("epsilon must be >= 0");
  RequireXorInstance(instance, "alg3");
  if (!instance.HasDistinctScopes()) throw ValidationError("alg3 requires distinct scopes");
  const int n = instance.n();
  const int k = std::max(1, instance.k());
  const int max_s = AdvRandMaxScale(k);

  int s = static_cast<int>(rng.Below(static_cast<std::uint64_t>(max_s))) + 1;
  if (config.fixed_s) {
    if (*config.fixed_s < 1 || *config.fixed_s > max_s) throw ArgumentError("fixed_s out of range");
    s = *config.fixed_s;
  }
  const double p = std::ldexp(1.0, -s);
  std::vector<bool> in_u(n);
  for (int v = 0; v < n; ++v) in_u[v] = rng.Bernoulli(p);
  Assignment x(n);
  for (int v = 0; v < n; ++v) {
    if (!in_u[v]) x.Set(v, rng.Sign());
  }
  // eps' * Lambda_j = (eps/2) * sum, independent of m.
  std::vector<int> sums = ActiveSignSums(instance, in_u, x);
  for (int j = 0; j < n; ++j) {
    if (!in_u[j]) continue;
    double plus = 0.5 * (1 + std::tanh(0.5 * epsilon * sums[j]));
    x.Set(j, rng.Uniform() < plus ? 1 : -1);
  }
  Assignment pre_flip = x;
  int r = static_cast<int>(rng.Below(static_cast<std::uint64_t>(k) + 1));
  if (config.fixed_r) {
    if (*config.fixed_r < 0 || *config.fixed_r > k) throw ArgumentError("fixed_r out of range");
    r = *config.fixed_r;
  }
  const double eta = std::cos(r * std::numbers::pi / k) / 2;
  const double flip = (1 - eta) / 2;
  for (int j = 0; j < n; ++j) {
    if (in_u[j] && rng.Uniform() < flip) x.Flip(j);
  }
  Assignment post_flip = x;

  bool negate = false;
  double sign_budget = 0;
  switch (config.global_sign) {
    case GlobalSign::kRandomFlip:
      negate = rng.Coin();
      break;
    case GlobalSign::kNone:
      break;
    case GlobalSign::kDiagnosticArgmax:
      negate = EvalValue(instance, x.Negated()) > EvalValue(instance, x);
      break;
    case GlobalSign::kEmOverPair: {
      if (!(config.pair_budget_fraction >= 0)) throw ArgumentError("pair budget fraction must be >= 0");
      sign_budget = config.pair_budget_fraction * epsilon;
      std::vector<double> scores = {static_cast<double>(EvalValue(instance, x)),
                                    static_cast<double>(EvalValue(instance, x.Negated()))};
      negate = ExponentialMechanismIndex(scores, sign_budget, 1.0, rng) == 1;
      break;
    }
  }
  if (negate) x = x.Negated();

  if (trace) {
    trace->s = s;
    trace->p = p;
    trace->r = r;
    trace->eta = eta;
    trace->eps_prime = epsilon * std::sqrt(static_cast<double>(instance.m())) / 2;
    trace->in_u = in_u;
    trace->lambda.assign(n, 0.0);
    if (instance.m() > 0) {
      for (int j = 0; j < n; ++j) {
        if (in_u[j]) trace->lambda[j] = sums[j] / std::sqrt(static_cast<double>(instance.m()));
      }
    }
    trace->pre_flip = std::move(pre_flip);
    trace->post_flip = std::move(post_flip);
    trace->negated = negate;
    trace->boost_budget = epsilon;
    trace->sign_budget = sign_budget;
  }
  return x;
}

double Alg2DefaultThreshold(double epsilon, const Alg2Options& options) {
  if (options.threshold) return *options.threshold;
  if (options.subroutine == LowDegreeSubroutine::kAlg1) return 10000.0 / std::pow(epsilon, 4);
  return options.oddk_constant / (epsilon * epsilon);
}

Assignment Alg2PartitionKxor(const CspInstance& instance, double epsilon,
                             const Alg2Options& options, RngStream& rng, Alg2Trace* trace) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw ArgumentError("alg2 requires epsilon > 0");
  RequireXorInstance(instance, "alg2");
  if (options.subroutine == LowDegreeSubroutine::kAlg1 && !IsTriangleFree(instance)) {
    throw PreconditionError("alg2 with the alg1 subroutine requires a triangle-free instance");
  }
  if (options.subroutine == LowDegreeSubroutine::kAlg3 && !instance.HasDistinctScopes()) {
    throw ValidationError("alg3 subroutine requires distinct scopes");
  }
  const int n = instance.n();
  const int k = std::max(1, instance.k());
  const double threshold = Alg2DefaultThreshold(epsilon, options);
  const double scale = 3.0 * k / epsilon;
  auto deg = Degrees(instance);
  std::vector<double> noisy(n);
  std::vector<bool> high(n);
  for (int v = 0; v < n; ++v) {
    noisy[v] = deg[v] + SampleLaplace(scale, rng);
    high[v] = noisy[v] > threshold;
  }
  std::vector<std::size_t> high_constraints;
  for (std::size_t l = 0; l < instance.m(); ++l) {
    const auto& scope = instance.constraint(l).scope();
    if (std::all_of(scope.begin(), scope.end(), [&](int v) { return high[v]; })) {
      high_constraints.push_back(l);
    }
  }
  std::vector<int> em_vars = NonIsolated(instance, high_constraints);
  Assignment x1 = Assignment::Uniform(n, rng);
  EmOverAssignments(instance, em_vars, epsilon / 3, 1.0, x1, rng, options.em_cap);

  Assignment x2;
  if (options.subroutine == LowDegreeSubroutine::kAlg1) {
    x2 = Alg1TriangleFreeBounded(instance, epsilon / 3, rng, options.alg1);
  } else {
    x2 = Alg3DpAdvRand(instance, epsilon / 3, options.alg3, rng);
  }
  const bool first = rng.Coin();
  if (trace) {
    trace->threshold = threshold;
    trace->noisy_degree = noisy;
    trace->high = high;
    trace->high_constraints = high_constraints;
    trace->x1 = x1;
    trace->x2 = x2;
    trace->chose_first = first;
  }
  return first ? x1 : x2;
}

Assignment AlgOddkUnbounded(const CspInstance& instance, double epsilon, RngStream& rng,
                            double constant, const AdvRandConfig& config) {
  RequireXorInstance(instance, "the odd-k algorithm");
  if (instance.k() % 2 == 0) {
    throw PreconditionError("the odd-k algorithm requires odd k; use alg2 for even k");
  }
  Alg2Options opts;
  opts.subroutine = LowDegreeSubroutine::kAlg3;
  opts.oddk_constant = constant;
  opts.alg3 = config;
  return Alg2PartitionKxor(instance, epsilon, opts, rng);
}

Assignment EmBaseline(const CspInstance& instance, double epsilon, RngStream& rng, int cap) {
  if (!(epsilon >= 0)) throw ArgumentError("epsilon must be >= 0");
  std::vector<std::size_t> all(instance.m());
  for (std::size_t l = 0; l < all.size(); ++l) all[l] = l;
  std::vector<int> vars = NonIsolated(instance, all);
  Assignment x = Assignment::Uniform(instance.n(), rng);
  EmOverAssignments(instance, vars, epsilon, 1.0, x, rng, cap);
  return x;
}

Assignment RandomBaseline(const CspInstance& instance, RngStream& rng) {
  return Assignment::Uniform(instance.n(), rng);
}

}  // namespace dpcsp
