#include "dpcsp/oracles.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <omp.h>

#include "dpcsp/enumeration.h"
#include "dpcsp/errors.h"
#include "dpcsp/generators.h"
#include "dpcsp/parallel.h"

namespace dpcsp {

namespace {

void CheckBruteForceCap(int n) {
  if (n > kBruteForceCap) throw ResourceError("brute force over 2^n assignments", n, kBruteForceCap);
}

LocalCsp WholeCsp(const CspInstance& instance) {
  std::vector<int> vars(instance.n());
  for (int i = 0; i < instance.n(); ++i) vars[i] = i;
  return RestrictCsp(instance, vars);
}

LocalGraph WholeGraph(const WeightedGraph& graph) {
  LocalGraph g;
  g.n = graph.n();
  g.edges = graph.edges();
  return g;
}

std::uint64_t CutMaskCount(int n) { return n == 0 ? 1 : (std::uint64_t{1} << (n - 1)); }

std::vector<int> OtherScopeVars(const CspInstance& instance, int j,
                                std::span<const std::size_t> active) {
  std::vector<int> vars;
  for (std::size_t l : active) {
    for (int v : instance.constraint(l).scope()) {
      if (v != j) vars.push_back(v);
    }
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

int TwiceQ(const Constraint& c, int j, const std::vector<std::int8_t>& fixed) {
  return static_cast<int>(std::lround(2.0 * DerivativeQ(c, j, fixed)));
}

struct WilsonInterval {
  double lo;
  double hi;
};

WilsonInterval Wilson(std::uint64_t hits, std::uint64_t n, double z) {
  double N = static_cast<double>(n);
  double p = static_cast<double>(hits) / N;
  double z2 = z * z;
  double denom = 1 + z2 / N;
  double center = (p + z2 / (2 * N)) / denom;
  double half = z * std::sqrt(p * (1 - p) / N + z2 / (4 * N * N)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::uint64_t CrossingCount(std::uint64_t s, std::uint64_t r, std::uint64_t full) {
  std::uint64_t sc = ~s & full;
  std::uint64_t rc = ~r & full;
  auto a = static_cast<std::uint64_t>(std::popcount(s & r));
  auto b = static_cast<std::uint64_t>(std::popcount(sc & rc));
  auto c = static_cast<std::uint64_t>(std::popcount(s & rc));
  auto e = static_cast<std::uint64_t>(std::popcount(sc & r));
  return a * b + c * e;
}

// Returns true and fills s/t if cut r violates the separation implication.
bool SeparationViolated(const PackingFamily& family, std::uint64_t r, std::size_t& s_out,
                        std::size_t& t_out) {
  const int n = family.n();
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  const std::uint64_t n2 = static_cast<std::uint64_t>(n) * n;
  const auto& sup = family.supports();
  for (std::size_t s = 0; s < sup.size(); ++s) {
    if (32 * CrossingCount(sup[s], r, full) <= 7 * n2) continue;
    for (std::size_t t = 0; t < sup.size(); ++t) {
      if (t == s) continue;
      if (16 * CrossingCount(sup[t], r, full) > 3 * n2) {
        s_out = s;
        t_out = t;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

OptResult BruteForceOpt(const CspInstance& instance) {
  CheckBruteForceCap(instance.n());
  LocalCsp local = WholeCsp(instance);
  auto best = Argmax(std::uint64_t{1} << instance.n(),
                     [&](std::uint64_t m) { return ScoreMask(local, m); });
  return {best.value, Assignment::FromMask(best.mask, instance.n())};
}

OptResult BruteForceOptSerial(const CspInstance& instance) {
  CheckBruteForceCap(instance.n());
  LocalCsp local = WholeCsp(instance);
  auto best = ArgmaxSerial(std::uint64_t{1} << instance.n(),
                           [&](std::uint64_t m) { return ScoreMask(local, m); });
  return {best.value, Assignment::FromMask(best.mask, instance.n())};
}

OptResult BruteForceOpt(const WeightedGraph& graph) {
  CheckBruteForceCap(graph.n());
  LocalGraph local = WholeGraph(graph);
  auto best = Argmax(CutMaskCount(graph.n()), [&](std::uint64_t m) { return ScoreMask(local, m); });
  return {best.value, Assignment::FromMask(best.mask, graph.n())};
}

OptResult BruteForceOptSerial(const WeightedGraph& graph) {
  CheckBruteForceCap(graph.n());
  LocalGraph local = WholeGraph(graph);
  auto best =
      ArgmaxSerial(CutMaskCount(graph.n()), [&](std::uint64_t m) { return ScoreMask(local, m); });
  return {best.value, Assignment::FromMask(best.mask, graph.n())};
}

SumDistribution SumDistributionByEnumeration(const CspInstance& instance, int j,
                                             std::span<const std::size_t> active, int cap) {
  std::vector<int> vars = OtherScopeVars(instance, j, active);
  if (static_cast<int>(vars.size()) > cap) {
    throw ResourceError("median enumeration over A_j", static_cast<long long>(vars.size()), cap);
  }
  std::map<int, std::uint64_t> counts;
  std::vector<std::int8_t> fixed(instance.n(), 0);
  const std::uint64_t total = std::uint64_t{1} << vars.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < vars.size(); ++i) fixed[vars[i]] = ((mask >> i) & 1) ? -1 : 1;
    int t = 0;
    for (std::size_t l : active) t += TwiceQ(instance.constraint(l), j, fixed);
    ++counts[t];
  }
  SumDistribution dist;
  for (auto [t, c] : counts) dist[t] = static_cast<double>(c) / static_cast<double>(total);
  return dist;
}

SumDistribution SumDistributionByConvolution(const CspInstance& instance, int j,
                                             std::span<const std::size_t> active) {
  SumDistribution dist{{0, 1.0}};
  std::vector<std::int8_t> fixed(instance.n(), 0);
  for (std::size_t l : active) {
    const Constraint& c = instance.constraint(l);
    std::vector<int> vars;
    for (int v : c.scope()) {
      if (v != j) vars.push_back(v);
    }
    std::map<int, double> step;
    const std::uint64_t total = std::uint64_t{1} << vars.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      for (std::size_t i = 0; i < vars.size(); ++i) fixed[vars[i]] = ((mask >> i) & 1) ? -1 : 1;
      step[TwiceQ(c, j, fixed)] += 1.0 / static_cast<double>(total);
    }
    for (int v : vars) fixed[v] = 0;
    SumDistribution next;
    for (auto [a, pa] : dist) {
      for (auto [b, pb] : step) next[a + b] += pa * pb;
    }
    dist = std::move(next);
  }
  return dist;
}

MedianTheta MedianFromDistribution(const SumDistribution& dist) {
  if (dist.empty()) throw ArgumentError("empty distribution");
  long double cdf = 0;
  for (auto it = dist.begin(); it != dist.end(); ++it) {
    cdf += it->second;
    if (cdf >= 0.5L || std::next(it) == dist.end()) {
      long double above = 1.0L - cdf;
      long double at = it->second;
      long double tie = at > 0 ? (0.5L - above) / at : 0.5L;
      tie = std::clamp(tie, 0.0L, 1.0L);
      return {it->first / 2.0, static_cast<double>(tie)};
    }
  }
  return {0.0, 0.5};
}

MedianTheta ExactMedianTheta(const CspInstance& instance, int j,
                             std::span<const std::size_t> active, ThetaMethod method) {
  if (active.empty()) return {0.0, 0.5};
  switch (method) {
    case ThetaMethod::kEnumerate:
      return MedianFromDistribution(SumDistributionByEnumeration(instance, j, active));
    case ThetaMethod::kConvolve:
      return MedianFromDistribution(SumDistributionByConvolution(instance, j, active));
    case ThetaMethod::kAuto:
      break;
  }
  if (OtherScopeVars(instance, j, active).size() <= 22) {
    return MedianFromDistribution(SumDistributionByEnumeration(instance, j, active));
  }
  return MedianFromDistribution(SumDistributionByConvolution(instance, j, active));
}

std::map<long long, double> AtThresholdPmf(int d, double epsilon) {
  if (d < 1) throw ArgumentError("degree must be >= 1");
  if (!(epsilon > 0)) throw ArgumentError("epsilon must be > 0");
  const long double p0 = std::tanh(static_cast<long double>(epsilon) / 2);
  const long double q = std::exp(-static_cast<long double>(epsilon));
  // Tail mass beyond K is 2 p0 q^(K+1) / (1 - q).
  long long K = 0;
  while (2 * p0 * std::pow(q, static_cast<long double>(K + 1)) / (1 - q) >= 1e-15L) ++K;
  std::vector<long double> z(2 * K + 1);
  long double zsum = 0;
  for (long long i = -K; i <= K; ++i) {
    z[i + K] = p0 * std::pow(q, static_cast<long double>(std::llabs(i)));
    zsum += z[i + K];
  }
  for (auto& v : z) v /= zsum;
  const int trials = d - 1;
  std::vector<long double> bin(trials + 1);
  for (int i = 0; i <= trials; ++i) {
    bin[i] = std::exp(std::lgamma(static_cast<long double>(trials + 1)) -
                      std::lgamma(static_cast<long double>(i + 1)) -
                      std::lgamma(static_cast<long double>(trials - i + 1)) -
                      trials * std::log(2.0L));
  }
  std::map<long long, double> pmf;
  for (long long y = -K; y <= trials + K; ++y) {
    long double s = 0;
    for (int i = 0; i <= trials; ++i) {
      long long zi = y - i;
      if (zi < -K || zi > K) continue;
      s += bin[i] * z[zi + K];
    }
    pmf[y] = static_cast<double>(s);
  }
  return pmf;
}

double AtThresholdProb(int d, double epsilon) {
  auto pmf = AtThresholdPmf(d, epsilon);
  return pmf.at(d / 2);  // ceil((d-1)/2) == floor(d/2)
}

std::vector<double> ExactEmDistribution(std::span<const double> scores, double budget,
                                        double sensitivity) {
  if (scores.empty()) throw ArgumentError("exponential mechanism needs a candidate");
  if (scores.size() > (std::size_t{1} << 20)) {
    throw ResourceError("exact EM candidate count", static_cast<long long>(scores.size()), 1 << 20);
  }
  if (!(sensitivity > 0)) throw ArgumentError("sensitivity must be > 0");
  if (!(budget >= 0)) throw ArgumentError("budget must be >= 0");
  const long double coeff = static_cast<long double>(budget) / (2.0L * sensitivity);
  long double best = -std::numeric_limits<long double>::infinity();
  for (double s : scores) {
    if (!std::isfinite(s)) throw DomainError("non-finite exponential mechanism score");
    best = std::max(best, coeff * s);
  }
  long double total = 0;
  for (double s : scores) total += std::exp(coeff * s - best);
  const long double lse = best + std::log(total);
  std::vector<double> p(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = static_cast<double>(std::exp(coeff * scores[i] - lse));
  }
  return p;
}

double ExactEmExpectedScore(std::span<const double> scores, double budget, double sensitivity) {
  auto p = ExactEmDistribution(scores, budget, sensitivity);
  long double e = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) e += static_cast<long double>(p[i]) * scores[i];
  return static_cast<double>(e);
}

AuditReport EmpiricalEpsilon(const AuditedMechanism& mechanism, std::uint64_t trials,
                             std::uint64_t seed, std::string coarsening, double confidence) {
  if (trials == 0) throw ArgumentError("audit needs at least one trial");
  if (!(confidence > 0 && confidence < 1)) throw ArgumentError("confidence must be in (0, 1)");
  auto run = [&](bool use_b, std::uint64_t s) {
    return RunTrials<std::uint32_t>(trials, s, [&](RngStream& rng, std::size_t) {
      std::uint32_t label = mechanism(use_b, rng);
      if (label >= 64) throw ArgumentError("audit bucket label must be < 64");
      return label;
    });
  };
  auto out_a = run(false, seed);
  auto out_b = run(true, SplitMix64(seed));
  std::vector<std::uint64_t> ca(64, 0), cb(64, 0);
  for (auto l : out_a) ++ca[l];
  for (auto l : out_b) ++cb[l];

  AuditReport rep;
  rep.trials = trials;
  rep.confidence = confidence;
  rep.coarsening = std::move(coarsening);
  int observed = 0;
  for (int i = 0; i < 64; ++i) observed += (ca[i] + cb[i]) > 0 ? 1 : 0;
  const double alpha = 1 - confidence;
  const double z = boost::math::quantile(boost::math::normal(),
                                         1 - alpha / (2.0 * 2.0 * std::max(observed, 1)));
  for (std::uint32_t i = 0; i < 64; ++i) {
    if (ca[i] + cb[i] == 0) continue;
    AuditBucket b;
    b.label = i;
    b.hits_a = ca[i];
    b.hits_b = cb[i];
    b.reliable = ca[i] >= 100 && cb[i] >= 100;
    auto wa = Wilson(ca[i], trials, z);
    auto wb = Wilson(cb[i], trials, z);
    if (ca[i] > 0 && cb[i] > 0) {
      b.point = std::abs(std::log(static_cast<double>(ca[i]) / static_cast<double>(cb[i])));
      double lo = std::log(wa.lo / wb.hi);
      double hi = std::log(wa.hi / wb.lo);
      b.lower = (lo <= 0 && hi >= 0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
      b.upper = std::max(std::abs(lo), std::abs(hi));
    } else {
      b.lower_bound_only = true;
      double lo = ca[i] > 0 ? std::log(wa.lo / wb.hi) : std::log(wb.lo / wa.hi);
      b.lower = std::max(0.0, lo);
      b.point = b.lower;
      b.upper = std::numeric_limits<double>::infinity();
    }
    rep.any_unreliable = rep.any_unreliable || !b.reliable;
    rep.epsilon_hat = std::max(rep.epsilon_hat, b.point);
    rep.ci_lo = std::max(rep.ci_lo, b.lower);
    rep.ci_hi = std::max(rep.ci_hi, b.upper);
    rep.buckets.push_back(b);
  }
  return rep;
}

AdversaryReport AdversarialSingleConstraint(const CspMechanism& mechanism, int n,
                                            const Predicate& predicate, double epsilon,
                                            std::uint64_t trials, std::uint64_t seed,
                                            std::vector<std::vector<std::int8_t>> patterns) {
  const int k = predicate.arity();
  if (k > n) throw ArgumentError("predicate arity exceeds n");
  if (trials == 0) throw ArgumentError("adversary needs at least one trial");
  if (patterns.empty()) {
    for (std::uint32_t m = 0; m < (1u << k); ++m) {
      std::vector<std::int8_t> c(k);
      for (int i = 0; i < k; ++i) c[i] = ((m >> i) & 1) ? -1 : 1;
      patterns.push_back(std::move(c));
    }
  }
  CspInstance empty(n, {});
  auto idx_of = [k](const Assignment& x) {
    std::uint32_t idx = 0;
    for (int i = 0; i < k; ++i) {
      if (x[i] > 0) idx |= 1u << i;
    }
    return idx;
  };
  auto empty_out = RunTrials<std::uint32_t>(
      trials, seed, [&](RngStream& rng, std::size_t) { return idx_of(mechanism(empty, rng)); });
  std::vector<std::uint64_t> hist(std::size_t{1} << k, 0);
  for (auto i : empty_out) ++hist[i];

  AdversaryReport rep;
  rep.trials = trials;
  rep.empty_mass = 2.0;
  for (const auto& c : patterns) {
    Predicate pc = predicate.WithNegation(c);
    std::uint64_t sat = 0;
    for (std::uint32_t i = 0; i < hist.size(); ++i) sat += pc.EvalIndex(i) ? hist[i] : 0;
    double mass = static_cast<double>(sat) / static_cast<double>(trials);
    if (mass < rep.empty_mass) {
      rep.empty_mass = mass;
      rep.pattern = c;
    }
  }
  std::vector<int> scope(k);
  std::iota(scope.begin(), scope.end(), 0);
  CspInstance phi = GenSingleConstraint(n, predicate, rep.pattern, scope);
  auto sat = RunTrials<double>(trials, SplitMix64(seed), [&](RngStream& rng, std::size_t) {
    return phi.constraint(0).Satisfied(mechanism(phi, rng)) ? 1.0 : 0.0;
  });
  auto stats = Summarize(sat);
  rep.satisfaction = stats.mean;
  rep.se = std::sqrt(std::max(stats.mean * (1 - stats.mean), 1e-300) / static_cast<double>(trials));
  rep.mu = Mu(predicate);
  rep.bound = 1 - std::exp(-epsilon) * (1 - rep.mu);
  rep.within_bound = rep.satisfaction <= rep.bound + 3 * rep.se;
  return rep;
}

PackingFamily::PackingFamily(int n, double epsilon, std::vector<std::uint64_t> supports)
    : n_(n), epsilon_(epsilon), supports_(std::move(supports)) {
  if (n < 2 || n % 2 != 0 || n > 64) throw ValidationError("packing family needs even n in [2, 64]");
  if (!(epsilon > 0)) throw ValidationError("packing family needs epsilon > 0");
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  for (std::size_t i = 0; i < supports_.size(); ++i) {
    if ((supports_[i] & ~full) != 0 || std::popcount(supports_[i]) != n / 2) {
      throw ValidationError("support " + std::to_string(i) + " does not have size n/2");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!IntersectionOk(n, supports_[i], supports_[j])) {
        throw ValidationError("supports " + std::to_string(j) + " and " + std::to_string(i) +
                              " violate n/8 < |S cap T| < 3n/8");
      }
    }
  }
}

bool PackingFamily::IntersectionOk(int n, std::uint64_t a, std::uint64_t b) {
  int inter = std::popcount(a & b);
  // n/8 < inter < 3n/8, compared as 8 * inter against n and 3n.
  return 8 * inter > n && 8 * inter < 3 * n;
}

WeightedGraph PackingFamily::Graph(std::size_t i) const {
  std::uint64_t s = supports_.at(i);
  std::vector<Edge> edges;
  const double w = weight();
  for (int u = 0; u < n_; ++u) {
    if (!((s >> u) & 1)) continue;
    for (int v = 0; v < n_; ++v) {
      if ((s >> v) & 1) continue;
      edges.push_back({u, v, w});
    }
  }
  return WeightedGraph(n_, std::move(edges));
}

SeparationResult VerifyPackingSeparation(const PackingFamily& family) {
  if (family.n() > 24) throw ResourceError("packing separation enumerates 2^(n-1) cuts", family.n(), 24);
  const long long total = 1LL << (family.n() - 1);
  const int threads = omp_get_max_threads();
  std::vector<SeparationResult> first(threads);
  std::vector<char> found(threads, 0);
#pragma omp parallel num_threads(threads)
  {
    int tid = omp_get_thread_num();
#pragma omp for schedule(static)
    for (long long r = 0; r < total; ++r) {
      if (found[tid]) continue;
      std::size_t s, t;
      if (SeparationViolated(family, static_cast<std::uint64_t>(r), s, t)) {
        found[tid] = 1;
        first[tid] = {false, static_cast<std::uint64_t>(r), s, t};
      }
    }
  }
  SeparationResult best;
  for (int i = 0; i < threads; ++i) {
    if (found[i] && (best.ok || first[i].cut < best.cut)) best = first[i];
  }
  return best;
}

SeparationResult VerifyPackingSeparationSerial(const PackingFamily& family) {
  if (family.n() > 24) throw ResourceError("packing separation enumerates 2^(n-1) cuts", family.n(), 24);
  const std::uint64_t total = std::uint64_t{1} << (family.n() - 1);
  for (std::uint64_t r = 0; r < total; ++r) {
    std::size_t s, t;
    if (SeparationViolated(family, r, s, t)) return {false, r, s, t};
  }
  return {};
}

}  // namespace dpcsp
