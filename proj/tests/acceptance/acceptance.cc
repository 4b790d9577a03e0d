// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dpcsp/algo_csp.h"
#include "dpcsp/algo_maxcut.h"
#include "dpcsp/csp.h"
#include "dpcsp/frozen_constants.h"
#include "dpcsp/generators.h"
#include "dpcsp/harness.h"
#include "dpcsp/mechanisms.h"
#include "dpcsp/oracles.h"
#include "dpcsp/parallel.h"
#include "dpcsp/rng.h"

namespace dpcsp {
namespace {

// Collects sub-check results for one criterion.
class Checks {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) failed_.push_back(what);
  }
  bool ok() const { return failed_.empty(); }
  std::string Failures() const {
    std::string s;
    for (std::size_t i = 0; i < failed_.size() && i < 4; ++i) s += (i ? "; " : "") + failed_[i];
    if (failed_.size() > 4) s += "; +" + std::to_string(failed_.size() - 4) + " more";
    return s;
  }
  std::ostringstream note;

 private:
  std::vector<std::string> failed_;
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

// 1. Mechanism exactness.
void MechanismExactness(Checks& c) {
  for (double eps : {0.1, 1.0, 3.0}) {
    const double want = std::exp(eps) / (1 + std::exp(eps));
    c.Expect(std::abs(RrKeepProbability(eps) - want) <= 1e-15, Fmt("RR keep at eps=%g", eps));
    const std::size_t n = 200000;
    auto kept = RunTrials<double>(n, 101, [&](RngStream& rng, std::size_t) {
      return RandomizedResponse(1, eps, rng) == 1 ? 1.0 : 0.0;
    });
    MeanStats s = Summarize(kept);
    c.Expect(std::abs(s.mean - want) <= 3 * std::sqrt(want * (1 - want) / n),
             Fmt("RR empirical keep %.5f vs %.5f at eps=%g", s.mean, want, eps));
  }
  for (double eps : {0.5, 1.0}) {
    const std::size_t n = 1000000;
    auto draws = RunTrials<long long>(n, 102, [&](RngStream& rng, std::size_t) {
      return SampleDiscreteLaplace(eps, rng);
    });
    std::map<long long, double> count;
    for (long long v : draws) count[v] += 1;
    for (long long x = -3; x <= 3; ++x) {
      const double p = (std::exp(eps) - 1) / (std::exp(eps) + 1) * std::exp(-eps * std::abs(x));
      c.Expect(std::abs(DiscreteLaplaceMass(x, eps) - p) <= 1e-15, Fmt("DLap mass formula x=%g eps=%g", x, eps));
      const double sigma = std::sqrt(p * (1 - p) / n);
      c.Expect(std::abs(count[x] / n - p) <= 3 * sigma,
               Fmt("DLap empirical mass x=%g eps=%g off by %.2f sigma", x, eps, (count[x] / n - p) / sigma));
    }
  }
  RngStream gen(103, 0);
  double worst = 0;
  for (int rep = 0; rep < 3; ++rep) {
    const std::size_t size = 2 + gen.Below(7);
    std::vector<double> scores(size);
    for (double& v : scores) v = 6 * gen.Uniform();
    const double budget = 0.5 + gen.Uniform();
    auto exact = ExactEmDistribution(scores, budget, 1.0);
    const std::size_t n = 100000;
    auto picks = RunTrials<std::size_t>(n, 104 + rep, [&](RngStream& rng, std::size_t) {
      return ExponentialMechanismIndex(scores, budget, 1.0, rng);
    });
    std::vector<double> freq(size);
    for (std::size_t i : picks) freq[i] += 1.0 / n;
    double tv = 0;
    for (std::size_t i = 0; i < size; ++i) tv += std::abs(freq[i] - exact[i]) / 2;
    worst = std::max(worst, tv);
    c.Expect(tv <= 0.01, Fmt("EM TV %.4f on %g candidates", tv, size));
  }
  c.note << "max EM TV " << worst;
}

// 2. Exponential mechanism utility.
void EmUtility(Checks& c) {
  RngStream rng(201, 0);
  double slack = INFINITY;
  for (int r = 0; r < 100; ++r) {
    const std::size_t size = 1 + rng.Below(256);
    const double eps = 0.05 + 3 * rng.Uniform();
    const double sens = 0.5 + 2 * rng.Uniform();
    std::vector<double> s(size);
    for (double& v : s) v = 100 * rng.Uniform() - 50;
    const double opt = *std::max_element(s.begin(), s.end());
    const double bound = opt - (2 * sens / eps) * (std::log(static_cast<double>(size)) + 1);
    const double expected = ExactEmExpectedScore(s, eps, sens);
    slack = std::min(slack, expected - bound);
    c.Expect(expected >= bound, Fmt("vector %g: E = %.6g < bound %.6g", r, expected, bound));
  }
  c.note << "min slack " << slack;
}

// 3. At-threshold lower bound with the frozen constant.
void AtThreshold(Checks& c) {
  double worst = INFINITY;
  for (double eps : {0.1, 0.5, 1.0}) {
    for (int d = 1; d <= 50; ++d) {
      const double p = AtThresholdProb(d, eps);
      worst = std::min(worst, p * std::sqrt(d + 1 / (eps * eps)));
      c.Expect(p >= kAtThresholdConstant / std::sqrt(d + 1 / (eps * eps)), Fmt("bound at d=%g eps=%g", d, eps));
      auto pmf = AtThresholdPmf(d, eps);
      double peak = 0;
      for (auto [y, q] : pmf) {
        peak = std::max(peak, q);
        auto it = pmf.find(d - 1 - y);
        c.Expect(it != pmf.end() && std::abs(it->second - q) <= 1e-15, Fmt("symmetry at d=%g eps=%g", d, eps));
      }
      c.Expect(std::abs(peak - p) <= 1e-15, Fmt("threshold atom not maximal at d=%g eps=%g", d, eps));
    }
  }
  c.note << "c = " << kAtThresholdConstant << ", scan min " << worst;
}

CspInstance EvenCycleXor(int n) {
  std::vector<Constraint> cs;
  for (int i = 0; i < n; ++i) cs.push_back(Constraint::Xor({i, (i + 1) % n}, i % 3 == 0 ? 1 : -1));
  return CspInstance::Kxor(n, 2, cs);
}

// 4. Alg. 1 marginal uniformity and positive advantage.
void Alg1Uniformity(Checks& c) {
  const int n = 20;
  CspInstance inst = EvenCycleXor(n);
  auto xs = RunTrials<Assignment>(100000, 401, [&](RngStream& rng, std::size_t) {
    return Alg1TriangleFreeBounded(inst, 1.0, rng);
  });
  double worst_z = 0;
  for (int j = 0; j < n; ++j) {
    std::vector<double> v;
    v.reserve(xs.size());
    for (const auto& x : xs) v.push_back(x[j]);
    MeanStats s = Summarize(v);
    worst_z = std::max(worst_z, std::abs(s.mean) / s.se);
    c.Expect(std::abs(s.mean) <= 3 * s.se, Fmt("coordinate %g mean %.4f", j, s.mean));
  }
  std::vector<double> adv;
  adv.reserve(xs.size());
  for (const auto& x : xs) adv.push_back(AssociatedAdvantage(inst, x));
  MeanStats a = Summarize(adv);
  c.Expect(a.mean >= 3 * a.se, Fmt("E[P] = %.5f, se %.5f", a.mean, a.se));
  c.note << "max |mean|/se " << worst_z << ", E[P]/se " << a.mean / a.se;
}

ExperimentConfig GraphConfig(GraphSpec g, std::vector<double> eps, std::uint64_t trials, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.algorithm = "dp_shearer";
  cfg.graph = std::move(g);
  cfg.eps = std::move(eps);
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

// 5. dp_shearer advantage and its trend in epsilon.
void DpShearerAdvantage(Checks& c) {
  const std::vector<std::pair<std::string, GraphSpec>> graphs = {
      {"C50", GraphSpec{.type = "even_cycle", .n = 50}},
      {"K5,5", GraphSpec{.type = "complete_bipartite", .a = 5, .b = 5}}};
  for (const auto& [name, g] : graphs) {
    for (double eps : {0.5, 1.0}) {
      ExperimentReport r = EstimateRatio(GraphConfig(g, {eps}, 100000, 501));
      const double freq = r.mean_val / static_cast<double>(r.m);
      const double sigma = r.se / static_cast<double>(r.m);
      c.note << name << "@" << eps << ": " << Fmt("%.4f (%.1f sigma) ", freq, (freq - 0.5) / sigma);
      c.Expect(freq >= 0.5 + 3 * sigma, name + Fmt(" eps=%g edge frequency %.5f", eps, freq));
    }
    SweepResult s = Sweep(GraphConfig(g, {0.25, 0.5, 1.0}, 100000, 502));
    const double rho = s.spearman.value_or(-2);
    c.note << name << " spearman " << rho << "  ";
    c.Expect(rho > 0, name + Fmt(" spearman %g", rho));
  }
}

// 6. Empirical privacy audits.
void PrivacyAudits(Checks& c) {
  for (double eps : {0.5, 1.0, 2.0}) {
    const double keep = RrKeepProbability(eps);
    c.Expect(std::abs(std::log(keep / (1 - keep)) - eps) <= 1e-12, Fmt("RR exact log-ratio at eps=%g", eps));
  }
  for (const char* mech : {"randomized_response", "dp_shearer", "alg1", "em_over_assignments"}) {
    AuditSpec spec;
    spec.mechanism = mech;
    spec.epsilon = 1.0;
    spec.trials = 1000000;
    spec.seed = 601;
    AuditReport r = RunAudit(spec);
    c.note << mech << " [" << Fmt("%.3f, %.3f", r.ci_lo, r.ci_hi) << "]  ";
    c.Expect(r.ci_lo <= r.epsilon, std::string(mech) + Fmt(" ci_lo %.4f > eps", r.ci_lo));
  }
}

// 7. Single-constraint consistency bound.
void SingleConstraintBound(Checks& c) {
  const double eps = 0.5;
  CspMechanism em = [eps](const CspInstance& inst, RngStream& rng) { return EmBaseline(inst, eps, rng); };
  CspMechanism shearer = [eps](const CspInstance& inst, RngStream& rng) {
    WeightedGraph g = inst.m() == 0 ? WeightedGraph(inst.n(), {}) : ToGraph(inst);
    return DpShearer(g, eps, rng);
  };
  AdversaryReport a = AdversarialSingleConstraint(em, 4, Predicate::Parity(2), eps, 200000, 701);
  // dp_shearer only runs on cut edges, so the adversary picks among those.
  AdversaryReport b =
      AdversarialSingleConstraint(shearer, 4, Predicate::Parity(2), eps, 200000, 702, {{1, -1}, {-1, 1}});
  for (const auto& [name, r] : {std::pair{"em_baseline", a}, std::pair{"dp_shearer", b}}) {
    c.Expect(std::abs(r.bound - (1 - std::exp(-eps) * 0.5)) <= 1e-15, std::string(name) + " bound formula");
    c.Expect(r.satisfaction <= r.bound + 3 * r.se, std::string(name) + Fmt(" satisfaction %.4f > bound %.4f",
                                                                            r.satisfaction, r.bound));
    c.note << name << Fmt(" %.4f <= %.4f  ", r.satisfaction, r.bound);
  }
}

// 8. Packing family artifacts.
void HardnessArtifacts(Checks& c) {
  for (auto [n, size] : {std::pair{8, std::size_t{6}}, std::pair{16, std::size_t{16}}}) {
    HardnessReport r = VerifyHardness(n, 0.5, size, 801);
    c.Expect(!r.shortfall, Fmt("n=%g generated %g of %g", n, r.generated, size));
    c.Expect(r.separation.ok, Fmt("n=%g separation violated", n));
    c.Expect(r.opt_ok, Fmt("n=%g OPT differs from nd/2", n));
    for (double o : r.opt) c.Expect(o == r.expected_opt, Fmt("n=%g OPT %.17g", n, o));
    c.Expect(r.pass, Fmt("n=%g verify-hardness failed", n));
    c.note << "n=" << n << " family " << r.generated << "  ";
  }
}

// 9. Alg. 6 closed forms and matching validity.
void Alg6ClosedForms(Checks& c) {
  const double p = std::exp(2.5 / 4) / (1 + std::exp(2.5 / 4));
  c.Expect(std::abs(MatchingEdgeCutProbability() - p) <= 1e-12, "matching edge cut probability");
  c.Expect(p > 0.65, "closed form above 0.65");
  WeightedGraph g = GenRandomBipartite(40, 40, 300, 901);
  for (double eps : {0.1, 0.05, 0.01}) {
    Alg6Trace tr;
    RngStream rng(902, 0);
    DpMaxCutGeneral(g, eps, 0.5, rng, {}, &tr);
    c.Expect(tr.ledger.TotalFraction() == std::pair<long long, long long>{1, 1}, Fmt("ledger fraction at eps=%g", eps));
    c.Expect(tr.ledger.Total() == eps, Fmt("ledger total at eps=%g", eps));
  }
  RngStream gen(903, 0);
  std::size_t bad = 0, matched = 0;
  for (int t = 0; t < 10000; ++t) {
    const int n = 2 + static_cast<int>(gen.Below(30));
    const int m = static_cast<int>(gen.Below(3 * n));
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> present;
    for (int e = 0; e < m; ++e) {
      int u = static_cast<int>(gen.Below(n)), v = static_cast<int>(gen.Below(n));
      if (u == v) continue;
      edges.emplace_back(u, v);
      present.insert({std::min(u, v), std::max(u, v)});
    }
    WeightedGraph graph = WeightedGraph::Unweighted(n, edges);
    RngStream rng(904, t);
    MatchingState ms = MutualChoiceMatching(graph, rng);
    std::vector<int> used(n, 0);
    for (auto [u, v] : ms.edges) {
      ++used[u];
      ++used[v];
      if (!present.count({std::min(u, v), std::max(u, v)})) ++bad;
    }
    for (int u : used) bad += u > 1;
    matched += ms.edges.size();
  }
  c.Expect(bad == 0, Fmt("%g overlapping or foreign matching edges", static_cast<double>(bad)));
  c.note << "matched edges over 10^4 graphs " << matched;
}

// 10. Alg. 3 boost marginals and Lambda sensitivity.
void Alg3Marginals(Checks& c) {
  // Star (0,1), (0,2) plus two far constraints: m = 4, so eps' = eps and
  // Lambda_0 ranges over {-1, -1/2, 0, 1/2, 1}.
  CspInstance inst = CspInstance::Kxor(7, 2, {Constraint::Xor({0, 1}, 1), Constraint::Xor({0, 2}, -1),
                                              Constraint::Xor({3, 4}, 1), Constraint::Xor({5, 6}, 1)});
  AdvRandConfig cfg;
  cfg.fixed_s = 1;
  for (double eps : {0.5, 2.0}) {
    std::map<double, std::vector<double>> by_lambda;
    RngStream rng(1001, static_cast<std::uint64_t>(eps * 10));
    while (true) {
      AdvRandTrace tr;
      Alg3DpAdvRand(inst, eps, cfg, rng, &tr);
      c.Expect(tr.eps_prime == eps, "eps' on the star instance");
      if (tr.in_u[0]) {
        auto& v = by_lambda[tr.lambda[0]];
        if (v.size() < 100000) v.push_back(tr.pre_flip[0]);
      }
      bool done = by_lambda.size() == 5;
      for (auto& [l, v] : by_lambda) done = done && v.size() == 100000;
      if (done) break;
    }
    for (auto& [lambda, xs] : by_lambda) {
      MeanStats s = Summarize(xs);
      const double want = std::tanh(eps * lambda);
      c.Expect(std::abs(s.mean - want) <= 3 * s.se, Fmt("eps'=%g Lambda=%g mean %.4f", eps, lambda, s.mean));
    }
  }
  // Replacing one constraint moves every integer sum by at most 2, so each
  // Lambda_j moves by at most 2/sqrt(m).
  RngStream gen(1002, 0);
  double worst = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const int k = 2 + static_cast<int>(gen.Below(3));
    CspInstance a = GenRandomKxor({.n = 12, .m = 15, .k = k, .seed = 1003 + static_cast<std::uint64_t>(rep)});
    std::vector<Constraint> cs = a.constraints();
    const std::size_t drop = gen.Below(cs.size());
    std::vector<int> scope;
    while (static_cast<int>(scope.size()) < k) {
      int v = static_cast<int>(gen.Below(12));
      if (std::find(scope.begin(), scope.end(), v) == scope.end()) scope.push_back(v);
    }
    cs[drop] = Constraint::Xor(scope, gen.Sign());
    CspInstance b = CspInstance::Kxor(12, k, cs);
    std::vector<bool> in_u(12);
    Assignment y(12);
    for (int v = 0; v < 12; ++v) {
      in_u[v] = gen.Coin();
      y.Set(v, gen.Sign());
    }
    auto sa = ActiveSignSums(a, in_u, y);
    auto sb = ActiveSignSums(b, in_u, y);
    for (int j = 0; j < 12; ++j) {
      c.Expect(std::abs(sa[j] - sb[j]) <= 2, Fmt("integer sum moved by %g", std::abs(sa[j] - sb[j])));
      if (!in_u[j]) continue;
      const double diff = std::abs(LambdaJ(a, j, in_u, y) - LambdaJ(b, j, in_u, y));
      worst = std::max(worst, diff * std::sqrt(15.0));
      c.Expect(diff <= 2 / std::sqrt(15.0) + 1e-15, Fmt("Lambda moved by %.4f", diff));
    }
  }
  c.note << "max sqrt(m) * |dLambda| " << worst;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<void(Checks&)> run;
};

}  // namespace
}  // namespace dpcsp

int main() {
  using dpcsp::Checks;
  const std::vector<dpcsp::Criterion> criteria = {
      {1, "mechanism exactness", 30, dpcsp::MechanismExactness},
      {2, "exponential mechanism utility", 5, dpcsp::EmUtility},
      {3, "at-threshold lower bound", 10, dpcsp::AtThreshold},
      {4, "alg1 uniformity", 120, dpcsp::Alg1Uniformity},
      {5, "dp_shearer advantage", 180, dpcsp::DpShearerAdvantage},
      {6, "privacy audits", 300, dpcsp::PrivacyAudits},
      {7, "single-constraint bound", 60, dpcsp::SingleConstraintBound},
      {8, "hardness artifacts", 120, dpcsp::HardnessArtifacts},
      {9, "alg6 closed forms", 60, dpcsp::Alg6ClosedForms},
      {10, "alg3 marginals", 60, dpcsp::Alg3Marginals},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    Checks c;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.Expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.Expect(secs < cr.limit_s, dpcsp::Fmt("runtime %.1f s over %g s", secs, cr.limit_s));
    std::printf("%s criterion %d (%s) %.1fs: %s\n", c.ok() ? "PASS" : "FAIL", cr.id, cr.name, secs,
                c.ok() ? c.note.str().c_str() : c.Failures().c_str());
    std::fflush(stdout);
    failures += !c.ok();
  }
  return failures == 0 ? 0 : 1;
}
