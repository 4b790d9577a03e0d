#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dpcsp/errors.h"
#include "dpcsp/generators.h"
#include "dpcsp/harness.h"
#include "dpcsp/instance_io.h"

namespace {

using namespace dpcsp;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitFailed = 2;
constexpr int kExitResource = 3;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    WriteTextFile(out, text);
  }
}

struct Common {
  std::string config;
  std::string algorithm;
  std::string instance;
  std::vector<double> eps;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  double alpha = 0;
  std::string out;
  bool timing = false;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
};

void AddCommon(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON experiment config");
  app->add_option("--algorithm", c.algorithm, "algorithm id");
  app->add_option("--instance", c.instance, "instance file (JSON or edge list)");
  app->add_option("--eps", c.eps, "epsilon value(s)")->delimiter(',');
  c.seed_opt = app->add_option("--seed", c.seed, "base seed");
  c.trials_opt = app->add_option("--trials", c.trials, "Monte Carlo trials");
  c.alpha_opt = app->add_option("--alpha", c.alpha, "alpha for alg6");
  app->add_option("--out", c.out, "output path (stdout if omitted)");
  app->add_flag("--timing", c.timing, "record wall_ms");
}

ExperimentConfig BuildConfig(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config.empty()) cfg = ParseConfigJson(ReadFile(c.config));
  if (!c.algorithm.empty()) cfg.algorithm = c.algorithm;
  if (!c.instance.empty()) {
    cfg.instance = c.instance;
    cfg.gen.reset();
    cfg.graph.reset();
  }
  if (!c.eps.empty()) cfg.eps = c.eps;
  if (c.seed_opt->count()) cfg.seed = c.seed;
  if (c.trials_opt->count()) cfg.trials = c.trials;
  if (c.alpha_opt->count()) cfg.alpha = c.alpha;
  if (!c.out.empty()) cfg.out = c.out;
  ValidateConfig(cfg);
  return cfg;
}

std::string ReportSummary(const ExperimentReport& r) {
  std::ostringstream os;
  os << "# " << r.algorithm << " eps=" << FormatDouble(r.eps) << " mean=" << FormatDouble(r.mean_val)
     << " se=" << FormatDouble(r.se) << " advantage=" << FormatDouble(r.advantage);
  if (r.se > 0) os << " (" << FormatDouble(r.advantage / r.se) << " se)";
  if (r.mean_p) os << " E[P]=" << FormatDouble(*r.mean_p) << " E[|P|]=" << FormatDouble(*r.mean_abs_p);
  os << '\n';
  return os.str();
}

int RunGen(const std::string& kind, const GenSpec& spec, const GraphSpec& gs, const std::string& out) {
  std::string text;
  if (kind == "kxor") {
    CspInstance inst = GenRandomKxor(spec);
    auto deg = Degrees(inst);
    int maxdeg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
    std::printf("kxor n=%d m=%zu k=%d distinct_scopes=%s triangle_free=%s max_degree=%d\n", inst.n(), inst.m(),
                inst.k(), inst.HasDistinctScopes() ? "yes" : "no", IsTriangleFree(inst) ? "yes" : "no", maxdeg);
    text = InstanceToJson(inst);
  } else {
    WeightedGraph g = [&] {
      if (kind == "even_cycle") return GenEvenCycle(gs.n);
      if (kind == "complete_bipartite") return GenCompleteBipartite(gs.a, gs.b);
      if (kind == "random_bipartite") return GenRandomBipartite(gs.a, gs.b, gs.m, gs.seed);
      throw ValidationError("unknown generator kind '" + kind + "'");
    }();
    auto deg = g.Degrees();
    int maxdeg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
    std::printf("%s n=%d m=%zu triangle_free=%s max_degree=%d\n", kind.c_str(), g.n(), g.m(),
                IsTriangleFree(g) ? "yes" : "no", maxdeg);
    text = GraphToJson(g);
  }
  if (out.empty()) {
    std::cout << text;
  } else {
    WriteTextFile(out, text);
  }
  return kExitOk;
}

int Dispatch(int argc, char** argv) {
  CLI::App app{"dpcsp: private Max-CSP / Max-Cut experiments"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance");
  std::string gen_kind = "kxor";
  GenSpec spec;
  GraphSpec gs;
  int max_degree = -1;
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "kxor | even_cycle | complete_bipartite | random_bipartite");
  gen->add_option("--n", spec.n, "variables / cycle length");
  gen->add_option("--m", spec.m, "constraints / edges");
  gen->add_option("--k", spec.k, "arity");
  gen->add_option("--a", gs.a, "left part size");
  gen->add_option("--b", gs.b, "right part size");
  gen->add_flag("--triangle-free", spec.triangle_free, "reject hyper-triangles");
  gen->add_option("--max-degree", max_degree, "degree cap");
  gen->add_option("--seed", spec.seed, "seed");
  gen->add_option("--out", gen_out, "output path (stdout if omitted)");

  // solve
  auto* solve = app.add_subcommand("solve", "run one algorithm once");
  Common solve_c;
  AddCommon(solve, solve_c);

  auto* ratio = app.add_subcommand("ratio", "Monte Carlo value / ratio estimate");
  Common ratio_c;
  AddCommon(ratio, ratio_c);

  auto* sweep = app.add_subcommand("sweep", "epsilon sweep with trend summary");
  Common sweep_c;
  AddCommon(sweep, sweep_c);

  auto* audit = app.add_subcommand("audit", "empirical privacy audit");
  std::string mech;
  std::string inst_a, inst_b, audit_out, audit_config;
  double audit_eps = 1.0, confidence = 0.95;
  std::uint64_t audit_trials = 100000, audit_seed = 0;
  audit->add_option("--mechanism", mech, "mechanism id")->required();
  audit->add_option("--eps", audit_eps, "configured epsilon");
  audit->add_option("--trials", audit_trials, "trials per input");
  audit->add_option("--seed", audit_seed, "seed");
  audit->add_option("--instance", inst_a, "input A (default: built-in pair)");
  audit->add_option("--instance-b", inst_b, "input B (default: A minus its last constraint)");
  audit->add_option("--confidence", confidence, "joint confidence level");
  audit->add_option("--config", audit_config, "JSON config for algorithm knobs");
  audit->add_option("--out", audit_out, "CSV output path");

  auto* hard = app.add_subcommand("verify-hardness", "packing family separation check");
  int hn = 8;
  double heps = 0.5;
  std::size_t hsize = 3;
  std::uint64_t hseed = 0;
  hard->add_option("--n", hn, "vertices (even, 8..24)");
  hard->add_option("--eps", heps, "epsilon");
  hard->add_option("--size", hsize, "family size");
  hard->add_option("--seed", hseed, "seed");

  auto* compare = app.add_subcommand("compare", "compare two CSV reports");
  std::string ca, cb;
  compare->add_option("first", ca)->required();
  compare->add_option("second", cb)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  if (*gen) {
    if (max_degree >= 0) spec.max_degree = max_degree;
    gs.n = spec.n;
    gs.m = spec.m;
    gs.seed = spec.seed;
    return RunGen(gen_kind, spec, gs, gen_out);
  }
  if (*solve) {
    ExperimentConfig cfg = BuildConfig(solve_c);
    Problem p = LoadProblem(cfg);
    const double eps = cfg.eps.front();
    CheckCompatible(cfg, p, eps);
    RngStream rng(cfg.seed, 0);
    Assignment x = RunAlgorithm(cfg, p, eps, rng);
    std::ostringstream os;
    os << "{\"algorithm\":\"" << cfg.algorithm << "\",\"eps\":" << FormatDouble(eps)
       << ",\"value\":" << FormatDouble(ProblemValue(cfg, p, x)) << ",\"x\":[";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << "]}\n";
    Emit(cfg.out, os.str());
    return kExitOk;
  }
  if (*ratio) {
    ExperimentConfig cfg = BuildConfig(ratio_c);
    ExperimentReport r = EstimateRatio(cfg, ratio_c.timing);
    Emit(cfg.out, CsvHeader() + CsvRow(r));
    std::cerr << ReportSummary(r);
    return kExitOk;
  }
  if (*sweep) {
    ExperimentConfig cfg = BuildConfig(sweep_c);
    SweepResult s = Sweep(cfg, sweep_c.timing);
    Emit(cfg.out, SweepCsv(s));
    for (const auto& r : s.rows) {
      if (!r.failed) std::cerr << ReportSummary(r);
    }
    return kExitOk;
  }
  if (*audit) {
    AuditSpec as;
    as.mechanism = mech;
    as.epsilon = audit_eps;
    as.trials = audit_trials;
    as.seed = audit_seed;
    as.confidence = confidence;
    if (!audit_config.empty()) as.options = ParseConfigJson(ReadFile(audit_config));
    auto load = [](const std::string& path) {
      InstanceDocument d = LoadInstanceFile(path);
      Problem p;
      p.csp = d.csp;
      p.graph = d.graph;
      return p;
    };
    if (!inst_a.empty()) as.a = load(inst_a);
    if (!inst_b.empty()) {
      if (inst_a.empty()) throw ValidationError("--instance-b needs --instance");
      as.b = load(inst_b);
    }
    AuditReport r = RunAudit(as);
    Emit(audit_out, AuditCsvHeader() + AuditCsvRow(r));
    for (const auto& b : r.buckets) {
      std::fprintf(stderr, "# bucket %u a=%llu b=%llu ratio=%.6g [%.6g, %.6g]%s%s\n", b.label,
                   static_cast<unsigned long long>(b.hits_a), static_cast<unsigned long long>(b.hits_b), b.point,
                   b.lower, b.upper, b.lower_bound_only ? " lower-bound-only" : "",
                   b.reliable ? "" : " unreliable");
    }
    if (r.ci_lo > r.epsilon) {
      std::fprintf(stderr, "privacy violation: ci_lo %.6g > eps %.6g\n", r.ci_lo, r.epsilon);
      return kExitFailed;
    }
    return kExitOk;
  }
  if (*hard) {
    HardnessReport r = VerifyHardness(hn, heps, hsize, hseed);
    std::printf("n=%d eps=%g requested=%zu generated=%zu attempts=%llu\n", r.n, r.epsilon, r.requested,
                r.generated, static_cast<unsigned long long>(r.attempts));
    for (std::size_t i = 0; i < r.opt.size(); ++i) {
      std::printf("graph %zu: OPT=%.17g expected nd/2=%.17g\n", i, r.opt[i], r.expected_opt);
    }
    if (r.shortfall) {
      std::printf("FAIL: generation shortfall (%zu of %zu supports)\n", r.generated, r.requested);
      return kExitFailed;
    }
    if (!r.separation.ok) {
      std::printf("FAIL: separation violated at cut=%llu S=%zu T=%zu\n",
                  static_cast<unsigned long long>(r.separation.cut), r.separation.s, r.separation.t);
      return kExitFailed;
    }
    if (!r.opt_ok) {
      std::printf("FAIL: some OPT(G_S) differs from nd/2\n");
      return kExitFailed;
    }
    std::printf("PASS\n");
    return kExitOk;
  }
  if (*compare) {
    CompareResult r = CompareCsv(ReadFile(ca), ReadFile(cb));
    for (const auto& l : r.lines) std::printf("%s\n", l.c_str());
    std::printf("%s\n", r.message.c_str());
    return r.ok ? kExitOk : kExitValidation;
  }
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Dispatch(argc, argv);
  } catch (const dpcsp::ResourceError& e) {
    std::fprintf(stderr, "resource cap: %s\n", e.what());
    return kExitResource;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
}
