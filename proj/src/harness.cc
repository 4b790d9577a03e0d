#include "dpcsp/harness.h"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "dpcsp/algo_maxcut.h"
#include "dpcsp/errors.h"
#include "dpcsp/instance_io.h"
#include "dpcsp/mechanisms.h"
#include "dpcsp/parallel.h"

namespace dpcsp {

namespace {

using nlohmann::json;

const char* SubroutineName(LowDegreeSubroutine s) {
  return s == LowDegreeSubroutine::kAlg1 ? "alg1" : "alg3";
}

void RequireKeys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown field '" + key + "' in " + where);
  }
}

template <class T>
T Get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("field '" + key + "' in " + where + " has the wrong type");
  }
}

std::uint64_t GetU64(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
    throw ValidationError("field '" + key + "' in " + where + " must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

int GetInt(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number_integer()) throw ValidationError("field '" + key + "' in " + where + " must be an integer");
  return j.at(key).get<int>();
}

double GetNumber(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number()) throw ValidationError("field '" + key + "' in " + where + " must be a number");
  return j.at(key).get<double>();
}

std::vector<int> AllVars(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

int NonIsolatedCount(const CspInstance& instance) {
  std::vector<bool> seen(instance.n(), false);
  for (const auto& c : instance.constraints()) {
    for (int v : c.scope()) seen[v] = true;
  }
  return static_cast<int>(std::count(seen.begin(), seen.end(), true));
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

const std::vector<std::string>& AlgorithmNames() {
  static const std::vector<std::string> names = {"alg1",    "alg2",       "alg3", "alg_oddk",
                                                 "shearer", "dp_shearer", "alg5", "alg6",
                                                 "em_baseline", "random_baseline"};
  return names;
}

bool IsGraphAlgorithm(const std::string& algorithm) {
  return algorithm == "shearer" || algorithm == "dp_shearer" || algorithm == "alg5" || algorithm == "alg6";
}

ExperimentConfig ParseConfigJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  const std::string where = "config";
  RequireKeys(j,
              {"algorithm", "instance", "gen", "graph", "eps", "alpha", "trials", "seed", "out",
               "global_sign", "pair_budget_fraction", "oddk_constant", "subroutine", "threshold",
               "opt_cap"},
              where);
  ExperimentConfig c;
  if (j.contains("algorithm")) c.algorithm = Get<std::string>(j, "algorithm", where);
  if (j.contains("instance")) c.instance = Get<std::string>(j, "instance", where);
  if (j.contains("gen")) {
    const json& g = j.at("gen");
    RequireKeys(g, {"n", "m", "k", "seed", "triangle_free", "max_degree"}, "gen");
    GenSpec s;
    if (g.contains("n")) s.n = GetInt(g, "n", "gen");
    if (g.contains("m")) s.m = GetInt(g, "m", "gen");
    if (g.contains("k")) s.k = GetInt(g, "k", "gen");
    if (g.contains("seed")) s.seed = GetU64(g, "seed", "gen");
    if (g.contains("triangle_free")) s.triangle_free = Get<bool>(g, "triangle_free", "gen");
    if (g.contains("max_degree") && !g.at("max_degree").is_null()) s.max_degree = GetInt(g, "max_degree", "gen");
    c.gen = s;
  }
  if (j.contains("graph")) {
    const json& g = j.at("graph");
    RequireKeys(g, {"type", "n", "a", "b", "m", "seed"}, "graph");
    GraphSpec s;
    s.type = Get<std::string>(g, "type", "graph");
    if (g.contains("n")) s.n = GetInt(g, "n", "graph");
    if (g.contains("a")) s.a = GetInt(g, "a", "graph");
    if (g.contains("b")) s.b = GetInt(g, "b", "graph");
    if (g.contains("m")) s.m = GetInt(g, "m", "graph");
    if (g.contains("seed")) s.seed = GetU64(g, "seed", "graph");
    c.graph = s;
  }
  if (j.contains("eps")) {
    const json& e = j.at("eps");
    if (e.is_number()) {
      c.eps = {e.get<double>()};
    } else if (e.is_array()) {
      for (const auto& v : e) {
        if (!v.is_number()) throw ValidationError("eps entries must be numbers");
        c.eps.push_back(v.get<double>());
      }
    } else {
      throw ValidationError("eps must be a number or a list of numbers");
    }
  }
  if (j.contains("alpha")) c.alpha = GetNumber(j, "alpha", where);
  if (j.contains("trials")) c.trials = GetU64(j, "trials", where);
  if (j.contains("seed")) c.seed = GetU64(j, "seed", where);
  if (j.contains("out")) c.out = Get<std::string>(j, "out", where);
  if (j.contains("global_sign")) {
    try {
      c.global_sign = ParseGlobalSign(Get<std::string>(j, "global_sign", where));
    } catch (const ArgumentError& e) {
      throw ValidationError(e.what());
    }
  }
  if (j.contains("pair_budget_fraction")) c.pair_budget_fraction = GetNumber(j, "pair_budget_fraction", where);
  if (j.contains("oddk_constant")) c.oddk_constant = GetNumber(j, "oddk_constant", where);
  if (j.contains("subroutine")) {
    std::string s = Get<std::string>(j, "subroutine", where);
    if (s == "alg1") {
      c.subroutine = LowDegreeSubroutine::kAlg1;
    } else if (s == "alg3") {
      c.subroutine = LowDegreeSubroutine::kAlg3;
    } else {
      throw ValidationError("subroutine must be alg1 or alg3");
    }
  }
  if (j.contains("threshold") && !j.at("threshold").is_null()) c.threshold = GetNumber(j, "threshold", where);
  if (j.contains("opt_cap")) c.opt_cap = GetInt(j, "opt_cap", where);
  return c;
}

std::string CanonicalConfigJson(const ExperimentConfig& c) {
  json j;
  j["algorithm"] = c.algorithm;
  if (c.instance) j["instance"] = *c.instance;
  if (c.gen) {
    j["gen"] = {{"n", c.gen->n},
                {"m", c.gen->m},
                {"k", c.gen->k},
                {"seed", c.gen->seed},
                {"triangle_free", c.gen->triangle_free}};
    if (c.gen->max_degree) j["gen"]["max_degree"] = *c.gen->max_degree;
  }
  if (c.graph) {
    j["graph"] = {{"type", c.graph->type}, {"n", c.graph->n}, {"a", c.graph->a},
                  {"b", c.graph->b},       {"m", c.graph->m}, {"seed", c.graph->seed}};
  }
  j["eps"] = c.eps;
  j["alpha"] = c.alpha;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["global_sign"] = GlobalSignName(c.global_sign);
  j["pair_budget_fraction"] = c.pair_budget_fraction;
  j["oddk_constant"] = c.oddk_constant;
  j["subroutine"] = SubroutineName(c.subroutine);
  if (c.threshold) j["threshold"] = *c.threshold;
  j["opt_cap"] = c.opt_cap;
  return j.dump();
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ConfigHash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, Fnv1a64(CanonicalConfigJson(config)));
  return buf;
}

void ValidateConfig(const ExperimentConfig& c) {
  const auto& names = AlgorithmNames();
  if (std::find(names.begin(), names.end(), c.algorithm) == names.end()) {
    throw ValidationError("unknown algorithm '" + c.algorithm + "'");
  }
  int sources = (c.instance ? 1 : 0) + (c.gen ? 1 : 0) + (c.graph ? 1 : 0);
  if (sources != 1) throw ValidationError("config needs exactly one of instance, gen, graph");
  if (c.eps.empty()) throw ValidationError("epsilon grid is empty");
  for (double e : c.eps) {
    if (!std::isfinite(e) || e < 0) throw ValidationError("epsilon values must be finite and >= 0");
  }
  if (c.trials < 1) throw ValidationError("trials must be >= 1");
  if (!(c.pair_budget_fraction >= 0)) throw ValidationError("pair_budget_fraction must be >= 0");
  if (!(c.oddk_constant > 0)) throw ValidationError("oddk_constant must be > 0");
}

int Problem::n() const { return csp ? csp->n() : graph ? graph->n() : 0; }

std::size_t Problem::m() const { return csp ? csp->m() : graph ? graph->m() : 0; }

Problem ProblemFromCsp(CspInstance instance) {
  Problem p;
  if (instance.kind() == InstanceKind::kMaxCut) p.graph = ToGraph(instance);
  p.csp = std::move(instance);
  return p;
}

Problem ProblemFromGraph(WeightedGraph graph) {
  Problem p;
  if (graph.IsUnweighted()) p.csp = ToMaxCutInstance(graph);
  p.graph = std::move(graph);
  return p;
}

Problem LoadProblem(const ExperimentConfig& config) {
  if (config.instance) {
    InstanceDocument doc = LoadInstanceFile(*config.instance);
    Problem p;
    p.csp = doc.csp;
    p.graph = doc.graph;
    if (p.csp && !p.graph && p.csp->kind() == InstanceKind::kMaxCut) p.graph = ToGraph(*p.csp);
    return p;
  }
  if (config.gen) {
    try {
      return ProblemFromCsp(GenRandomKxor(*config.gen));
    } catch (const ArgumentError& e) {
      throw ValidationError(e.what());
    }
  }
  if (config.graph) {
    const GraphSpec& g = *config.graph;
    try {
      if (g.type == "even_cycle") return ProblemFromGraph(GenEvenCycle(g.n));
      if (g.type == "complete_bipartite") return ProblemFromGraph(GenCompleteBipartite(g.a, g.b));
      if (g.type == "random_bipartite") return ProblemFromGraph(GenRandomBipartite(g.a, g.b, g.m, g.seed));
    } catch (const ArgumentError& e) {
      throw ValidationError(e.what());
    }
    throw ValidationError("unknown graph type '" + g.type + "'");
  }
  throw ValidationError("config has no instance source");
}

void CheckCompatible(const ExperimentConfig& config, const Problem& problem, double epsilon) {
  const std::string& a = config.algorithm;
  if (!std::isfinite(epsilon) || epsilon < 0) throw ValidationError("epsilon must be finite and >= 0");
  auto fail = [&](const std::string& why) { throw ValidationError(a + ": " + why); };
  if (IsGraphAlgorithm(a)) {
    if (!problem.graph) fail("needs a Max-Cut instance");
    if (!problem.graph->IsUnweighted()) fail("needs an unweighted graph");
    if ((a == "dp_shearer" || a == "alg5") && !(epsilon > 0)) fail("needs epsilon > 0");
    if (a == "alg6") {
      if (!(epsilon > 0 && epsilon <= 0.1)) fail("needs 0 < epsilon <= 0.1");
      if (!(config.alpha > 0) || !std::isfinite(config.alpha)) fail("needs alpha > 0");
      if (Alg6AmplifiedBudget(epsilon, config.alpha) > epsilon / 6) fail("amplified matching budget exceeds eps/6");
    }
    return;
  }
  if (!problem.csp) fail("needs a CSP view (unweighted input)");
  const CspInstance& inst = *problem.csp;
  const bool xor_kind = inst.kind() != InstanceKind::kGeneral;
  if (a == "alg1") {
    if (!IsTriangleFree(inst)) fail("instance is not triangle-free");
  } else if (a == "alg2") {
    if (!xor_kind) fail("needs a kxor or maxcut instance");
    if (!(epsilon > 0)) fail("needs epsilon > 0");
    if (config.subroutine == LowDegreeSubroutine::kAlg1 && !IsTriangleFree(inst)) {
      fail("the alg1 subroutine needs a triangle-free instance");
    }
    if (config.subroutine == LowDegreeSubroutine::kAlg3 && !inst.HasDistinctScopes()) {
      fail("the alg3 subroutine needs distinct scopes");
    }
  } else if (a == "alg3") {
    if (!xor_kind) fail("needs a kxor or maxcut instance");
    if (!inst.HasDistinctScopes()) fail("needs distinct scopes");
  } else if (a == "alg_oddk") {
    if (!xor_kind) fail("needs a kxor instance");
    if (inst.k() % 2 == 0) fail("needs odd k; use alg2 for even k");
    if (!(epsilon > 0)) fail("needs epsilon > 0");
    if (!inst.HasDistinctScopes()) fail("needs distinct scopes");
  } else if (a == "em_baseline") {
    const int vars = NonIsolatedCount(inst);
    if (vars > kEmEnumerationCap) {
      throw ResourceError("em_baseline enumeration over non-isolated variables", vars, kEmEnumerationCap);
    }
  }
}

Assignment RunAlgorithm(const ExperimentConfig& config, const Problem& problem, double epsilon,
                        RngStream& rng) {
  const std::string& a = config.algorithm;
  AdvRandConfig adv;
  adv.global_sign = config.global_sign;
  adv.pair_budget_fraction = config.pair_budget_fraction;
  if (a == "shearer") return ShearerBaseline(*problem.graph, rng);
  if (a == "dp_shearer") return DpShearer(*problem.graph, epsilon, rng);
  if (a == "alg5") {
    Alg5Options o;
    o.threshold = config.threshold;
    return DpMaxCutUnbounded(*problem.graph, epsilon, rng, o);
  }
  if (a == "alg6") {
    Alg6Options o;
    o.threshold = config.threshold;
    return DpMaxCutGeneral(*problem.graph, epsilon, config.alpha, rng, o);
  }
  const CspInstance& inst = *problem.csp;
  if (a == "alg1") return Alg1TriangleFreeBounded(inst, epsilon, rng);
  if (a == "alg2") {
    Alg2Options o;
    o.subroutine = config.subroutine;
    o.threshold = config.threshold;
    o.oddk_constant = config.oddk_constant;
    o.alg3 = adv;
    return Alg2PartitionKxor(inst, epsilon, o, rng);
  }
  if (a == "alg3") return Alg3DpAdvRand(inst, epsilon, adv, rng);
  if (a == "alg_oddk") return AlgOddkUnbounded(inst, epsilon, rng, config.oddk_constant, adv);
  if (a == "em_baseline") return EmBaseline(inst, epsilon, rng);
  if (a == "random_baseline") return RandomBaseline(inst, rng);
  throw ValidationError("unknown algorithm '" + a + "'");
}

double ProblemValue(const ExperimentConfig& config, const Problem& problem, const Assignment& x) {
  if (IsGraphAlgorithm(config.algorithm) || !problem.csp) return CutValue(*problem.graph, x);
  return static_cast<double>(EvalValue(*problem.csp, x));
}

double RandomBaselineValue(const ExperimentConfig& config, const Problem& problem) {
  if (IsGraphAlgorithm(config.algorithm) || !problem.csp) return problem.graph->TotalWeight() / 2;
  if (problem.csp->m() == 0) return 0;
  return Mu(*problem.csp) * static_cast<double>(problem.csp->m());
}

std::optional<double> ProblemOpt(const ExperimentConfig& config, const Problem& problem) {
  if (problem.n() > config.opt_cap || problem.n() > kBruteForceCap) return std::nullopt;
  if (IsGraphAlgorithm(config.algorithm) || !problem.csp) return BruteForceOpt(*problem.graph).value;
  return BruteForceOpt(*problem.csp).value;
}

namespace {

ExperimentReport EstimateWithOpt(const ExperimentConfig& config, const Problem& problem, double epsilon,
                                 std::optional<double> opt, bool timing) {
  CheckCompatible(config, problem, epsilon);
  const auto start = std::chrono::steady_clock::now();
  const bool with_p = problem.csp && problem.csp->m() > 0;
  struct Out {
    double value = 0;
    double p = 0;
  };
  auto outs = RunTrials<Out>(config.trials, config.seed, [&](RngStream& rng, std::size_t) {
    Assignment x = RunAlgorithm(config, problem, epsilon, rng);
    Out o;
    o.value = ProblemValue(config, problem, x);
    if (with_p) o.p = AssociatedAdvantage(*problem.csp, x);
    return o;
  });
  std::vector<double> values(outs.size()), ps(outs.size()), abs_ps(outs.size());
  for (std::size_t t = 0; t < outs.size(); ++t) {
    values[t] = outs[t].value;
    ps[t] = outs[t].p;
    abs_ps[t] = std::abs(outs[t].p);
  }
  MeanStats s = Summarize(values);
  ExperimentReport r;
  r.algorithm = config.algorithm;
  r.eps = epsilon;
  r.alpha = config.algorithm == "alg6" ? config.alpha : 0.0;
  r.n = problem.n();
  r.m = problem.m();
  r.trials = config.trials;
  r.mean_val = s.mean;
  r.se = s.se;
  r.opt = opt;
  if (opt && *opt > 0) r.ratio = s.mean / *opt;
  r.advantage = s.mean - RandomBaselineValue(config, problem);
  if (with_p) {
    r.mean_p = Summarize(ps).mean;
    r.mean_abs_p = Summarize(abs_ps).mean;
  }
  r.seed = config.seed;
  r.config_hash = ConfigHash(config);
  if (timing) {
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

}  // namespace

ExperimentReport EstimateRatio(const ExperimentConfig& config, const Problem& problem, double epsilon,
                               bool timing) {
  CheckCompatible(config, problem, epsilon);
  return EstimateWithOpt(config, problem, epsilon, ProblemOpt(config, problem), timing);
}

ExperimentReport EstimateRatio(const ExperimentConfig& config, bool timing) {
  ValidateConfig(config);
  Problem problem = LoadProblem(config);
  return EstimateRatio(config, problem, config.eps.front(), timing);
}

SweepResult Sweep(const ExperimentConfig& config, bool timing) {
  ValidateConfig(config);
  Problem problem = LoadProblem(config);
  std::optional<double> opt = ProblemOpt(config, problem);
  SweepResult out;
  std::vector<double> xs, ys;
  for (double e : config.eps) {
    try {
      out.rows.push_back(EstimateWithOpt(config, problem, e, opt, timing));
      xs.push_back(e);
      ys.push_back(out.rows.back().advantage);
    } catch (const std::exception& ex) {
      ExperimentReport r;
      r.algorithm = config.algorithm;
      r.eps = e;
      r.n = problem.n();
      r.m = problem.m();
      r.trials = config.trials;
      r.seed = config.seed;
      r.config_hash = ConfigHash(config);
      r.failed = true;
      r.error = ex.what();
      out.rows.push_back(r);
    }
  }
  out.spearman = Spearman(xs, ys);
  return out;
}

std::optional<double> Spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2 + 1;
      for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
      i = j + 1;
    }
    return r;
  };
  std::vector<double> rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvHeader() {
  return "algorithm,eps,alpha,n,m,trials,mean_val,se,opt,ratio,advantage,seed,config_hash,wall_ms\n";
}

std::string CsvRow(const ExperimentReport& r) {
  if (r.failed) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), '\n', ' ');
    return "# failed algorithm=" + r.algorithm + " eps=" + FormatDouble(r.eps) + ": " + err + "\n";
  }
  std::ostringstream os;
  os << r.algorithm << ',' << FormatDouble(r.eps) << ',' << FormatDouble(r.alpha) << ',' << r.n << ','
     << r.m << ',' << r.trials << ',' << FormatDouble(r.mean_val) << ',' << FormatDouble(r.se) << ','
     << (r.opt ? FormatDouble(*r.opt) : "") << ',' << (r.ratio ? FormatDouble(*r.ratio) : "") << ','
     << FormatDouble(r.advantage) << ',' << r.seed << ',' << r.config_hash << ','
     << FormatDouble(r.wall_ms) << '\n';
  return os.str();
}

std::string SweepCsv(const SweepResult& sweep) {
  std::string out = CsvHeader();
  for (const auto& r : sweep.rows) out += CsvRow(r);
  out += "# spearman_advantage_eps=" + (sweep.spearman ? FormatDouble(*sweep.spearman) : std::string("undefined")) +
         "\n";
  return out;
}

CompareResult CompareCsv(const std::string& a, const std::string& b) {
  struct Row {
    double mean = 0;
    double se = 0;
  };
  struct Parsed {
    std::map<std::pair<std::string, std::string>, Row> rows;
    std::set<std::string> hashes;
  };
  auto parse = [](const std::string& text, const char* name) {
    Parsed p;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (!header) {
        if (line + "\n" != CsvHeader()) throw ValidationError(std::string(name) + ": unexpected CSV header");
        header = true;
        continue;
      }
      auto f = SplitCsv(line);
      if (f.size() != 14) throw ValidationError(std::string(name) + ": row has " + std::to_string(f.size()) + " fields");
      p.hashes.insert(f[12]);
      p.rows[{f[0], f[1]}] = {std::stod(f[6]), std::stod(f[7])};
    }
    if (!header) throw ValidationError(std::string(name) + ": missing CSV header");
    return p;
  };
  CompareResult res;
  Parsed pa = parse(a, "first report");
  Parsed pb = parse(b, "second report");
  if (pa.hashes.size() != 1 || pb.hashes.size() != 1) {
    res.message = "each report must carry exactly one config hash";
    return res;
  }
  if (*pa.hashes.begin() != *pb.hashes.begin()) {
    res.message = "config hash mismatch: " + *pa.hashes.begin() + " vs " + *pb.hashes.begin();
    return res;
  }
  for (const auto& [key, ra] : pa.rows) {
    auto it = pb.rows.find(key);
    if (it == pb.rows.end()) {
      res.lines.push_back(key.first + " eps=" + key.second + ": missing from second report");
      continue;
    }
    const Row& rb = it->second;
    const double diff = rb.mean - ra.mean;
    const double se = std::sqrt(ra.se * ra.se + rb.se * rb.se);
    res.lines.push_back(key.first + " eps=" + key.second + " mean_a=" + FormatDouble(ra.mean) +
                        " mean_b=" + FormatDouble(rb.mean) + " diff=" + FormatDouble(diff) +
                        " z=" + (se > 0 ? FormatDouble(diff / se) : std::string(diff == 0 ? "0" : "inf")));
  }
  res.ok = true;
  res.message = "config hash " + *pa.hashes.begin() + " matches";
  return res;
}

const std::vector<std::string>& AuditMechanismNames() {
  static const std::vector<std::string> names = {"randomized_response", "dp_shearer", "alg1",
                                                 "alg3", "alg_oddk", "alg5", "em_baseline",
                                                 "em_over_assignments", "random_baseline"};
  return names;
}

bool AreNeighbors(const CspInstance& a, const CspInstance& b) {
  if (a.n() != b.n()) return false;
  std::map<std::string, long long> count;
  auto key = [](const Constraint& c) {
    std::string k;
    for (int v : c.scope()) k += std::to_string(v) + ",";
    if (c.is_xor()) return k + "b" + std::to_string(c.sign());
    k += "t";
    for (auto bit : c.AsPredicate().table()) k += bit ? '1' : '0';
    return k;
  };
  for (const auto& c : a.constraints()) ++count[key(c)];
  for (const auto& c : b.constraints()) --count[key(c)];
  long long diff = 0;
  for (const auto& [k, v] : count) diff += std::llabs(v);
  return diff <= 1;
}

bool AreNeighbors(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.n() != b.n()) return false;
  std::map<std::tuple<int, int, double>, long long> count;
  for (const auto& e : a.edges()) ++count[{std::min(e.u, e.v), std::max(e.u, e.v), e.weight}];
  for (const auto& e : b.edges()) --count[{std::min(e.u, e.v), std::max(e.u, e.v), e.weight}];
  long long diff = 0;
  for (const auto& [k, v] : count) diff += std::llabs(v);
  return diff <= 1;
}

std::pair<Problem, Problem> DefaultAuditPair(const std::string& mechanism) {
  if (mechanism == "randomized_response") return {Problem{}, Problem{}};
  if (mechanism == "dp_shearer" || mechanism == "alg5") {
    return {ProblemFromGraph(WeightedGraph::Unweighted(2, {{0, 1}})), ProblemFromGraph(WeightedGraph(2, {}))};
  }
  if (mechanism == "em_over_assignments") {
    return {ProblemFromGraph(WeightedGraph::Unweighted(3, {{0, 1}, {1, 2}})),
            ProblemFromGraph(WeightedGraph::Unweighted(3, {{0, 1}}))};
  }
  if (mechanism == "alg3" || mechanism == "alg_oddk") {
    return {ProblemFromCsp(CspInstance::Kxor(4, 3, {Constraint::Xor({0, 1, 2}, 1)})),
            ProblemFromCsp(CspInstance::Kxor(4, 3, {}))};
  }
  const auto& names = AuditMechanismNames();
  if (std::find(names.begin(), names.end(), mechanism) == names.end()) {
    throw ValidationError("unknown audit mechanism '" + mechanism + "'");
  }
  return {ProblemFromCsp(CspInstance::Kxor(4, 2, {Constraint::Xor({0, 1}, 1)})),
          ProblemFromCsp(CspInstance::Kxor(4, 2, {}))};
}

AuditReport RunAudit(const AuditSpec& spec) {
  const auto& names = AuditMechanismNames();
  const std::string& mech = spec.mechanism;
  if (std::find(names.begin(), names.end(), mech) == names.end()) {
    throw ValidationError("unknown audit mechanism '" + mech + "'");
  }
  if (!std::isfinite(spec.epsilon) || spec.epsilon < 0) throw ValidationError("epsilon must be finite and >= 0");
  if (spec.trials < 1) throw ValidationError("trials must be >= 1");
  const double eps = spec.epsilon;
  if (mech == "randomized_response") {
    AuditReport r = EmpiricalEpsilon(
        [eps](bool use_b, RngStream& rng) -> std::uint32_t {
          return RandomizedResponse(use_b ? -1 : 1, eps, rng) > 0 ? 1 : 0;
        },
        spec.trials, spec.seed, "bit", spec.confidence);
    r.mechanism = mech;
    r.epsilon = eps;
    return r;
  }
  Problem a, b;
  if (spec.a && spec.b) {
    a = *spec.a;
    b = *spec.b;
  } else if (spec.a) {
    a = *spec.a;
    if (a.m() == 0) throw ValidationError("cannot derive a neighbor from an empty instance");
    if (a.csp && a.csp->kind() != InstanceKind::kMaxCut) {
      b = ProblemFromCsp(a.csp->WithRemoved(a.csp->m() - 1));
    } else {
      std::vector<Edge> edges = a.graph->edges();
      edges.pop_back();
      b = ProblemFromGraph(WeightedGraph(a.graph->n(), edges));
    }
  } else {
    std::tie(a, b) = DefaultAuditPair(mech);
  }
  const bool graph_mech = mech == "dp_shearer" || mech == "alg5" ||
                          (mech == "em_over_assignments" && a.graph && b.graph);
  if (graph_mech) {
    if (!a.graph || !b.graph) throw ValidationError(mech + " needs Max-Cut inputs");
    if (!AreNeighbors(*a.graph, *b.graph)) throw ValidationError("audit inputs are not neighboring graphs");
  } else {
    if (!a.csp || !b.csp) throw ValidationError(mech + " needs CSP inputs");
    if (!AreNeighbors(*a.csp, *b.csp)) throw ValidationError("audit inputs are not neighboring instances");
  }
  const int n = a.n();
  if (n < 1) throw ValidationError("audit inputs need at least one variable");

  ExperimentConfig cfg = spec.options;
  cfg.algorithm = mech;
  std::function<Assignment(const Problem&, RngStream&)> run;
  if (mech == "em_over_assignments") {
    if (n > kEmEnumerationCap) throw ResourceError("em_over_assignments audit", n, kEmEnumerationCap);
    const std::vector<int> vars = AllVars(n);
    run = [vars, eps, graph_mech](const Problem& p, RngStream& rng) {
      Assignment x(p.n());
      if (graph_mech) {
        EmOverAssignments(*p.graph, vars, eps, 1.0, x, rng);
      } else {
        EmOverAssignments(*p.csp, vars, eps, 1.0, x, rng);
      }
      return x;
    };
  } else {
    CheckCompatible(cfg, a, eps);
    CheckCompatible(cfg, b, eps);
    run = [cfg, eps](const Problem& p, RngStream& rng) { return RunAlgorithm(cfg, p, eps, rng); };
  }
  // The coarsening is a fixed function of the output, scored against A for
  // both inputs.
  const bool full = n <= 5;
  auto label = [&](const Assignment& x) -> std::uint32_t {
    if (full) return static_cast<std::uint32_t>(x.ToMask());
    double v = graph_mech ? CutValue(*a.graph, x) : static_cast<double>(EvalValue(*a.csp, x));
    long long iv = std::min<long long>(std::llround(v), 31);
    return static_cast<std::uint32_t>(iv * 2 + (x[0] < 0 ? 1 : 0));
  };
  AuditReport r = EmpiricalEpsilon(
      [&](bool use_b, RngStream& rng) { return label(run(use_b ? b : a, rng)); }, spec.trials, spec.seed,
      full ? "full" : "value_side0", spec.confidence);
  r.mechanism = mech;
  r.epsilon = eps;
  return r;
}

std::string AuditCsvHeader() { return "mechanism,eps,trials,eps_hat,ci_lo,ci_hi,coarsening\n"; }

std::string AuditCsvRow(const AuditReport& r) {
  std::ostringstream os;
  os << r.mechanism << ',' << FormatDouble(r.epsilon) << ',' << r.trials << ',' << FormatDouble(r.epsilon_hat)
     << ',' << FormatDouble(r.ci_lo) << ',' << FormatDouble(r.ci_hi) << ',' << r.coarsening << '\n';
  return os.str();
}

HardnessReport VerifyHardness(int n, double epsilon, std::size_t size, std::uint64_t seed) {
  if (n > 24) throw ResourceError("verify-hardness enumerates 2^(n-1) cuts", n, 24);
  HardnessReport rep;
  rep.n = n;
  rep.epsilon = epsilon;
  rep.requested = size;
  HardFamilyResult gen = [&] {
    try {
      return GenHardFamily(n, epsilon, size, seed);
    } catch (const ArgumentError& e) {
      throw ValidationError(e.what());
    }
  }();
  const PackingFamily& family = gen.family;
  rep.generated = family.size();
  rep.shortfall = gen.shortfall;
  rep.attempts = gen.attempts;
  rep.separation = VerifyPackingSeparation(family);
  rep.expected_opt = n * family.degree() / 2;
  const long long full_count = static_cast<long long>(n / 2) * (n / 2);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const WeightedGraph g = family.Graph(i);
    std::vector<std::pair<int, int>> pairs;
    for (const auto& e : g.edges()) pairs.emplace_back(e.u, e.v);
    const long long count = std::llround(BruteForceOpt(WeightedGraph::Unweighted(n, pairs)).value);
    rep.opt.push_back(static_cast<double>(count) * family.weight());
    if (count != full_count) rep.opt_ok = false;
  }
  rep.pass = !rep.shortfall && rep.separation.ok && rep.opt_ok;
  return rep;
}

}  // namespace dpcsp
