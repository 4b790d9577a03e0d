#ifndef DPCSP_HARNESS_H_
#define DPCSP_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpcsp/algo_csp.h"
#include "dpcsp/csp.h"
#include "dpcsp/generators.h"
#include "dpcsp/oracles.h"
#include "dpcsp/rng.h"

namespace dpcsp {

// Triangle-free graph recipe: "even_cycle" (n), "complete_bipartite" (a, b)
// or "random_bipartite" (a, b, m, seed).
struct GraphSpec {
  std::string type;
  int n = 0;
  int a = 0;
  int b = 0;
  int m = 0;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  std::string algorithm;
  // Exactly one instance source.
  std::optional<std::string> instance;
  std::optional<GenSpec> gen;
  std::optional<GraphSpec> graph;
  std::vector<double> eps;
  double alpha = 0.5;  // alg6 only
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::string out;  // not part of the hash
  GlobalSign global_sign = GlobalSign::kRandomFlip;
  double pair_budget_fraction = 0.1;
  double oddk_constant = 100.0;
  LowDegreeSubroutine subroutine = LowDegreeSubroutine::kAlg1;  // alg2
  std::optional<double> threshold;
  int opt_cap = 22;  // brute-force OPT only when n <= opt_cap
};

const std::vector<std::string>& AlgorithmNames();
bool IsGraphAlgorithm(const std::string& algorithm);

// Strict JSON parser for configuration files; unknown fields and wrong types
// throw ValidationError. `eps` may be a number or a list.
ExperimentConfig ParseConfigJson(const std::string& text);
// Canonical JSON (sorted keys, no "out", unset optionals omitted) used for
// hashing.
std::string CanonicalConfigJson(const ExperimentConfig& config);
std::uint64_t Fnv1a64(std::string_view bytes);
// 16 lowercase hex digits of Fnv1a64(CanonicalConfigJson(config)).
std::string ConfigHash(const ExperimentConfig& config);
// Throws ValidationError for an empty grid, zero trials, an unknown
// algorithm or not exactly one instance source.
void ValidateConfig(const ExperimentConfig& config);

// The instance in whichever views it supports. Unweighted Max-Cut inputs
// carry both.
struct Problem {
  std::optional<CspInstance> csp;
  std::optional<WeightedGraph> graph;
  int n() const;
  std::size_t m() const;
};

Problem LoadProblem(const ExperimentConfig& config);
Problem ProblemFromCsp(CspInstance instance);
Problem ProblemFromGraph(WeightedGraph graph);

// Throws ValidationError when the algorithm cannot run on the problem at
// the given epsilon. Called before any trial.
void CheckCompatible(const ExperimentConfig& config, const Problem& problem, double epsilon);

Assignment RunAlgorithm(const ExperimentConfig& config, const Problem& problem, double epsilon,
                        RngStream& rng);
// Cut value for graph algorithms, satisfied-constraint count otherwise.
double ProblemValue(const ExperimentConfig& config, const Problem& problem, const Assignment& x);
// mu * m (half the total weight for cuts).
double RandomBaselineValue(const ExperimentConfig& config, const Problem& problem);
std::optional<double> ProblemOpt(const ExperimentConfig& config, const Problem& problem);

struct ExperimentReport {
  std::string algorithm;
  double eps = 0;
  double alpha = 0;
  int n = 0;
  std::size_t m = 0;
  std::uint64_t trials = 0;
  double mean_val = 0;
  double se = 0;
  std::optional<double> opt;
  std::optional<double> ratio;
  double advantage = 0;  // mean_val - mu * m
  // Mean of |P(x)| and of P(x), the per-constraint advantage (CSP views only).
  std::optional<double> mean_abs_p;
  std::optional<double> mean_p;
  std::uint64_t seed = 0;
  std::string config_hash;
  double wall_ms = 0;
  bool failed = false;
  std::string error;
};

// Trials use RngStream(config.seed, t) for t in [0, trials).
ExperimentReport EstimateRatio(const ExperimentConfig& config, const Problem& problem,
                               double epsilon, bool timing = false);
ExperimentReport EstimateRatio(const ExperimentConfig& config, bool timing = false);

struct SweepResult {
  std::vector<ExperimentReport> rows;
  std::optional<double> spearman;  // advantage vs eps over successful rows
};

// A failing row is recorded with failed = true and the sweep continues.
SweepResult Sweep(const ExperimentConfig& config, bool timing = false);

// Average ranks for ties. Empty when fewer than two points or a constant
// coordinate.
std::optional<double> Spearman(const std::vector<double>& x, const std::vector<double>& y);

std::string FormatDouble(double v);
std::string CsvHeader();
// Failed rows come out as a '#' comment line.
std::string CsvRow(const ExperimentReport& report);
std::string SweepCsv(const SweepResult& sweep);

struct CompareResult {
  bool ok = false;
  std::string message;
  std::vector<std::string> lines;
};
// Both CSVs must carry one config hash, the same in both files; rows are
// matched on (algorithm, eps) and differences reported in SE units.
CompareResult CompareCsv(const std::string& a, const std::string& b);

// Privacy audit over a neighboring pair. Mechanisms: randomized_response,
// dp_shearer, alg1, alg3, alg_oddk, alg5, em_baseline, em_over_assignments,
// random_baseline.
struct AuditSpec {
  std::string mechanism;
  double epsilon = 1.0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  double confidence = 0.95;
  // Unset means the mechanism's default pair.
  std::optional<Problem> a;
  std::optional<Problem> b;
  ExperimentConfig options;  // algorithm knobs (global sign, constants)
};

const std::vector<std::string>& AuditMechanismNames();
// Instances differ in at most one constraint (edge), compared as multisets.
bool AreNeighbors(const CspInstance& a, const CspInstance& b);
bool AreNeighbors(const WeightedGraph& a, const WeightedGraph& b);
// The pair used when the spec gives none.
std::pair<Problem, Problem> DefaultAuditPair(const std::string& mechanism);
AuditReport RunAudit(const AuditSpec& spec);
std::string AuditCsvHeader();
std::string AuditCsvRow(const AuditReport& report);

struct HardnessReport {
  int n = 0;
  double epsilon = 0;
  std::size_t requested = 0;
  std::size_t generated = 0;
  bool shortfall = false;
  std::uint64_t attempts = 0;
  SeparationResult separation;
  double expected_opt = 0;  // n d / 2
  std::vector<double> opt;  // per graph
  bool opt_ok = true;       // every max cut crosses all (n/2)^2 edges
  bool pass = false;
};

// Generates the family, checks the separation property exhaustively and
// confirms OPT(G_S) = nd/2 for every member.
HardnessReport VerifyHardness(int n, double epsilon, std::size_t size, std::uint64_t seed);

}  // namespace dpcsp

#endif  // DPCSP_HARNESS_H_
