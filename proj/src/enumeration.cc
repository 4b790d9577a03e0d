#include "dpcsp/enumeration.h"

#include <unordered_map>

#include "dpcsp/errors.h"

namespace dpcsp {

namespace {

std::unordered_map<int, int> PositionIndex(std::span<const int> vars) {
  std::unordered_map<int, int> pos;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!pos.emplace(vars[i], static_cast<int>(i)).second) {
      throw ArgumentError("variable subset has duplicates");
    }
  }
  return pos;
}

}  // namespace

LocalCsp RestrictCsp(const CspInstance& instance, std::span<const int> vars) {
  auto pos = PositionIndex(vars);
  LocalCsp out;
  out.n = static_cast<int>(vars.size());
  for (const auto& c : instance.constraints()) {
    std::vector<int> scope;
    scope.reserve(c.scope().size());
    bool inside = true;
    for (int v : c.scope()) {
      auto it = pos.find(v);
      if (it == pos.end()) {
        inside = false;
        break;
      }
      scope.push_back(it->second);
    }
    if (!inside) continue;
    if (c.is_xor()) {
      out.constraints.push_back(Constraint::Xor(std::move(scope), c.sign()));
    } else {
      out.constraints.push_back(Constraint::Table(std::move(scope), c.AsPredicate()));
    }
  }
  return out;
}

LocalGraph RestrictGraph(const WeightedGraph& graph, std::span<const int> vars) {
  auto pos = PositionIndex(vars);
  LocalGraph out;
  out.n = static_cast<int>(vars.size());
  for (const auto& e : graph.edges()) {
    auto a = pos.find(e.u);
    auto b = pos.find(e.v);
    if (a == pos.end() || b == pos.end()) continue;
    out.edges.push_back({a->second, b->second, e.weight});
  }
  return out;
}

double ScoreMask(const LocalCsp& csp, std::uint64_t mask) {
  double s = 0;
  for (const auto& c : csp.constraints) s += c.SatisfiedMask(mask) ? 1.0 : 0.0;
  return s;
}

double ScoreMask(const LocalGraph& graph, std::uint64_t mask) {
  double s = 0;
  for (const auto& e : graph.edges) {
    if (((mask >> e.u) ^ (mask >> e.v)) & 1) s += e.weight;
  }
  return s;
}

}  // namespace dpcsp
