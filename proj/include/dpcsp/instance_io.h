#ifndef DPCSP_INSTANCE_IO_H_
#define DPCSP_INSTANCE_IO_H_

#include <istream>
#include <optional>
#include <string>

#include "dpcsp/csp.h"

namespace dpcsp {

// A parsed instance file. Max-Cut documents carry a graph, plus the CSP view
// when every edge has unit weight.
struct InstanceDocument {
  InstanceKind kind = InstanceKind::kGeneral;
  std::optional<CspInstance> csp;
  std::optional<WeightedGraph> graph;
};

// JSON document:
//   {"n": int, "kind": "general"|"kxor"|"maxcut",
//    "constraints": [{"scope": [...], "b": +/-1} | {"scope": [...], "table": [0/1...]}],
//    "edges": [[u, v, w], ...]}
// Unknown fields are rejected with ValidationError.
InstanceDocument ParseInstanceJson(const std::string& text);

// Edge list: one "u v [w]" per line, '#' starts a comment, 0-indexed.
// n is one more than the largest endpoint.
WeightedGraph ParseEdgeList(std::istream& in);

// Dispatches on content: a document starting with '{' is JSON, anything else
// an edge list.
InstanceDocument LoadInstanceFile(const std::string& path);

// Canonical serializations; equal instances give equal bytes.
std::string InstanceToJson(const CspInstance& instance);
std::string GraphToJson(const WeightedGraph& graph);

void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace dpcsp

#endif  // DPCSP_INSTANCE_IO_H_
