#include "dpcsp/instance_io.h"

#include <fstream>
#include <sstream>

#include "dpcsp/errors.h"
#include "json.hpp"

namespace dpcsp {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void RejectUnknown(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ValidationError(std::string("unknown field '") + it.key() + "' in " + where);
  }
}

int AsInt(const json& v, const char* what) {
  if (!v.is_number_integer()) throw ValidationError(std::string(what) + " must be an integer");
  return v.get<int>();
}

Constraint ParseConstraint(const json& c) {
  if (!c.is_object()) throw ValidationError("constraint must be an object");
  RejectUnknown(c, {"scope", "b", "table"}, "constraint");
  if (!c.contains("scope") || !c["scope"].is_array()) throw ValidationError("constraint needs a scope array");
  std::vector<int> scope;
  for (const auto& v : c["scope"]) scope.push_back(AsInt(v, "scope entry"));
  bool has_b = c.contains("b"), has_table = c.contains("table");
  if (has_b == has_table) throw ValidationError("constraint needs exactly one of 'b' or 'table'");
  try {
    if (has_b) return Constraint::Xor(std::move(scope), AsInt(c["b"], "b"));
    if (!c["table"].is_array()) throw ValidationError("table must be an array");
    std::vector<std::uint8_t> table;
    for (const auto& v : c["table"]) {
      int b = AsInt(v, "table entry");
      if (b != 0 && b != 1) throw ValidationError("table entries must be 0 or 1");
      table.push_back(static_cast<std::uint8_t>(b));
    }
    return Constraint::Table(std::move(scope), Predicate(std::move(table)));
  } catch (const ArgumentError& e) {
    throw ValidationError(e.what());
  }
}

}  // namespace

InstanceDocument ParseInstanceJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("instance document must be an object");
  RejectUnknown(doc, {"n", "kind", "constraints", "edges"}, "instance");
  if (!doc.contains("n")) throw ValidationError("instance needs 'n'");
  int n = AsInt(doc["n"], "n");
  std::string kind = doc.value("kind", std::string("general"));
  InstanceDocument out;
  try {
    if (kind == "maxcut") {
      if (doc.contains("constraints")) throw ValidationError("maxcut documents use 'edges'");
      std::vector<Edge> edges;
      if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) throw ValidationError("edges must be an array");
        for (const auto& e : doc["edges"]) {
          if (!e.is_array() || e.size() < 2 || e.size() > 3) {
            throw ValidationError("edge must be [u, v] or [u, v, w]");
          }
          double w = 1.0;
          if (e.size() == 3) {
            if (!e[2].is_number()) throw ValidationError("edge weight must be a number");
            w = e[2].get<double>();
          }
          edges.push_back({AsInt(e[0], "edge endpoint"), AsInt(e[1], "edge endpoint"), w});
        }
      }
      out.kind = InstanceKind::kMaxCut;
      out.graph = WeightedGraph(n, std::move(edges));
      if (out.graph->IsUnweighted()) out.csp = ToMaxCutInstance(*out.graph);
      return out;
    }
    if (kind != "general" && kind != "kxor") throw ValidationError("unknown instance kind '" + kind + "'");
    if (doc.contains("edges")) throw ValidationError("'edges' is only valid for maxcut documents");
    std::vector<Constraint> cs;
    if (doc.contains("constraints")) {
      if (!doc["constraints"].is_array()) throw ValidationError("constraints must be an array");
      for (const auto& c : doc["constraints"]) cs.push_back(ParseConstraint(c));
    }
    out.kind = kind == "kxor" ? InstanceKind::kKxor : InstanceKind::kGeneral;
    out.csp = CspInstance(n, std::move(cs), out.kind);
  } catch (const ArgumentError& e) {
    throw ValidationError(e.what());
  }
  return out;
}

WeightedGraph ParseEdgeList(std::istream& in) {
  std::vector<Edge> edges;
  int n = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    long long u, v;
    if (!(ss >> u)) continue;
    double w = 1.0;
    if (!(ss >> v)) throw ValidationError("edge list line " + std::to_string(lineno) + ": missing endpoint");
    if (!(ss >> w)) w = 1.0;
    std::string rest;
    if (ss.clear(), ss >> rest) {
      throw ValidationError("edge list line " + std::to_string(lineno) + ": trailing tokens");
    }
    if (u < 0 || v < 0 || u > 1'000'000'000 || v > 1'000'000'000) {
      throw ValidationError("edge list line " + std::to_string(lineno) + ": bad endpoint");
    }
    edges.push_back({static_cast<int>(u), static_cast<int>(v), w});
    n = std::max(n, static_cast<int>(std::max(u, v)) + 1);
  }
  try {
    return WeightedGraph(n, std::move(edges));
  } catch (const ArgumentError& e) {
    throw ValidationError(e.what());
  }
}

InstanceDocument LoadInstanceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return ParseInstanceJson(text);
  std::istringstream ss(text);
  InstanceDocument out;
  out.kind = InstanceKind::kMaxCut;
  out.graph = ParseEdgeList(ss);
  if (out.graph->IsUnweighted()) out.csp = ToMaxCutInstance(*out.graph);
  return out;
}

std::string InstanceToJson(const CspInstance& instance) {
  if (instance.kind() == InstanceKind::kMaxCut) return GraphToJson(ToGraph(instance));
  ordered_json doc;
  doc["n"] = instance.n();
  doc["kind"] = KindName(instance.kind());
  ordered_json cs = ordered_json::array();
  for (const auto& c : instance.constraints()) {
    ordered_json j;
    j["scope"] = c.scope();
    if (c.is_xor()) {
      j["b"] = c.sign();
    } else {
      std::vector<int> t(c.AsPredicate().table().begin(), c.AsPredicate().table().end());
      j["table"] = t;
    }
    cs.push_back(std::move(j));
  }
  doc["constraints"] = std::move(cs);
  return doc.dump() + "\n";
}

std::string GraphToJson(const WeightedGraph& graph) {
  ordered_json doc;
  doc["n"] = graph.n();
  doc["kind"] = "maxcut";
  ordered_json es = ordered_json::array();
  for (const auto& e : graph.edges()) es.push_back(ordered_json::array({e.u, e.v, e.weight}));
  doc["edges"] = std::move(es);
  return doc.dump() + "\n";
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

}  // namespace dpcsp
