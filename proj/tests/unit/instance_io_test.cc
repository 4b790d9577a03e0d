#include "dpcsp/instance_io.h"

#include <cstdio>
#include <sstream>

#include <gtest/gtest.h>

#include "dpcsp/errors.h"

namespace dpcsp {
namespace {

TEST(InstanceJsonTest, ParsesKxor) {
  auto doc = ParseInstanceJson(R"({"kind":"kxor","n":4,"constraints":[{"scope":[0,1,2],"b":-1},{"b":1,"scope":[1,2,3]}]})");
  ASSERT_TRUE(doc.csp.has_value());
  EXPECT_EQ(doc.csp->kind(), InstanceKind::kKxor);
  EXPECT_EQ(doc.csp->k(), 3);
  EXPECT_EQ(doc.csp->m(), 2u);
  EXPECT_EQ(doc.csp->constraint(0).sign(), -1);
}

TEST(InstanceJsonTest, ParsesTableConstraint) {
  auto doc = ParseInstanceJson(R"({"n":2,"constraints":[{"scope":[0,1],"table":[0,0,0,1]}]})");
  ASSERT_TRUE(doc.csp.has_value());
  EXPECT_EQ(doc.csp->kind(), InstanceKind::kGeneral);
  EXPECT_EQ(EvalValue(*doc.csp, Assignment::FromInts({1, 1})), 1);
  EXPECT_EQ(EvalValue(*doc.csp, Assignment::FromInts({-1, 1})), 0);
}

TEST(InstanceJsonTest, ParsesMaxCutWithAndWithoutWeights) {
  auto doc = ParseInstanceJson(R"({"n":3,"kind":"maxcut","edges":[[0,1],[1,2]]})");
  ASSERT_TRUE(doc.graph.has_value());
  ASSERT_TRUE(doc.csp.has_value());
  EXPECT_EQ(doc.graph->m(), 2u);
  auto weighted = ParseInstanceJson(R"({"n":3,"kind":"maxcut","edges":[[0,1,0.25],[1,2,1]]})");
  ASSERT_TRUE(weighted.graph.has_value());
  EXPECT_FALSE(weighted.csp.has_value());
  EXPECT_DOUBLE_EQ(weighted.graph->TotalWeight(), 1.25);
}

TEST(InstanceJsonTest, RejectsMalformedDocuments) {
  EXPECT_THROW(ParseInstanceJson(R"({"n":2,"constraints":[],"extra":1})"), ValidationError);
  EXPECT_THROW(ParseInstanceJson(R"({"n":2,"constraints":[{"scope":[0,1],"b":1,"c":2}]})"), ValidationError);
  EXPECT_THROW(ParseInstanceJson(R"({"n":2,"constraints":[{"scope":[0,1],"b":1,"table":[0,1,1,0]}]})"),
               ValidationError);
  EXPECT_THROW(ParseInstanceJson(R"({"n":2,"constraints":[{"scope":[0,5],"b":1}]})"), ValidationError);
  EXPECT_THROW(ParseInstanceJson(R"({"n":2,"constraints":[{"scope":[0,1],"table":[0,1]}]})"), ValidationError);
  EXPECT_THROW(ParseInstanceJson(R"({"n":2,"kind":"maxcut","edges":[[0,0]]})"), ValidationError);
  EXPECT_THROW(ParseInstanceJson(R"({"n":2,"kind":"weird"})"), ValidationError);
  EXPECT_THROW(ParseInstanceJson("not json"), ValidationError);
}

TEST(InstanceJsonTest, RoundTripIsByteStable) {
  auto inst = CspInstance::Kxor(5, 2, {Constraint::Xor({0, 1}, 1), Constraint::Xor({3, 4}, -1)});
  std::string text = InstanceToJson(inst);
  auto doc = ParseInstanceJson(text);
  ASSERT_TRUE(doc.csp.has_value());
  EXPECT_EQ(InstanceToJson(*doc.csp), text);
  WeightedGraph g(3, {{0, 1, 0.5}, {1, 2, 2.0}});
  std::string gtext = GraphToJson(g);
  EXPECT_EQ(GraphToJson(*ParseInstanceJson(gtext).graph), gtext);
}

TEST(EdgeListTest, ParsesCommentsAndWeights) {
  std::istringstream in("# a path\n0 1\n1 2 0.5  # weighted\n\n");
  WeightedGraph g = ParseEdgeList(in);
  EXPECT_EQ(g.n(), 3);
  EXPECT_EQ(g.m(), 2u);
  EXPECT_DOUBLE_EQ(g.edges()[1].weight, 0.5);
  std::istringstream bad("0 x\n");
  EXPECT_THROW(ParseEdgeList(bad), ValidationError);
}

TEST(LoadInstanceFileTest, DispatchesOnContent) {
  const std::string json_path = testing::TempDir() + "/inst.json";
  const std::string edge_path = testing::TempDir() + "/inst.txt";
  WriteTextFile(json_path, R"({"n":2,"kind":"kxor","constraints":[{"scope":[0,1],"b":1}]})");
  WriteTextFile(edge_path, "0 1\n1 2\n");
  EXPECT_TRUE(LoadInstanceFile(json_path).csp.has_value());
  auto doc = LoadInstanceFile(edge_path);
  EXPECT_EQ(doc.kind, InstanceKind::kMaxCut);
  EXPECT_EQ(doc.graph->n(), 3);
  EXPECT_THROW(LoadInstanceFile(testing::TempDir() + "/missing.json"), ValidationError);
}

}  // namespace
}  // namespace dpcsp
