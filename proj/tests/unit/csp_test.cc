#include "dpcsp/csp.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "dpcsp/errors.h"
#include "dpcsp/rng.h"

namespace dpcsp {
namespace {

// O(m^3) reference: pairwise overlap <= 1, and no three pairwise
// intersecting constraints without a common variable.
bool TriangleFreeBrute(const CspInstance& inst) {
  const auto& cs = inst.constraints();
  auto common = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    for (int v : a) {
      if (std::find(b.begin(), b.end(), v) != b.end()) out.push_back(v);
    }
    return out;
  };
  for (std::size_t a = 0; a < cs.size(); ++a) {
    for (std::size_t b = a + 1; b < cs.size(); ++b) {
      if (common(cs[a].scope(), cs[b].scope()).size() > 1) return false;
    }
  }
  for (std::size_t a = 0; a < cs.size(); ++a) {
    for (std::size_t b = a + 1; b < cs.size(); ++b) {
      auto ab = common(cs[a].scope(), cs[b].scope());
      if (ab.empty()) continue;
      for (std::size_t c = b + 1; c < cs.size(); ++c) {
        if (common(cs[a].scope(), cs[c].scope()).empty() || common(cs[b].scope(), cs[c].scope()).empty()) continue;
        if (common(ab, cs[c].scope()).empty()) return false;
      }
    }
  }
  return true;
}

CspInstance RandomKxor(int n, int m, int k, RngStream& rng) {
  std::vector<Constraint> cs;
  for (int l = 0; l < m; ++l) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.Below(n - i)]);
    pool.resize(k);
    cs.push_back(Constraint::Xor(pool, rng.Sign()));
  }
  return CspInstance::Kxor(n, k, cs);
}

CspInstance RandomGeneral(int n, int m, RngStream& rng) {
  std::vector<Constraint> cs;
  for (int l = 0; l < m; ++l) {
    int k = 1 + static_cast<int>(rng.Below(3));
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.Below(n - i)]);
    pool.resize(k);
    std::vector<std::uint8_t> table(std::size_t{1} << k);
    for (auto& t : table) t = rng.Coin();
    cs.push_back(Constraint::Table(pool, Predicate(table)));
  }
  return CspInstance(n, cs);
}

TEST(EvalValueTest, XorConstraintSatisfiedWhenProductMatchesSign) {
  CspInstance inst = CspInstance::Kxor(3, 2, {Constraint::Xor({1, 2}, 1)});
  EXPECT_EQ(EvalValue(inst, Assignment::FromInts({1, 1, 1})), 1);
  EXPECT_EQ(EvalValue(inst, Assignment::FromInts({1, 1, -1})), 0);
}

TEST(EvalValueTest, EmptyInstanceIsZero) {
  CspInstance inst(4, {});
  EXPECT_EQ(EvalValue(inst, Assignment::FromInts({1, -1, 1, -1})), 0);
}

TEST(EvalValueTest, PathCut) {
  WeightedGraph path = WeightedGraph::Unweighted(3, {{0, 1}, {1, 2}});
  Assignment x = Assignment::FromInts({1, -1, 1});
  EXPECT_EQ(CutValue(path, x), 2.0);
  EXPECT_EQ(EvalValue(ToMaxCutInstance(path), x), 2);
}

TEST(EvalValueTest, LengthMismatchThrows) {
  CspInstance inst = CspInstance::Kxor(3, 2, {Constraint::Xor({0, 1}, 1)});
  EXPECT_THROW(EvalValue(inst, Assignment(2)), ArgumentError);
}

TEST(EvalValueTest, WeightedCut) {
  WeightedGraph g(3, {{0, 1, 0.5}, {1, 2, 2.0}});
  EXPECT_DOUBLE_EQ(CutValue(g, Assignment::FromInts({1, -1, -1})), 0.5);
  EXPECT_DOUBLE_EQ(g.WeightedDegrees()[1], 2.5);
}

TEST(AdvantageTest, SingleXorSatisfied) {
  CspInstance inst = CspInstance::Kxor(3, 2, {Constraint::Xor({1, 2}, 1)});
  EXPECT_DOUBLE_EQ(AssociatedAdvantage(inst, Assignment(3)), 0.5);
}

TEST(AdvantageTest, CutEdge) {
  CspInstance inst = ToMaxCutInstance(WeightedGraph::Unweighted(2, {{0, 1}}));
  EXPECT_DOUBLE_EQ(AssociatedAdvantage(inst, Assignment::FromInts({1, -1})), 0.5);
}

TEST(AdvantageTest, EmptyInstanceThrows) {
  EXPECT_THROW(AssociatedAdvantage(CspInstance(2, {}), Assignment(2)), DomainError);
  EXPECT_THROW(Mu(CspInstance(2, {})), DomainError);
}

TEST(AdvantageTest, AveragesToZeroAndMatchesValueIdentity) {
  RngStream rng(11, 0);
  for (int rep = 0; rep < 20; ++rep) {
    CspInstance inst = RandomGeneral(8, 12, rng);
    double total = 0;
    const double mu = Mu(inst);
    for (std::uint64_t mask = 0; mask < 256; ++mask) {
      Assignment x = Assignment::FromMask(mask, 8);
      const double p = AssociatedAdvantage(inst, x);
      total += p;
      EXPECT_NEAR(static_cast<double>(EvalValue(inst, x)), (mu + p) * static_cast<double>(inst.m()), 1e-12);
    }
    EXPECT_NEAR(total / 256, 0.0, 1e-12);
  }
}

TEST(GValueTest, SingleSatisfiedConstraint) {
  CspInstance inst = CspInstance::Kxor(3, 3, {Constraint::Xor({0, 1, 2}, -1)});
  EXPECT_DOUBLE_EQ(GValue(inst, Assignment::FromInts({1, 1, -1})), 1.0);
}

TEST(GValueTest, OddKIsAntisymmetric) {
  RngStream rng(2, 0);
  CspInstance inst = RandomKxor(10, 15, 3, rng);
  for (int t = 0; t < 50; ++t) {
    Assignment x = Assignment::Uniform(10, rng);
    EXPECT_NEAR(GValue(inst, x.Negated()), -GValue(inst, x), 1e-12);
  }
}

TEST(GValueTest, SecondMomentIsOneForDistinctScopes) {
  RngStream rng(4, 0);
  for (int k : {1, 2, 3}) {
    CspInstance inst = [&] {
      for (;;) {
        CspInstance c = RandomKxor(12, 10, k, rng);
        if (c.HasDistinctScopes()) return c;
      }
    }();
    double sum = 0;
    for (std::uint64_t mask = 0; mask < (1u << 12); ++mask) {
      double g = GValue(inst, Assignment::FromMask(mask, 12));
      sum += g * g;
    }
    EXPECT_NEAR(sum / 4096, 1.0, 1e-12) << "k=" << k;
  }
}

TEST(GValueTest, GeneralInstanceThrows) {
  CspInstance inst(2, {Constraint::Table({0, 1}, Predicate::And(2))});
  EXPECT_THROW(GValue(inst, Assignment(2)), DomainError);
}

TEST(MuTest, Examples) {
  EXPECT_DOUBLE_EQ(Mu(Predicate::Parity(3, 1)), 0.5);
  EXPECT_DOUBLE_EQ(Mu(Predicate::Parity(2, -1)), 0.5);
  EXPECT_DOUBLE_EQ(Mu(Predicate::AlwaysTrue(3)), 1.0);
  EXPECT_DOUBLE_EQ(Mu(Predicate::And(2)), 0.25);
}

TEST(PredicateTest, NegationAndParitySign) {
  Predicate p = Predicate::Parity(2, 1);
  EXPECT_EQ(p.ParitySign(), 1);
  std::vector<std::int8_t> flip = {-1, 1};
  EXPECT_EQ(p.WithNegation(flip).ParitySign(), -1);
  EXPECT_FALSE(Predicate::And(2).ParitySign().has_value());
  EXPECT_THROW(Predicate(std::vector<std::uint8_t>{1, 0, 1}), ArgumentError);
}

TEST(TriangleFreeTest, Examples) {
  auto tri = CspInstance::Kxor(4, 2, {Constraint::Xor({1, 2}, 1), Constraint::Xor({2, 3}, 1),
                                      Constraint::Xor({1, 3}, 1)});
  EXPECT_FALSE(IsTriangleFree(tri));
  auto overlap2 = CspInstance::Kxor(4, 3, {Constraint::Xor({0, 1, 2}, 1), Constraint::Xor({1, 2, 3}, 1)});
  EXPECT_FALSE(IsTriangleFree(overlap2));
  auto disjoint = CspInstance::Kxor(6, 2, {Constraint::Xor({0, 1}, 1), Constraint::Xor({2, 3}, 1),
                                           Constraint::Xor({4, 5}, -1)});
  EXPECT_TRUE(IsTriangleFree(disjoint));
}

TEST(TriangleFreeTest, AgreesWithBruteForce) {
  RngStream rng(21, 0);
  int free_count = 0;
  for (int rep = 0; rep < 400; ++rep) {
    const int n = 8 + static_cast<int>(rng.Below(10));
    const int m = 1 + static_cast<int>(rng.Below(30));
    const int k = 2 + static_cast<int>(rng.Below(2));
    CspInstance inst = rep % 2 ? RandomKxor(n, m % 8 + 1, k, rng) : RandomGeneral(n, m, rng);
    const bool expect = TriangleFreeBrute(inst);
    free_count += expect;
    ASSERT_EQ(IsTriangleFree(inst), expect) << "rep " << rep;
  }
  EXPECT_GT(free_count, 20);
}

TEST(TriangleFreeTest, Graphs) {
  EXPECT_FALSE(IsTriangleFree(WeightedGraph::Unweighted(3, {{0, 1}, {1, 2}, {0, 2}})));
  EXPECT_TRUE(IsTriangleFree(WeightedGraph::Unweighted(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})));
}

TEST(DegreesTest, Examples) {
  auto inst = CspInstance::Kxor(5, 3, {Constraint::Xor({1, 2, 3}, 1)});
  EXPECT_EQ(Degrees(inst), (std::vector<int>{0, 1, 1, 1, 0}));
  auto c4 = WeightedGraph::Unweighted(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  EXPECT_EQ(c4.Degrees(), (std::vector<int>{2, 2, 2, 2}));
  EXPECT_EQ(Degrees(ToMaxCutInstance(c4)), (std::vector<int>{2, 2, 2, 2}));
}

TEST(DegreesTest, SumIsKTimesM) {
  RngStream rng(8, 0);
  for (int k = 1; k <= 4; ++k) {
    CspInstance inst = RandomKxor(10, 17, k, rng);
    auto d = Degrees(inst);
    EXPECT_EQ(std::accumulate(d.begin(), d.end(), 0), 17 * k);
  }
}

TEST(DerivativeQTest, Examples) {
  Constraint c = Constraint::Xor({0, 1}, 1);
  std::vector<std::int8_t> fixed = {0, 1};
  EXPECT_DOUBLE_EQ(DerivativeQ(c, 0, fixed), 0.5);
  std::vector<std::int8_t> full = {1, 1, 1};
  EXPECT_DOUBLE_EQ(DerivativeQ(c, 2, full), 0.0);
  std::vector<std::int8_t> missing = {0, 0};
  EXPECT_THROW(DerivativeQ(c, 0, missing), ArgumentError);
}

TEST(DerivativeQTest, XorMagnitudeIsHalf) {
  RngStream rng(5, 0);
  for (int t = 0; t < 200; ++t) {
    Constraint c = Constraint::Xor({0, 1, 2, 3}, rng.Sign());
    std::vector<std::int8_t> fixed(4);
    for (auto& v : fixed) v = static_cast<std::int8_t>(rng.Sign());
    fixed[2] = 0;
    EXPECT_DOUBLE_EQ(std::abs(DerivativeQ(c, 2, fixed)), 0.5);
  }
}

TEST(DerivativeQTest, MatchesTableDifference) {
  // Q = (Pbar(x_j = +1) - Pbar(x_j = -1)) / 2, evaluated directly.
  Predicate p = Predicate::And(3);
  Constraint c = Constraint::Table({0, 1, 2}, p);
  for (int a : {-1, 1}) {
    for (int b : {-1, 1}) {
      std::vector<std::int8_t> fixed = {static_cast<std::int8_t>(a), 0, static_cast<std::int8_t>(b)};
      std::vector<std::int8_t> plus = {static_cast<std::int8_t>(a), 1, static_cast<std::int8_t>(b)};
      std::vector<std::int8_t> minus = {static_cast<std::int8_t>(a), -1, static_cast<std::int8_t>(b)};
      double expect = (static_cast<double>(p.Eval(plus)) - static_cast<double>(p.Eval(minus))) / 2;
      EXPECT_DOUBLE_EQ(DerivativeQ(c, 1, fixed), expect);
    }
  }
}

TEST(LambdaTest, Examples) {
  auto inst = CspInstance::Kxor(3, 2, {Constraint::Xor({0, 1}, 1)});
  std::vector<bool> u_none_active = {true, true, false};
  EXPECT_DOUBLE_EQ(LambdaJ(inst, 0, u_none_active, Assignment(3)), 0.0);
  std::vector<bool> u = {true, false, false};
  EXPECT_DOUBLE_EQ(LambdaJ(inst, 0, u, Assignment(3)), 1.0);
  EXPECT_THROW(LambdaJ(inst, 1, u, Assignment(3)), ArgumentError);
}

TEST(LambdaTest, ContributionsAreMultiplesOfInverseRootM) {
  RngStream rng(6, 0);
  CspInstance inst = RandomKxor(12, 25, 3, rng);
  for (int t = 0; t < 50; ++t) {
    std::vector<bool> u(12);
    for (int i = 0; i < 12; ++i) u[i] = rng.Bernoulli(0.4);
    u[0] = true;
    Assignment y = Assignment::Uniform(12, rng);
    double scaled = LambdaJ(inst, 0, u, y) * std::sqrt(25.0);
    EXPECT_NEAR(scaled, std::round(scaled), 1e-12);
  }
}

TEST(InstanceKindTest, Validation) {
  EXPECT_THROW(CspInstance::Kxor(3, 2, {Constraint::Xor({0, 1, 2}, 1)}), ValidationError);
  EXPECT_THROW(CspInstance(3, {Constraint::Xor({0, 1}, 1)}, InstanceKind::kMaxCut), ValidationError);
  EXPECT_THROW(CspInstance(2, {Constraint::Xor({0, 2}, 1)}), ArgumentError);
  EXPECT_THROW(Constraint::Xor({1, 1}, 1), ArgumentError);
}

TEST(InstanceKindTest, GraphRoundTrip) {
  WeightedGraph g = WeightedGraph::Unweighted(4, {{0, 1}, {1, 2}, {2, 3}});
  CspInstance inst = ToMaxCutInstance(g);
  EXPECT_EQ(inst.kind(), InstanceKind::kMaxCut);
  WeightedGraph back = ToGraph(inst);
  EXPECT_EQ(back.edges(), g.edges());
  EXPECT_THROW(WeightedGraph(2, {{0, 0, 1.0}}), ArgumentError);
  EXPECT_THROW(WeightedGraph(2, {{0, 1, 0.0}}), ArgumentError);
}

TEST(InstanceKindTest, NeighborsByAddRemove) {
  auto inst = CspInstance::Kxor(3, 2, {Constraint::Xor({0, 1}, 1)});
  auto more = inst.WithAdded(Constraint::Xor({1, 2}, -1));
  EXPECT_EQ(more.m(), 2u);
  EXPECT_EQ(more.WithRemoved(1).constraints(), inst.constraints());
}

}  // namespace
}  // namespace dpcsp
