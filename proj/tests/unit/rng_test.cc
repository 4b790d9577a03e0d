#include "dpcsp/rng.h"

#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "dpcsp/errors.h"

namespace dpcsp {
namespace {

TEST(SplitMix64Test, MatchesReferenceSequence) {
  // First outputs of the reference generator seeded with state 0.
  EXPECT_EQ(SplitMix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(SplitMix64(0x9e3779b97f4a7c15ULL), 0x6e789e6aa1b965f4ULL);
}

TEST(RngStreamTest, SameSeedAndStreamReproduce) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.NextU64(), b.NextU64());
}

TEST(RngStreamTest, StreamsDiffer) {
  RngStream a(42, 0), b(42, 1), c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    auto x = a.NextU64();
    same_ab += x == b.NextU64();
    same_ac += x == c.NextU64();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(RngStreamTest, UniformRanges) {
  RngStream r(1, 0);
  for (int i = 0; i < 100000; ++i) {
    double u = r.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    double v = r.UniformOpen();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(RngStreamTest, BelowIsUniform) {
  RngStream r(3, 0);
  const int k = 6, draws = 600000;
  std::vector<int> hist(k, 0);
  for (int i = 0; i < draws; ++i) ++hist[r.Below(k)];
  const double p = 1.0 / k, sd = std::sqrt(draws * p * (1 - p));
  for (int c : hist) EXPECT_NEAR(c, draws * p, 4 * sd);
  EXPECT_THROW(r.Below(0), ArgumentError);
}

TEST(RngStreamTest, SignAndBernoulliFrequencies) {
  RngStream r(9, 0);
  const int draws = 400000;
  int plus = 0, hits = 0;
  for (int i = 0; i < draws; ++i) {
    int s = r.Sign();
    ASSERT_TRUE(s == 1 || s == -1);
    plus += s == 1;
    hits += r.Bernoulli(0.3);
  }
  EXPECT_NEAR(plus, draws * 0.5, 4 * std::sqrt(draws * 0.25));
  EXPECT_NEAR(hits, draws * 0.3, 4 * std::sqrt(draws * 0.21));
}

// Trials read a handful of draws from consecutive stream ids, so the first
// draws across streams must look independent.
TEST(RngStreamTest, FirstDrawsAcrossStreams) {
  const int streams = 200000;
  std::vector<double> first(streams), second(streams);
  for (int t = 0; t < streams; ++t) {
    RngStream r(5, static_cast<std::uint64_t>(t));
    first[t] = r.Uniform() - 0.5;
    second[t] = r.Uniform() - 0.5;
  }
  double mean = 0, lag_stream = 0, lag_draw = 0;
  for (int t = 0; t < streams; ++t) {
    mean += first[t];
    lag_draw += first[t] * second[t];
    if (t + 1 < streams) lag_stream += first[t] * first[t + 1];
  }
  // Var(U - 1/2) = 1/12, Var of a product of two = 1/144.
  EXPECT_NEAR(mean / streams, 0.0, 4 * std::sqrt(1.0 / 12 / streams));
  EXPECT_NEAR(lag_draw / streams, 0.0, 4 * std::sqrt(1.0 / 144 / streams));
  EXPECT_NEAR(lag_stream / streams, 0.0, 4 * std::sqrt(1.0 / 144 / streams));
  int hist[10] = {};
  for (double u : first) ++hist[static_cast<int>((u + 0.5) * 10)];
  for (int c : hist) EXPECT_NEAR(c, streams / 10.0, 4 * std::sqrt(streams * 0.09));
}

}  // namespace
}  // namespace dpcsp
