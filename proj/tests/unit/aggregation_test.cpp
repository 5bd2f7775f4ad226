#include <gtest/gtest.h>

#include <cmath>

#include "much/aggregation.hpp"
#include "much/error.hpp"
#include "support/synthetic.hpp"

namespace much {
namespace {

using A = AggregatorKind;

// Straightforward long-double evaluation, no log space.
long double oracle(const std::vector<double>& v, A kind) {
  long double acc = kind == A::Mean ? 0.0L : 1.0L;
  long double mx = v.front();
  for (double x : v) {
    if (kind == A::Mean) acc += x;
    else acc *= x;
    mx = std::max<long double>(mx, x);
  }
  switch (kind) {
    case A::Mean: return acc / v.size();
    case A::Max: return mx;
    case A::GeoMean: return std::pow(acc, 1.0L / v.size());
    case A::Product: return acc;
  }
  return 0;
}

Sample tokens_of(const std::vector<std::string>& surfaces, bool eos) {
  Sample s;
  s.id = "m";
  std::size_t pos = 0;
  for (const auto& x : surfaces) {
    TokenRecord t;
    t.surface = x;
    t.char_start = pos;
    pos += x.size();
    t.char_end = pos;
    s.generation_text += x;
    s.tokens.push_back(t);
  }
  if (eos) {
    TokenRecord t;
    t.is_eos = true;
    t.char_start = t.char_end = pos;
    s.tokens.push_back(t);
  }
  return s;
}

TEST(Aggregate, MatchesDirectEvaluation) {
  testing::Rng rng(41);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> v(testing::uniform(rng, 1, 30));
    for (auto& x : v) x = u(rng);
    for (auto kind : kAllAggregators) {
      const double got = aggregate_values(v, kind);
      const auto want = static_cast<double>(oracle(v, kind));
      ASSERT_LE(std::abs(got - want), 1e-12 * std::abs(want) + 1e-300) << to_string(kind);
    }
  }
}

TEST(Aggregate, SingleValueIsIdentity) {
  for (auto kind : kAllAggregators) {
    const std::vector<double> v{0.3};
    EXPECT_EQ(aggregate_values(v, kind), 0.3);
  }
}

TEST(Aggregate, ZeroPassesThroughLogSpace) {
  const std::vector<double> v{0.5, 0.0, 0.25};
  EXPECT_EQ(aggregate_values(v, A::Product), 0.0);
  EXPECT_EQ(aggregate_values(v, A::GeoMean), 0.0);
  EXPECT_EQ(aggregate_values(v, A::Max), 0.5);
}

TEST(Aggregate, LongClaimsDoNotUnderflowToGarbage) {
  const std::vector<double> v(400, 0.1);
  EXPECT_NEAR(aggregate_values(v, A::GeoMean), 0.1, 1e-15);
  EXPECT_EQ(aggregate_values(v, A::Product), 0.0);  // 1e-400 is below the double range
}

TEST(Aggregate, NegativeInputNamesTheScorer) {
  const auto s = tokens_of({"a", "b"}, false);
  const ClaimPartition p{{{0, 1}}, false};
  const TokenScoreVector tv{"my_scorer", {-0.5, 0.25}, true};
  try {
    aggregate(tv, p, {true, true}, A::Product);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("my_scorer"), std::string::npos);
  }
  EXPECT_NO_THROW(aggregate(tv, p, {true, true}, A::Mean));
  EXPECT_THROW(aggregate_values(std::vector<double>{-1.0}, A::GeoMean), DataError);
  EXPECT_THROW(aggregate_values(std::vector<double>{}, A::Mean), DataError);
}

TEST(Aggregate, OverflowIsReported) {
  const TokenScoreVector tv{"big", {1e300, 1e300}, true};
  EXPECT_THROW(aggregate(tv, {{{0, 1}}, false}, {true, true}, A::Product), DataError);
}

TEST(Mask, StopwordsPunctuationAndEosAreExcluded) {
  const auto a = tokens_of({" is", " the", " largest", " city"}, false);
  const ClaimPartition pa{{{0, 1, 2, 3}}, false};
  EXPECT_EQ(content_token_mask(a, pa), (std::vector<bool>{false, false, true, true}));

  const auto b = tokens_of({"No", ",", " Xining"}, true);
  const ClaimPartition pb{{{0, 1, 2}, {3}}, true};
  EXPECT_EQ(content_token_mask(b, pb), (std::vector<bool>{false, false, true, false}));
}

TEST(Aggregate, UsesContentTokensAndSkipsEosClaim) {
  const auto s = tokens_of({" the", " city", " of", ",", " Paris"}, true);
  const ClaimPartition p{{{0, 1}, {2, 3}, {4}, {5}}, true};
  const auto mask = content_token_mask(s, p);
  const TokenScoreVector tv{"x", {0.9, 0.5, 0.2, 0.4, 0.7, 0.01}, false};
  const auto out = aggregate(tv, p, mask, A::Mean);
  ASSERT_EQ(out.values.size(), 3u);
  EXPECT_DOUBLE_EQ(out.values[0], 0.5);           // "the" masked
  EXPECT_DOUBLE_EQ(out.values[1], (0.2 + 0.4) / 2);  // all stopwords: fall back to every token
  EXPECT_DOUBLE_EQ(out.values[2], 0.7);
  EXPECT_FALSE(out.higher_is_more_uncertain);
}

TEST(Aggregate, LengthMismatchIsAnError) {
  const TokenScoreVector tv{"x", {0.1, 0.2}, true};
  EXPECT_THROW(aggregate(tv, {{{0, 1, 2}}, false}, {true, true, true}, A::Mean), DataError);
}

TEST(AggregateProperty, Inequalities) {
  testing::Rng rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    std::vector<double> v(testing::uniform(rng, 1, 25));
    for (auto& x : v) x = 1.0 - u(rng);  // (0, 1]
    const double mean = aggregate_values(v, A::Mean);
    const double geo = aggregate_values(v, A::GeoMean);
    const double prod = aggregate_values(v, A::Product);
    const double mx = aggregate_values(v, A::Max);
    const double mn = *std::min_element(v.begin(), v.end());
    ASSERT_LE(geo, mean * (1 + 1e-12));
    ASSERT_LE(prod, geo * (1 + 1e-12));
    ASSERT_LE(prod, mn * (1 + 1e-12));
    ASSERT_LE(mean, mx);
    ASSERT_GE(geo, mn * (1 - 1e-12));
  }
}

}  // namespace
}  // namespace much
