// Offline acceptance gate. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Tolerances are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "much/agreement.hpp"
#include "much/aggregation.hpp"
#include "much/metrics.hpp"
#include "much/report.hpp"
#include "much/scorers.hpp"
#include "much/segmenter.hpp"
#include "support/fixture.hpp"
#include "support/oracles.hpp"

namespace {

using namespace much;
using Clock = std::chrono::steady_clock;

constexpr std::size_t kPartitionSamples = 10'000;
constexpr double kPartitionSeconds = 10.0;
constexpr std::size_t kAucInstances = 500;
constexpr std::size_t kAucMaxN = 300;
constexpr double kAucTolerance = 1e-12;
constexpr double kKappaTolerance = 0.001;
constexpr std::size_t kScorerSamples = 2'000;
constexpr double kShiftTolerance = 1e-12;
constexpr std::size_t kAggregatorClaims = 10'000;
constexpr double kInequalitySlack = 1e-12;  // relative
constexpr std::size_t kDeterminismSamples = 100;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Independent of check_partition: rebuilds the token -> claim map.
std::string partition_defect(const ClaimPartition& p, const Sample& s) {
  const std::size_t n = s.tokens.size();
  std::size_t next = 0;
  for (std::size_t c = 0; c < p.claims.size(); ++c) {
    if (p.claims[c].empty()) return fmt::format("claim {} is empty", c);
    for (auto t : p.claims[c]) {
      if (t != next) return fmt::format("claim {} holds token {} where {} was expected", c, t, next);
      ++next;
    }
  }
  if (next != n) return fmt::format("{} of {} tokens covered", next, n);
  if (s.ends_with_eos()) {
    if (!p.eos_claim || p.claims.back() != Claim{n - 1}) return "EOS token not isolated in the last claim";
  } else if (p.eos_claim) {
    return "eos_claim set without an EOS token";
  }
  return {};
}

Outcome partition_properties() {
  testing::Rng rng(20240601);
  std::vector<Sample> samples;
  samples.reserve(kPartitionSamples);
  for (std::size_t i = 0; i < kPartitionSamples; ++i) {
    samples.push_back(testing::random_sample(rng, std::to_string(i), {0, 80, 0.7}));
  }
  const auto t0 = Clock::now();
  std::vector<ClaimPartition> parts;
  parts.reserve(samples.size());
  for (const auto& s : samples) parts.push_back(segment(s));
  const double secs = seconds_since(t0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (auto d = partition_defect(parts[i], samples[i]); !d.empty()) {
      return {false, fmt::format("sample {}: {}", i, d)};
    }
  }
  return {secs < kPartitionSeconds, fmt::format("{} samples, {:.3f}s (limit {}s)", samples.size(), secs,
                                                kPartitionSeconds)};
}

Outcome auc_oracles() {
  testing::Rng rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0;
  for (std::size_t k = 0; k < kAucInstances; ++k) {
    const std::size_t n = testing::uniform(rng, 2, kAucMaxN);
    const bool coarse = testing::chance(rng, 0.5);
    std::vector<double> s(n);
    std::vector<Label> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      l[i] = testing::chance(rng, 0.35) ? Label::NonFactual : Label::Factual;
      s[i] = g(rng) + (l[i] == Label::NonFactual ? 0.7 : 0.0);
      if (coarse) s[i] = std::round(s[i] * 2) / 2;
    }
    l[0] = Label::NonFactual;
    l[1] = Label::Factual;
    worst = std::max(worst, std::abs(roc_auc(s, l, true) - testing::pair_auc_oracle(s, l)));
    worst = std::max(worst, std::abs(pr_auc(s, l, true) - testing::average_precision_oracle(s, l)));
  }
  return {worst <= kAucTolerance,
          fmt::format("{} instances, max |diff| {:.3g} (tol {:g})", kAucInstances, worst, kAucTolerance)};
}

Outcome kappa_closed_form() {
  struct Case {
    const char* name;
    Confusion c;
    double expected;
  };
  const Case cases[] = {{"3a", {{{10012, 1162}, {2680, 20291}}}, 0.753},
                        {"3c", {{{192, 37}, {22, 616}}}, 0.821},
                        {"3d", {{{196, 33}, {17, 621}}}, 0.848},
                        {"3e", {{{201, 13}, {12, 641}}}, 0.922}};
  Outcome out;
  for (const auto& c : cases) {
    const double k = agreement_from_confusion(c.c).kappa;
    const bool ok = std::abs(k - c.expected) <= kKappaTolerance;
    out.pass = out.pass && ok;
    out.detail += fmt::format("{}={:.4f}{} ", c.name, k, ok ? "" : "!");
  }
  out.detail += fmt::format("(tol {:g})", kKappaTolerance);
  return out;
}

Outcome scorer_math() {
  testing::Rng rng(99);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  double worst_shift = 0;
  std::size_t tokens = 0;
  for (std::size_t i = 0; i < kScorerSamples; ++i) {
    const auto s = testing::random_sample(rng, std::to_string(i), {1, 20, 0.9});
    const int delta = static_cast<int>(testing::uniform(rng, 1, 24));
    const auto tl = token_likelihood(s);
    const auto ml = max_likelihood(s);
    const auto te = token_entropy(s, {delta});
    for (std::size_t t = 0; t < s.tokens.size(); ++t) {
      if (!(tl.values[t] <= ml.values[t])) return {false, fmt::format("TL > ML at sample {} token {}", i, t)};
      if (!(te.values[t] >= 0.0 && te.values[t] <= std::log(delta))) {
        return {false, fmt::format("entropy {} outside [0, ln {}]", te.values[t], delta)};
      }
    }
    auto shifted = s;
    const double c = shift(rng);
    for (auto& tok : shifted.tokens) {
      for (auto& cand : tok.candidates) cand.logit += c;
    }
    const auto tl2 = token_likelihood(shifted);
    const auto ml2 = max_likelihood(shifted);
    const auto te2 = token_entropy(shifted, {delta});
    for (std::size_t t = 0; t < s.tokens.size(); ++t) {
      worst_shift = std::max({worst_shift, std::abs(tl.values[t] - tl2.values[t]),
                              std::abs(ml.values[t] - ml2.values[t]), std::abs(te.values[t] - te2.values[t])});
    }
    tokens += s.tokens.size();
  }
  return {worst_shift <= kShiftTolerance,
          fmt::format("{} tokens; entropy in [0, ln delta], TL <= ML; max shift diff {:.3g} (tol {:g})", tokens,
                      worst_shift, kShiftTolerance)};
}

Outcome aggregator_inequalities() {
  testing::Rng rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < kAggregatorClaims; ++i) {
    std::vector<double> v(testing::uniform(rng, 1, 40));
    for (auto& x : v) x = 1.0 - u(rng);  // (0, 1]
    if (testing::chance(rng, 0.1)) v[0] = 1.0;
    const double mean = aggregate_values(v, AggregatorKind::Mean);
    const double geo = aggregate_values(v, AggregatorKind::GeoMean);
    const double prod = aggregate_values(v, AggregatorKind::Product);
    if (geo > mean * (1 + kInequalitySlack)) return {false, fmt::format("claim {}: GEOMEAN {} > MEAN {}", i, geo, mean)};
    if (prod > geo * (1 + kInequalitySlack)) return {false, fmt::format("claim {}: PRODUCT {} > GEOMEAN {}", i, prod, geo)};
  }
  return {true, fmt::format("{} claims: GEOMEAN <= MEAN, PRODUCT <= GEOMEAN", kAggregatorClaims)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto records = testing::random_dataset(kDeterminismSamples, 1234, 0.9);
  PipelineOptions o;
  o.native_scorers = {kTokenLikelihood, kMaxLikelihood, kTokenEntropy};
  o.eval.group_by = {GroupKey::Language, GroupKey::Model};
  testing::TempDir a("accept-a");
  testing::TempDir b("accept-b");
  o.threads = 4;
  persist_results(run_evaluation(records, o), o.curve_aggregator, a.path());
  o.threads = 1;
  persist_results(run_evaluation(records, o), o.curve_aggregator, b.path());
  const auto ma = slurp(a / "manifest.json");
  const auto mb = slurp(b / "manifest.json");
  const bool same = !ma.empty() && ma == mb;
  return {same, fmt::format("{} samples, manifest sha256 {} vs {}", kDeterminismSamples, sha256_hex(ma).substr(0, 12),
                            sha256_hex(mb).substr(0, 12))};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"partition-properties", partition_properties},
      {"auc-oracle-equivalence", auc_oracles},
      {"kappa-closed-form", kappa_closed_form},
      {"scorer-math", scorer_math},
      {"aggregator-inequalities", aggregator_inequalities},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
