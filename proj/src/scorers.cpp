#include "much/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "much/error.hpp"

namespace much {

std::string_view to_string(LogitKind kind) noexcept {
  return kind == LogitKind::Raw ? "raw" : "logprob";
}

LogitKind parse_logit_kind(std::string_view s) {
  if (s == "raw") return LogitKind::Raw;
  if (s == "logprob") return LogitKind::LogProb;
  throw UsageError("unknown logit kind '" + std::string(s) + "' (expected raw or logprob)");
}

std::vector<double> softmax_over_candidates(std::span<const double> logits, std::size_t top_k) {
  if (top_k < 1 || top_k > logits.size()) {
    throw std::invalid_argument("top_k must be in [1, " + std::to_string(logits.size()) + "]");
  }
  const auto head = logits.first(top_k);
  for (double v : head) {
    if (!std::isfinite(v)) throw DataError("non-finite logit");
  }
  const double m = *std::max_element(head.begin(), head.end());
  std::vector<double> p(top_k);
  double z = 0.0;
  for (std::size_t i = 0; i < top_k; ++i) {
    p[i] = std::exp(head[i] - m);
    z += p[i];
  }
  for (auto& v : p) v /= z;
  return p;
}

void check_scorer_config(const ScorerConfig& config) {
  if (config.entropy_top_k < 1 || config.entropy_top_k > static_cast<int>(kCandidateCount)) {
    throw UsageError("entropy top-k must be in [1, 24], got " + std::to_string(config.entropy_top_k));
  }
}

bool is_canonical_delta(int delta) noexcept { return delta == 5 || delta == 10 || delta == 24; }

namespace {

std::vector<double> logits_of(const TokenRecord& tok) {
  std::vector<double> out(tok.candidates.size());
  std::transform(tok.candidates.begin(), tok.candidates.end(), out.begin(),
                 [](const Candidate& c) { return c.logit; });
  return out;
}

std::size_t checked_rank(const Sample& sample, std::size_t i) {
  const auto& tok = sample.tokens[i];
  if (tok.sampled_rank < 0 || static_cast<std::size_t>(tok.sampled_rank) >= tok.candidates.size()) {
    throw DataError("sample " + sample.id + ", token " + std::to_string(i) +
                    ": sampled token is not among the stored candidates");
  }
  return static_cast<std::size_t>(tok.sampled_rank);
}

void require_candidates(const Sample& sample, std::size_t i, std::size_t needed) {
  if (sample.tokens[i].candidates.size() < needed) {
    throw DataError("sample " + sample.id + ", token " + std::to_string(i) + ": needs " +
                    std::to_string(needed) + " candidates, has " +
                    std::to_string(sample.tokens[i].candidates.size()));
  }
}

template <typename PickRank>
TokenScoreVector likelihood_scores(const Sample& sample, LogitKind kind, const char* name,
                                   PickRank pick) {
  TokenScoreVector out{name, {}, false};
  out.values.reserve(sample.tokens.size());
  for (std::size_t i = 0; i < sample.tokens.size(); ++i) {
    require_candidates(sample, i, 1);
    const std::size_t rank = pick(i);
    const auto logits = logits_of(sample.tokens[i]);
    if (kind == LogitKind::LogProb) {
      if (!std::isfinite(logits[rank])) throw DataError("non-finite log-probability");
      out.values.push_back(std::exp(logits[rank]));
    } else {
      out.values.push_back(softmax_over_candidates(logits, logits.size())[rank]);
    }
  }
  return out;
}

}  // namespace

TokenScoreVector token_likelihood(const Sample& sample, LogitKind kind) {
  return likelihood_scores(sample, kind, kTokenLikelihood,
                           [&](std::size_t i) { return checked_rank(sample, i); });
}

TokenScoreVector max_likelihood(const Sample& sample, LogitKind kind) {
  return likelihood_scores(sample, kind, kMaxLikelihood, [](std::size_t) { return std::size_t{0}; });
}

TokenScoreVector token_entropy(const Sample& sample, const ScorerConfig& config) {
  check_scorer_config(config);
  const auto k = static_cast<std::size_t>(config.entropy_top_k);
  TokenScoreVector out{kTokenEntropy, {}, true};
  out.values.reserve(sample.tokens.size());
  for (std::size_t i = 0; i < sample.tokens.size(); ++i) {
    require_candidates(sample, i, k);
    const auto p = softmax_over_candidates(logits_of(sample.tokens[i]), k);
    double h = 0.0;
    for (double v : p) {
      if (v > 0.0) h -= v * std::log(v);
    }
    // Rounding can push the uniform case a few ulps past ln(k).
    out.values.push_back(std::clamp(h, 0.0, std::log(static_cast<double>(k))));
  }
  return out;
}

bool is_native_scorer(std::string_view name) noexcept {
  return name == kTokenLikelihood || name == kMaxLikelihood || name == kTokenEntropy;
}

std::string native_scorer_label(std::string_view name, const ScorerConfig& config) {
  if (name == kTokenEntropy) return std::string(name) + "_" + std::to_string(config.entropy_top_k);
  return std::string(name);
}

TokenScoreVector run_native_scorer(std::string_view name, const Sample& sample,
                                   const ScoringOptions& options) {
  TokenScoreVector v;
  if (name == kTokenLikelihood) {
    v = token_likelihood(sample, options.logit_kind);
  } else if (name == kMaxLikelihood) {
    v = max_likelihood(sample, options.logit_kind);
  } else if (name == kTokenEntropy) {
    v = token_entropy(sample, options.config);
  } else {
    throw UsageError("unknown scorer '" + std::string(name) + "'");
  }
  v.scorer = native_scorer_label(name, options.config);
  return v;
}

}  // namespace much
