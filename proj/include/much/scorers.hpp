#pragma once

#include <span>
#include <string>
#include <vector>

#include "much/types.hpp"

namespace much {

// How the stored candidate values are read.
//   Raw:     pre-softmax logits; probabilities are renormalised over the
//            stored candidates.
//   LogProb: log-probabilities over the full vocabulary; the likelihood
//            scorers use exp(value) directly, entropy still renormalises
//            over the top-delta candidates.
enum class LogitKind { Raw, LogProb };

std::string_view to_string(LogitKind kind) noexcept;
LogitKind parse_logit_kind(std::string_view s);

struct ScoringOptions {
  ScorerConfig config;
  LogitKind logit_kind = LogitKind::Raw;
};

// Probabilities over the first top_k candidates (which are the top_k
// largest), computed with max subtraction. Throws DataError on non-finite
// logits, std::invalid_argument when top_k is out of [1, logits.size()].
std::vector<double> softmax_over_candidates(std::span<const double> logits, std::size_t top_k);

// Throws UsageError unless 1 <= delta <= 24.
void check_scorer_config(const ScorerConfig& config);
bool is_canonical_delta(int delta) noexcept;

// Scorer names as used in file names and reports.
inline constexpr const char* kTokenLikelihood = "token_likelihood";
inline constexpr const char* kMaxLikelihood = "max_likelihood";
inline constexpr const char* kTokenEntropy = "token_entropy";

TokenScoreVector token_likelihood(const Sample& sample, LogitKind kind = LogitKind::Raw);
TokenScoreVector max_likelihood(const Sample& sample, LogitKind kind = LogitKind::Raw);
TokenScoreVector token_entropy(const Sample& sample, const ScorerConfig& config = {});

// Dispatch by base name ("token_likelihood", "max_likelihood",
// "token_entropy"). The returned vector's `scorer` field carries the
// full name, e.g. "token_entropy_24".
TokenScoreVector run_native_scorer(std::string_view name, const Sample& sample,
                                   const ScoringOptions& options);
bool is_native_scorer(std::string_view name) noexcept;
std::string native_scorer_label(std::string_view name, const ScorerConfig& config);

}  // namespace much
