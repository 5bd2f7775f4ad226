#pragma once

// Shared domain types. Everything here is a plain value type; once built
// it is never mutated, so instances can be shared freely across threads.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace much {

// Number of candidates stored per generated token in the dataset.
inline constexpr std::size_t kCandidateCount = 24;

enum class Language { EN, FR, ES, DE };

std::string_view to_string(Language lang) noexcept;
// Accepts "EN"/"en"/"english" style spellings. Throws DataError otherwise.
Language parse_language(std::string_view s);

struct Candidate {
  std::int64_t token_id = 0;
  double logit = 0.0;

  bool operator==(const Candidate&) const = default;
};

struct TokenRecord {
  std::string surface;          // decoded text of the token, UTF-8
  std::size_t char_start = 0;   // code-point offset into the generation, inclusive
  std::size_t char_end = 0;     // exclusive
  std::int64_t token_id = 0;    // id of the sampled token
  int sampled_rank = 0;         // index into candidates, -1 when the sample fell outside them
  std::vector<Candidate> candidates;  // sorted by logit, descending
  bool is_eos = false;

  bool operator==(const TokenRecord&) const = default;
};

struct Sample {
  std::string id;
  Language language = Language::EN;
  std::string model;
  double temperature = 0.0;
  std::string question;
  std::string generation_text;
  std::vector<TokenRecord> tokens;

  bool operator==(const Sample&) const = default;

  bool ends_with_eos() const noexcept { return !tokens.empty() && tokens.back().is_eos; }
};

using Claim = std::vector<std::size_t>;

// Ordered claims of token indices. When the sample ends with an EOS token,
// the last claim holds exactly that token and carries no label.
struct ClaimPartition {
  std::vector<Claim> claims;
  bool eos_claim = false;

  bool operator==(const ClaimPartition&) const = default;

  std::size_t labeled_count() const noexcept {
    return claims.size() - (eos_claim && !claims.empty() ? 1 : 0);
  }
  std::span<const Claim> labeled() const noexcept {
    return std::span<const Claim>(claims).first(labeled_count());
  }
  std::size_t token_count() const noexcept;
};

// Stable short digest of a partition, stored next to annotations so that
// drift in the segmenter is detectable.
std::string partition_hash(const ClaimPartition& partition);

enum class Label : std::int8_t { NonFactual = -1, Factual = 1 };

// Throws DataError unless value is -1 or +1.
Label label_from_int(long value);
inline int to_int(Label l) noexcept { return static_cast<int>(l); }

struct AnnotationSet {
  std::string annotator;
  std::vector<Label> labels;  // one per labeled (non-EOS) claim

  bool operator==(const AnnotationSet&) const = default;
};

struct TokenScoreVector {
  std::string scorer;
  std::vector<double> values;  // one per token, EOS included
  bool higher_is_more_uncertain = false;

  bool operator==(const TokenScoreVector&) const = default;
};

enum class AggregatorKind { Mean, Max, GeoMean, Product };

std::string_view to_string(AggregatorKind kind) noexcept;
AggregatorKind parse_aggregator(std::string_view s);
inline constexpr AggregatorKind kAllAggregators[] = {AggregatorKind::Mean, AggregatorKind::Max,
                                                     AggregatorKind::GeoMean,
                                                     AggregatorKind::Product};

struct ClaimScoreSet {
  std::string scorer;
  AggregatorKind aggregator = AggregatorKind::Product;
  std::vector<double> values;  // one per labeled claim
  bool higher_is_more_uncertain = false;

  bool operator==(const ClaimScoreSet&) const = default;
};

struct ScorerConfig {
  int entropy_top_k = 24;
};

// A sample together with what was stored alongside it on disk.
struct LabeledSample {
  Sample sample;
  std::optional<ClaimPartition> partition;
  std::optional<std::string> stored_partition_hash;
  std::map<std::string, AnnotationSet> annotations;

  bool operator==(const LabeledSample&) const = default;
};

}  // namespace much
