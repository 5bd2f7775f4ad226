#pragma once

// Claim-level evaluation: metric sets, per-group breakdowns, and the
// score -> aggregate -> evaluate pipeline behind `much evaluate`.

#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "much/external_scores.hpp"
#include "much/metrics.hpp"
#include "much/persist.hpp"
#include "much/scorers.hpp"
#include "much/stopwords.hpp"
#include "much/types.hpp"

namespace much {

enum class GroupKey { Language, Model };
std::string_view to_string(GroupKey key) noexcept;
GroupKey parse_group_key(std::string_view s);

struct EvalOptions {
  double fpr_cap = 0.10;
  double prec_floor = 0.80;
  std::vector<GroupKey> group_by;
};

// Throws UsageError when fpr_cap is outside (0, 1) or prec_floor outside (0, 1].
void check_eval_options(const EvalOptions& options);

struct MetricSet {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  double roc_auc = std::numeric_limits<double>::quiet_NaN();
  double pr_auc = std::numeric_limits<double>::quiet_NaN();
  double tpr_at_fpr = std::numeric_limits<double>::quiet_NaN();
  double rec_at_prec = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // non-empty when the group has a single class

  bool ok() const noexcept { return error.empty(); }
};

// Never throws on a degenerate label set; the reason lands in `error`.
MetricSet compute_metrics(std::span<const double> scores, std::span<const Label> labels,
                          bool higher_is_more_uncertain, const EvalOptions& options);

struct EvalReport {
  std::string scorer;
  AggregatorKind aggregator = AggregatorKind::Product;
  bool higher_is_more_uncertain = true;
  double fpr_cap = 0.10;
  double prec_floor = 0.80;
  MetricSet overall;
  // group key name -> group value -> metrics, e.g. "language" -> "EN".
  std::map<std::string, std::map<std::string, MetricSet>> groups;
  std::vector<CurvePoint> roc;
  std::vector<CurvePoint> pr;
};

// Per-claim attributes used for grouping.
struct ClaimTags {
  Language language = Language::EN;
  std::string model;
};

EvalReport evaluate_claims(const std::string& scorer, AggregatorKind aggregator,
                           bool higher_is_more_uncertain, std::span<const double> scores,
                           std::span<const Label> labels, std::span<const ClaimTags> tags,
                           const EvalOptions& options, bool with_curves);

nlohmann::json to_json(const EvalReport& report);
// Aligned table with one row per report (and per group when present).
std::string summary_table(const std::vector<EvalReport>& reports);
// Two columns "y x" per line: TPR FPR for ROC, precision recall for PR.
std::string curve_text(const std::vector<CurvePoint>& points);

struct ExternalScoreSource {
  std::filesystem::path file;
  ExternalScoreMeta meta;
};

struct PipelineOptions {
  std::vector<std::string> native_scorers;  // base names, see scorers.hpp
  std::vector<ExternalScoreSource> external;
  ScoringOptions scoring;
  std::vector<AggregatorKind> aggregators{std::begin(kAllAggregators), std::end(kAllAggregators)};
  AggregatorKind curve_aggregator = AggregatorKind::Product;
  EvalOptions eval;
  std::string annotator = "auto";
  bool resegment = false;
  unsigned threads = 1;
  const StopSet* stops = nullptr;  // null selects the built-in set
};

struct PipelineResult {
  std::vector<EvalReport> reports;  // scorer order as configured, then aggregator order
  // scorer label -> sample id -> token scores
  std::map<std::string, std::map<std::string, TokenScoreVector>> token_scores;
  std::vector<std::pair<std::string, ClaimPartition>> partitions;  // evaluated samples, input order
  std::size_t samples_evaluated = 0;
  std::vector<std::string> skipped;  // ids without a resolvable label set
};

// Throws UsageError for unknown scorers or bad options, DataError when a
// sample's data cannot be scored (for example missing external scores).
PipelineResult run_evaluation(const std::vector<LabeledSample>& records, const PipelineOptions& options);

// reports/<scorer>_<agg>.json, reports/summary.txt,
// curves/<scorer>_<agg>_{roc,pr}.txt for the curve aggregator,
// scores/<scorer>.jsonl and partitions.jsonl.
std::vector<Artifact> evaluation_artifacts(const PipelineResult& result, AggregatorKind curve_aggregator);

Manifest persist_results(const PipelineResult& result, AggregatorKind curve_aggregator,
                         const std::filesystem::path& out_dir);

}  // namespace much
