#pragma once

// Dataset-level hallucination statistics: how often an answer contains at
// least one non-factual claim, and how much of such an answer is wrong.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "much/agreement.hpp"
#include "much/dataset.hpp"
#include "much/types.hpp"

namespace much {

struct HallucinationCell {
  std::size_t samples = 0;
  std::size_t hallucinating = 0;           // samples with at least one -1 label
  double nonfactual_fraction_sum = 0.0;    // over hallucinating samples

  void add(const std::vector<Label>& labels);
  double rate() const noexcept;                      // NaN when empty
  double mean_nonfactual_fraction() const noexcept;  // NaN when no hallucinating sample
};

struct HallucinationStats {
  std::map<std::pair<std::string, Language>, HallucinationCell> cells;  // (model, language)
  std::map<std::string, HallucinationCell> by_model;
  std::map<Language, HallucinationCell> by_language;
  HallucinationCell overall;
  std::vector<std::string> skipped;  // samples without a resolvable label set
};

HallucinationStats hallucination_stats(const std::vector<LabeledSample>& records,
                                       std::string_view annotator = "auto");

nlohmann::json to_json(const HallucinationStats& stats);
// Model rows, language columns, plus row and column totals. Each cell
// shows the hallucination rate and, in brackets, the mean non-factual
// fraction among hallucinating samples.
std::string to_text(const HallucinationStats& stats);

nlohmann::json to_json(const CompositionTable& table);
std::string to_text(const CompositionTable& table);

nlohmann::json to_json(const AgreementReport& report);
std::string to_text(const AgreementReport& report, const std::string& a, const std::string& b);

}  // namespace much
