#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "much/stopwords.hpp"
#include "much/types.hpp"
#include "much/validate.hpp"

namespace much {

enum class DatasetFormat { Canonical, Published };

std::string_view to_string(DatasetFormat f) noexcept;
DatasetFormat parse_dataset_format(std::string_view s);

struct LoadError {
  std::string file;
  std::size_t row = 0;
  std::string message;
};

struct Dataset {
  std::vector<LabeledSample> records;
  std::vector<std::vector<Violation>> violations;  // parallel to records
  std::vector<LoadError> errors;                   // rows that could not be parsed
  std::vector<std::string> warnings;

  std::size_t clean_count() const noexcept;
};

// Loads a JSONL file, or every *.jsonl file of a directory in name order.
// Rows that fail to parse are collected in `errors`; rows that parse but
// break a sample invariant are kept and their violations recorded, so the
// quality filters can see them. Throws IoError if the path is unreadable.
Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format = DatasetFormat::Canonical);

// Directory for derived data (MUCH_CACHE_DIR, else $XDG_CACHE_HOME/much,
// else ~/.cache/much).
std::filesystem::path cache_dir();

// The partition a record's labels refer to: the stored one unless
// `resegment` is set or none was stored.
ClaimPartition partition_for(const LabeledSample& record, const StopSet& stops, bool resegment);

// "auto" picks the label vector all attached annotators agree on, and
// returns nullopt when they disagree. Any other name selects that
// annotator, nullopt when absent.
std::optional<AnnotationSet> resolve_labels(const LabeledSample& record, std::string_view annotator);

enum class FilterReason { AnnotatorMismatch, MissingEos, SampledOutsideTop24 };
std::string_view to_string(FilterReason r) noexcept;

struct FilterOutcome {
  std::set<FilterReason> reasons;

  bool kept() const noexcept { return reasons.empty(); }
  FilterOutcome& merge(const FilterOutcome& other);
  bool operator==(const FilterOutcome&) const = default;
};

// Kept iff both annotators give every claim the same label. Throws
// DataError when either set does not have one label per labeled claim.
FilterOutcome filter_agreement(const ClaimPartition& partition, const AnnotationSet& a,
                               const AnnotationSet& b);

FilterOutcome filter_wellformedness(const Sample& sample);

struct FilterSummary {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t claims_in = 0;
  std::size_t claims_kept = 0;
  std::map<FilterReason, std::size_t> by_reason;  // a sample counts once per reason it fails
  std::vector<std::pair<std::string, FilterOutcome>> dropped;
};

struct FilterConfig {
  std::string annotator_a = "gpt-4o";
  std::string annotator_b = "gpt-4.1";
  bool resegment = false;
};

// Applies all three filters to every record; returns kept records in
// input order. A record missing either annotator counts as a mismatch.
std::vector<LabeledSample> apply_filters(const std::vector<LabeledSample>& records,
                                         const FilterConfig& config, const StopSet& stops,
                                         FilterSummary& summary);

// Share of samples per (language, model) cell, with row and column sums.
struct CompositionTable {
  std::vector<std::string> models;  // sorted
  std::map<std::pair<Language, std::string>, std::size_t> counts;
  std::size_t total = 0;

  double cell(Language lang, const std::string& model) const;
  double language_share(Language lang) const;
  double model_share(const std::string& model) const;
};

CompositionTable dataset_composition(const std::vector<LabeledSample>& records);

}  // namespace much
