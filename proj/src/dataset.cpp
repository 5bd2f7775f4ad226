#include "much/dataset.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "much/error.hpp"
#include "much/jsonl.hpp"
#include "much/persist.hpp"
#include "much/published_adapter.hpp"
#include "much/segmenter.hpp"

namespace much {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(DatasetFormat f) noexcept {
  return f == DatasetFormat::Canonical ? "canonical" : "published";
}

DatasetFormat parse_dataset_format(std::string_view s) {
  if (s == "canonical") return DatasetFormat::Canonical;
  if (s == "published") return DatasetFormat::Published;
  throw UsageError("unknown dataset format '" + std::string(s) + "' (expected canonical or published)");
}

std::size_t Dataset::clean_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [](const auto& v) { return v.empty(); }));
}

fs::path cache_dir() {
  if (const char* env = std::getenv("MUCH_CACHE_DIR"); env && *env) return fs::path(env);
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "much";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "much";
  return fs::temp_directory_path() / "much-cache";
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(p.string(), "cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Returns the parse error for a stored partition or annotation that does
// not line up with the sample, or an empty string.
std::string check_stored(const LabeledSample& rec) {
  if (!rec.partition) return {};
  if (auto err = check_partition(*rec.partition, rec.sample.tokens); !err.empty()) {
    return "stored partition: " + err;
  }
  const auto n = rec.partition->labeled_count();
  for (const auto& [name, set] : rec.annotations) {
    if (set.labels.size() != n) {
      return "annotations." + name + " has " + std::to_string(set.labels.size()) + " labels for " +
             std::to_string(n) + " claims";
    }
  }
  return {};
}

void load_lines(const fs::path& file, std::string_view content, DatasetFormat format, Dataset& out) {
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    const auto line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      LabeledSample rec;
      if (format == DatasetFormat::Canonical) {
        rec = io::parse(line);
      } else {
        rec = published::from_json(json::parse(line));
      }
      if (auto err = check_stored(rec); !err.empty()) throw DataError(err);
      if (rec.partition && rec.stored_partition_hash &&
          *rec.stored_partition_hash != partition_hash(*rec.partition)) {
        out.warnings.push_back(file.string() + ":" + std::to_string(row) + ": stored partition_hash does not match the stored partition");
      }
      out.violations.push_back(validate_sample(rec.sample));
      out.records.push_back(std::move(rec));
    } catch (const DataError& e) {
      out.errors.push_back({file.string(), row, e.what()});
    } catch (const json::exception& e) {
      out.errors.push_back({file.string(), row, e.what()});
    }
  }
}

// Published files are converted once and kept as canonical JSONL under the
// cache directory, keyed by the source content hash.
std::string canonical_content(const fs::path& file, const std::string& raw, Dataset& out) {
  const auto key = sha256_hex(raw);
  const auto cached = cache_dir() / ("published-" + key.substr(0, 32) + ".jsonl");
  std::error_code ec;
  if (fs::exists(cached, ec)) return read_file(cached);

  Dataset converted;
  load_lines(file, raw, DatasetFormat::Published, converted);
  if (!converted.errors.empty()) return {};  // report errors against the source file
  std::string body;
  for (const auto& rec : converted.records) body += io::serialize(rec) + "\n";
  try {
    fs::create_directories(cached.parent_path());
    const auto tmp = cached.string() + ".tmp";
    std::ofstream(tmp, std::ios::binary) << body;
    fs::rename(tmp, cached);
  } catch (const std::exception& e) {
    out.warnings.push_back(std::string("could not write cache: ") + e.what());
  }
  return body;
}

}  // namespace

Dataset load_dataset(const fs::path& path, DatasetFormat format) {
  Dataset out;
  std::error_code ec;
  if (!fs::exists(path, ec)) throw IoError(path.string(), "no such file or directory");
  std::vector<fs::path> files;
  if (fs::is_directory(path, ec)) {
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) out.warnings.push_back(path.string() + ": no .jsonl files found");
  } else {
    files.push_back(path);
  }

  for (const auto& f : files) {
    const auto raw = read_file(f);
    if (format == DatasetFormat::Published) {
      const auto canon = canonical_content(f, raw, out);
      if (!canon.empty() || raw.find_first_not_of(" \t\r\n") == std::string::npos) {
        load_lines(f, canon, DatasetFormat::Canonical, out);
        continue;
      }
    }
    load_lines(f, raw, format, out);
  }
  return out;
}

ClaimPartition partition_for(const LabeledSample& record, const StopSet& stops, bool resegment) {
  if (record.partition && !resegment) return *record.partition;
  return segment(record.sample, stops);
}

std::optional<AnnotationSet> resolve_labels(const LabeledSample& record, std::string_view annotator) {
  if (annotator != "auto") {
    auto it = record.annotations.find(std::string(annotator));
    if (it == record.annotations.end()) return std::nullopt;
    return it->second;
  }
  if (record.annotations.empty()) return std::nullopt;
  const auto& first = record.annotations.begin()->second;
  for (const auto& [name, set] : record.annotations) {
    if (set.labels != first.labels) return std::nullopt;
  }
  return AnnotationSet{"resolved", first.labels};
}

std::string_view to_string(FilterReason r) noexcept {
  switch (r) {
    case FilterReason::AnnotatorMismatch: return "ANNOTATOR_MISMATCH";
    case FilterReason::MissingEos: return "MISSING_EOS";
    case FilterReason::SampledOutsideTop24: return "SAMPLED_OUTSIDE_TOP24";
  }
  return "UNKNOWN";
}

FilterOutcome& FilterOutcome::merge(const FilterOutcome& other) {
  reasons.insert(other.reasons.begin(), other.reasons.end());
  return *this;
}

FilterOutcome filter_agreement(const ClaimPartition& partition, const AnnotationSet& a,
                               const AnnotationSet& b) {
  const auto n = partition.labeled_count();
  if (a.labels.size() != n || b.labels.size() != n) {
    throw DataError("annotations misaligned with the partition: " + std::to_string(a.labels.size()) +
                    " and " + std::to_string(b.labels.size()) + " labels for " + std::to_string(n) +
                    " claims");
  }
  FilterOutcome out;
  if (a.labels != b.labels) out.reasons.insert(FilterReason::AnnotatorMismatch);
  return out;
}

FilterOutcome filter_wellformedness(const Sample& sample) {
  FilterOutcome out;
  if (!sample.ends_with_eos()) out.reasons.insert(FilterReason::MissingEos);
  for (const auto& tok : sample.tokens) {
    const bool found = std::any_of(tok.candidates.begin(), tok.candidates.end(),
                                   [&](const Candidate& c) { return c.token_id == tok.token_id; });
    if (!found) {
      out.reasons.insert(FilterReason::SampledOutsideTop24);
      break;
    }
  }
  return out;
}

std::vector<LabeledSample> apply_filters(const std::vector<LabeledSample>& records,
                                         const FilterConfig& config, const StopSet& stops,
                                         FilterSummary& summary) {
  std::vector<LabeledSample> kept;
  for (const auto& rec : records) {
    ++summary.input;
    const auto partition = partition_for(rec, stops, config.resegment);
    summary.claims_in += partition.labeled_count();

    FilterOutcome outcome = filter_wellformedness(rec.sample);
    auto a = rec.annotations.find(config.annotator_a);
    auto b = rec.annotations.find(config.annotator_b);
    if (a == rec.annotations.end() || b == rec.annotations.end()) {
      outcome.reasons.insert(FilterReason::AnnotatorMismatch);
    } else {
      outcome.merge(filter_agreement(partition, a->second, b->second));
    }

    for (auto r : outcome.reasons) ++summary.by_reason[r];
    if (outcome.kept()) {
      ++summary.kept;
      summary.claims_kept += partition.labeled_count();
      kept.push_back(rec);
    } else {
      summary.dropped.emplace_back(rec.sample.id, outcome);
    }
  }
  return kept;
}

double CompositionTable::cell(Language lang, const std::string& model) const {
  auto it = counts.find({lang, model});
  return (it == counts.end() || total == 0) ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

double CompositionTable::language_share(Language lang) const {
  double s = 0.0;
  for (const auto& m : models) s += cell(lang, m);
  return s;
}

double CompositionTable::model_share(const std::string& model) const {
  double s = 0.0;
  for (auto lang : {Language::EN, Language::FR, Language::ES, Language::DE}) s += cell(lang, model);
  return s;
}

CompositionTable dataset_composition(const std::vector<LabeledSample>& records) {
  CompositionTable t;
  std::set<std::string> models;
  for (const auto& r : records) {
    ++t.counts[{r.sample.language, r.sample.model}];
    models.insert(r.sample.model);
    ++t.total;
  }
  t.models.assign(models.begin(), models.end());
  return t;
}

}  // namespace much
