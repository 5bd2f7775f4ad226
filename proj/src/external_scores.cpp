#include "much/external_scores.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "much/error.hpp"
#include "much/jsonl.hpp"

namespace much {

using nlohmann::json;

namespace {

std::filesystem::path sidecar_path(const std::filesystem::path& file) {
  return std::filesystem::path(file.string() + ".meta.json");
}

}  // namespace

std::optional<ExternalScoreMeta> read_sidecar_meta(const std::filesystem::path& file) {
  const auto path = sidecar_path(file);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const auto j = json::parse(in);
    ExternalScoreMeta meta;
    meta.scorer_name = j.at("scorer_name").get<std::string>();
    meta.higher_is_more_uncertain = j.at("higher_is_more_uncertain").get<bool>();
    if (auto it = j.find("hyperparams"); it != j.end()) {
      for (const auto& [k, v] : it->items()) {
        meta.hyperparams[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    if (meta.scorer_name.empty()) throw DataError("scorer_name must not be empty");
    return meta;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string sidecar_json(const ExternalScoreMeta& meta) {
  json j{{"scorer_name", meta.scorer_name},
         {"higher_is_more_uncertain", meta.higher_is_more_uncertain},
         {"hyperparams", meta.hyperparams}};
  return j.dump(2) + "\n";
}

void write_sidecar_meta(const std::filesystem::path& file, const ExternalScoreMeta& meta) {
  const auto path = sidecar_path(file);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << sidecar_json(meta);
}

std::map<std::string, TokenScoreVector> ingest_external_scores(const std::filesystem::path& file,
                                                               const ExternalScoreMeta& meta,
                                                               const TokenCounts& known) {
  if (meta.scorer_name.empty()) throw UsageError("external scorer name must not be empty");
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError(file.string(), "cannot open score file");

  std::map<std::string, TokenScoreVector> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& what) {
      throw DataError(file.string() + ":" + std::to_string(row) + ": " + what);
    };
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("sample_id") || !j.contains("values")) {
      fail("row needs 'sample_id' and 'values'");
    }
    if (auto it = j.find("scorer"); it != j.end() && it->is_string() &&
                                    it->get<std::string>() != meta.scorer_name) {
      continue;
    }
    const auto id = j["sample_id"].is_string() ? j["sample_id"].get<std::string>() : j["sample_id"].dump();
    const auto k = known.find(id);
    if (k == known.end()) fail("unknown sample id '" + id + "'");
    const auto& values = j["values"];
    if (!values.is_array()) fail("'values' must be an array");
    if (values.size() != k->second) {
      fail("sample '" + id + "' has " + std::to_string(k->second) + " tokens but " +
           std::to_string(values.size()) + " scores");
    }
    TokenScoreVector v{meta.scorer_name, {}, meta.higher_is_more_uncertain};
    v.values.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!values[i].is_number() || !std::isfinite(values[i].get<double>())) {
        fail("sample '" + id + "': non-finite score at token " + std::to_string(i));
      }
      v.values.push_back(values[i].get<double>());
    }
    if (!out.emplace(id, std::move(v)).second) fail("duplicate sample id '" + id + "'");
  }
  return out;
}

std::string token_scores_jsonl(const std::map<std::string, TokenScoreVector>& scores) {
  std::string out;
  for (const auto& [id, v] : scores) {
    out += io::dump_line(json{{"sample_id", id}, {"scorer", v.scorer}, {"values", v.values}});
    out += '\n';
  }
  return out;
}

void write_token_scores(const std::filesystem::path& file,
                        const std::map<std::string, TokenScoreVector>& scores) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError(file.string(), "cannot open for writing");
  out << token_scores_jsonl(scores);
  if (!out) throw IoError(file.string(), "write failed");
}

}  // namespace much
