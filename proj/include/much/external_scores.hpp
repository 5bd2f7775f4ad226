#pragma once

// Token-level score files: JSONL rows of
//   {"sample_id": ..., "scorer": ..., "values": [...]}
// This is both what `much score` writes and how precomputed scores of
// model-based methods (CCP, SAR) come in. Orientation lives in an optional
// sidecar "<file>.meta.json" or is passed by the caller.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "much/types.hpp"

namespace much {

struct ExternalScoreMeta {
  std::string scorer_name;
  std::map<std::string, std::string> hyperparams;
  bool higher_is_more_uncertain = true;

  bool operator==(const ExternalScoreMeta&) const = default;
};

// sample id -> token count, used to check incoming rows.
using TokenCounts = std::unordered_map<std::string, std::size_t>;

// Reads "<file>.meta.json" when present. Returns nullopt otherwise.
std::optional<ExternalScoreMeta> read_sidecar_meta(const std::filesystem::path& file);
std::string sidecar_json(const ExternalScoreMeta& meta);
void write_sidecar_meta(const std::filesystem::path& file, const ExternalScoreMeta& meta);

// Rows whose "scorer" field names a different scorer than meta.scorer_name
// are skipped, so a file holding several methods can be read per method.
// Throws DataError("<file>:<row>: ...") on unknown ids, length mismatches,
// non-finite values, duplicate ids and malformed rows.
std::map<std::string, TokenScoreVector> ingest_external_scores(const std::filesystem::path& file,
                                                               const ExternalScoreMeta& meta,
                                                               const TokenCounts& known);

// Rows sorted by sample id.
std::string token_scores_jsonl(const std::map<std::string, TokenScoreVector>& scores);
void write_token_scores(const std::filesystem::path& file,
                        const std::map<std::string, TokenScoreVector>& scores);

}  // namespace much
