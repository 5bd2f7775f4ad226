#pragma once

// Canonical on-disk format: one JSON object per line, tagged with
// "format": "much-io/1". Doubles are written with shortest round-trip
// precision, so parse(serialize(x)) == x exactly.

#include <string>
#include <string_view>

#include <json.hpp>

#include "much/types.hpp"

namespace much::io {

inline constexpr std::string_view kFormatVersion = "much-io/1";

nlohmann::json to_json(const TokenRecord& token);
nlohmann::json to_json(const Sample& sample);
nlohmann::json to_json(const LabeledSample& record);
nlohmann::json to_json(const ClaimPartition& partition);

// Throw DataError with a field path on schema violations.
TokenRecord token_from_json(const nlohmann::json& j);
Sample sample_from_json(const nlohmann::json& j);
LabeledSample labeled_from_json(const nlohmann::json& j);
ClaimPartition partition_from_json(const nlohmann::json& j, const Sample& sample);

std::string serialize(const LabeledSample& record);
LabeledSample parse(std::string_view line);

// Compact single-line dump used everywhere a JSONL row is written.
std::string dump_line(const nlohmann::json& j);

}  // namespace much::io
