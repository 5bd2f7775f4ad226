#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "much/types.hpp"

namespace much {

enum class ViolationKind {
  CandidateCount,     // candidates.size() != 24
  CandidateOrder,     // logits increase somewhere in the list
  NonFiniteLogit,
  SampledRank,        // sampled token absent from candidates, or rank/id disagree
  SurfaceMismatch,    // text[char_start, char_end) != surface
  Contiguity,         // gap or overlap between consecutive tokens
  Coverage,           // tokens do not cover the whole generation text
  EosOffsets,         // EOS token not positioned at the end of the text
  EosNotLast,         // EOS token before the last position, or more than one
  MissingEos,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::optional<std::size_t> token_index;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

// Checks every Sample/TokenRecord invariant. An empty result means the
// sample is well formed. Never throws on bad data.
std::vector<Violation> validate_sample(const Sample& sample);

bool has_violation(const std::vector<Violation>& v, ViolationKind kind) noexcept;

// Invariants that the segmenter and scorers rely on: contiguity,
// coverage, surfaces and EOS placement. Throws DataError on the first.
void require_token_layout(const Sample& sample);

}  // namespace much
