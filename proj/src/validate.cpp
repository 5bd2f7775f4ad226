#include "much/validate.hpp"

#include <algorithm>
#include <cmath>

#include "much/error.hpp"
#include "much/text.hpp"

namespace much {

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::CandidateCount: return "candidate-count";
    case ViolationKind::CandidateOrder: return "candidate-order";
    case ViolationKind::NonFiniteLogit: return "non-finite-logit";
    case ViolationKind::SampledRank: return "sampled-rank";
    case ViolationKind::SurfaceMismatch: return "surface-mismatch";
    case ViolationKind::Contiguity: return "contiguity";
    case ViolationKind::Coverage: return "coverage";
    case ViolationKind::EosOffsets: return "eos-offsets";
    case ViolationKind::EosNotLast: return "eos-not-last";
    case ViolationKind::MissingEos: return "missing-eos";
  }
  return "unknown";
}

namespace {

void check_candidates(const TokenRecord& tok, std::size_t i, std::vector<Violation>& out) {
  if (tok.candidates.size() != kCandidateCount) {
    out.push_back({ViolationKind::CandidateCount, i,
                   "expected 24 candidates, found " + std::to_string(tok.candidates.size())});
  }
  for (std::size_t k = 0; k < tok.candidates.size(); ++k) {
    if (!std::isfinite(tok.candidates[k].logit)) {
      out.push_back({ViolationKind::NonFiniteLogit, i, "candidate " + std::to_string(k)});
      break;
    }
  }
  for (std::size_t k = 1; k < tok.candidates.size(); ++k) {
    if (tok.candidates[k].logit > tok.candidates[k - 1].logit) {
      out.push_back({ViolationKind::CandidateOrder, i,
                     "logit increases at candidate " + std::to_string(k)});
      break;
    }
  }
  const bool rank_ok = tok.sampled_rank >= 0 &&
                       static_cast<std::size_t>(tok.sampled_rank) < tok.candidates.size() &&
                       tok.candidates[static_cast<std::size_t>(tok.sampled_rank)].token_id ==
                           tok.token_id;
  if (!rank_ok) {
    out.push_back({ViolationKind::SampledRank, i,
                   "sampled token " + std::to_string(tok.token_id) + " not at rank " +
                       std::to_string(tok.sampled_rank) + " of its candidates"});
  }
}

}  // namespace

std::vector<Violation> validate_sample(const Sample& sample) {
  std::vector<Violation> out;
  std::u32string text;
  try {
    text = text::decode_utf8(sample.generation_text);
  } catch (const DataError& e) {
    out.push_back({ViolationKind::SurfaceMismatch, std::nullopt, e.what()});
    return out;
  }

  std::size_t expected_start = 0;
  std::size_t eos_count = 0;
  for (std::size_t i = 0; i < sample.tokens.size(); ++i) {
    const auto& tok = sample.tokens[i];
    check_candidates(tok, i, out);

    if (tok.is_eos) {
      ++eos_count;
      if (i + 1 != sample.tokens.size() || eos_count > 1) {
        out.push_back({ViolationKind::EosNotLast, i, "EOS token must be the last token"});
      }
      if (tok.char_start != text.size() || tok.char_end != text.size()) {
        out.push_back({ViolationKind::EosOffsets, i,
                       "EOS offsets must equal the text length " + std::to_string(text.size())});
      }
      continue;
    }

    if (tok.char_start != expected_start) {
      out.push_back({ViolationKind::Contiguity, i,
                     "token starts at " + std::to_string(tok.char_start) + ", expected " +
                         std::to_string(expected_start)});
    }
    if (tok.char_end < tok.char_start || tok.char_end > text.size()) {
      out.push_back({ViolationKind::SurfaceMismatch, i, "offsets out of range"});
    } else {
      std::u32string surface;
      try {
        surface = text::decode_utf8(tok.surface);
      } catch (const DataError& e) {
        surface.clear();
      }
      if (text.compare(tok.char_start, tok.char_end - tok.char_start, surface) != 0) {
        out.push_back({ViolationKind::SurfaceMismatch, i,
                       "surface does not match text at [" + std::to_string(tok.char_start) +
                           ", " + std::to_string(tok.char_end) + ")"});
      }
    }
    expected_start = tok.char_end;
  }

  if (expected_start != text.size()) {
    out.push_back({ViolationKind::Coverage, std::nullopt,
                   "tokens cover " + std::to_string(expected_start) + " of " +
                       std::to_string(text.size()) + " characters"});
  }
  if (!sample.ends_with_eos()) {
    out.push_back({ViolationKind::MissingEos, std::nullopt, "generation has no terminal EOS token"});
  }
  return out;
}

bool has_violation(const std::vector<Violation>& v, ViolationKind kind) noexcept {
  return std::any_of(v.begin(), v.end(), [kind](const Violation& x) { return x.kind == kind; });
}

void require_token_layout(const Sample& sample) {
  for (const auto& v : validate_sample(sample)) {
    switch (v.kind) {
      case ViolationKind::Contiguity:
      case ViolationKind::Coverage:
      case ViolationKind::SurfaceMismatch:
      case ViolationKind::EosOffsets:
      case ViolationKind::EosNotLast: {
        std::string where = v.token_index ? " at token " + std::to_string(*v.token_index) : "";
        throw DataError("sample " + sample.id + ": " + std::string(to_string(v.kind)) + where +
                        ": " + v.detail);
      }
      default:
        break;
    }
  }
}

}  // namespace much
