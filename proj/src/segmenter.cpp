#include "much/segmenter.hpp"

#include <algorithm>

#include "much/error.hpp"
#include "much/text.hpp"
#include "much/validate.hpp"

namespace much {

std::vector<std::size_t> find_claim_starts(std::span<const WordSpan> words, const StopSet& stops) {
  std::vector<std::size_t> starts{0};
  auto push = [&starts](std::size_t at) {
    if (at > starts.back()) starts.push_back(at);
  };

  bool stop_prev = false;
  bool stop_next = false;
  for (const auto& w : words) {
    const auto folded = text::fold(text::decode_utf8(w.text));
    const bool is_stop = stops.contains_folded(folded);

    if (stop_next) {
      push(w.char_start);
      stop_next = false;
    }
    if (is_stop) {
      if (!stop_prev) {
        push(w.char_start);
        stop_prev = true;
      }
    } else {
      stop_prev = false;
    }
    if (!is_stop && !w.text.empty() && w.text.back() == '.') stop_next = true;
  }
  return starts;
}

ClaimPartition map_starts_to_token_claims(std::span<const std::size_t> starts,
                                          std::span<const TokenRecord> tokens) {
  ClaimPartition out;
  std::size_t expected = 0;
  std::size_t current_start = static_cast<std::size_t>(-1);
  std::size_t cursor = 0;  // starts[cursor] is the next boundary not yet passed

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (tok.is_eos) {
      if (i + 1 != tokens.size()) throw DataError("EOS token at index " + std::to_string(i) + " is not last");
      out.claims.push_back({i});
      out.eos_claim = true;
      break;
    }
    if (tok.char_start != expected) {
      throw DataError("token " + std::to_string(i) + " starts at " + std::to_string(tok.char_start) +
                      ", expected " + std::to_string(expected) + " (tokens are not contiguous)");
    }
    if (tok.char_end < tok.char_start) {
      throw DataError("token " + std::to_string(i) + " has char_end before char_start");
    }
    expected = tok.char_end;

    const auto surface = text::decode_utf8(tok.surface);
    const std::size_t lead = text::leading_space(surface);
    const std::size_t anchor = lead < surface.size() ? tok.char_start + lead : tok.char_start;

    while (cursor < starts.size() && starts[cursor] <= anchor) ++cursor;
    // Claim index is the last start <= anchor; compare by its value so
    // starts that received no token collapse away.
    const std::size_t claim_start = cursor == 0 ? 0 : starts[cursor - 1];
    if (out.claims.empty() || claim_start != current_start) {
      out.claims.emplace_back();
      current_start = claim_start;
    }
    out.claims.back().push_back(i);
  }
  return out;
}

ClaimPartition segment(const Sample& sample, const StopSet& stops) {
  const auto words = tokenize_words(sample.generation_text);
  const auto starts = find_claim_starts(words, stops);
  return map_starts_to_token_claims(starts, sample.tokens);
}

ClaimPartition segment_text(std::string_view generation_text,
                            std::span<const std::string> surfaces,
                            std::span<const std::pair<std::size_t, std::size_t>> offsets,
                            bool with_eos, const StopSet& stops) {
  if (surfaces.size() != offsets.size()) {
    throw DataError("surfaces and offsets differ in length");
  }
  Sample s;
  s.generation_text = std::string(generation_text);
  s.tokens.reserve(surfaces.size() + 1);
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    TokenRecord t;
    t.surface = surfaces[i];
    t.char_start = offsets[i].first;
    t.char_end = offsets[i].second;
    s.tokens.push_back(std::move(t));
  }
  if (with_eos) {
    TokenRecord eos;
    eos.is_eos = true;
    eos.char_start = eos.char_end = text::codepoint_length(generation_text);
    s.tokens.push_back(std::move(eos));
  }
  require_token_layout(s);
  return segment(s, stops);
}

std::string check_partition(const ClaimPartition& partition, std::span<const TokenRecord> tokens) {
  std::size_t next = 0;
  for (std::size_t k = 0; k < partition.claims.size(); ++k) {
    const auto& claim = partition.claims[k];
    if (claim.empty()) return "claim " + std::to_string(k) + " is empty";
    for (std::size_t idx : claim) {
      if (idx != next) {
        return "claim " + std::to_string(k) + " has token " + std::to_string(idx) + ", expected " +
               std::to_string(next);
      }
      ++next;
    }
  }
  if (next != tokens.size()) {
    return "partition covers " + std::to_string(next) + " of " + std::to_string(tokens.size()) + " tokens";
  }
  const bool has_eos = !tokens.empty() && tokens.back().is_eos;
  if (has_eos != partition.eos_claim) return "eos_claim flag disagrees with the tokens";
  if (has_eos && partition.claims.back().size() != 1) return "EOS token shares its claim";
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i].is_eos) return "EOS token at index " + std::to_string(i) + " is not last";
  }
  return {};
}

}  // namespace much
