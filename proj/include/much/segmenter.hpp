#pragma once

// Rule-based claim segmentation. A claim starts at the first stopword or
// punctuation mark of a run, and right after any word ending with a period.
// Claim starts are character offsets, which are then mapped onto the LLM's
// own tokens so every claim is a contiguous run of generated tokens.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "much/stopwords.hpp"
#include "much/types.hpp"
#include "much/word_tokenizer.hpp"

namespace much {

// Strictly ascending code-point offsets; always begins with 0.
std::vector<std::size_t> find_claim_starts(std::span<const WordSpan> words, const StopSet& stops);

// Assigns every non-EOS token to the claim whose start interval contains
// the token's first non-whitespace character (leading whitespace, as in
// " city", is skipped; an all-whitespace token uses its char_start).
// Claims that receive no token disappear. An EOS token becomes its own
// final claim. Throws DataError if the tokens are not contiguous.
ClaimPartition map_starts_to_token_claims(std::span<const std::size_t> starts,
                                          std::span<const TokenRecord> tokens);

ClaimPartition segment(const Sample& sample, const StopSet& stops = StopSet::builtin());

// Segments raw text with externally supplied token boundaries, for callers
// that do not hold a full Sample. `offsets` are (char_start, char_end)
// pairs; an EOS token is appended when `with_eos` is set.
ClaimPartition segment_text(std::string_view generation_text,
                            std::span<const std::string> surfaces,
                            std::span<const std::pair<std::size_t, std::size_t>> offsets,
                            bool with_eos, const StopSet& stops = StopSet::builtin());

// Checks the partition invariants against a token count: disjoint,
// covering, contiguous, ordered, EOS isolated. Returns an empty string
// when all hold, otherwise a description of the first failure.
std::string check_partition(const ClaimPartition& partition, std::span<const TokenRecord> tokens);

}  // namespace much
