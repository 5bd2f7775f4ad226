#pragma once

// Treebank-style word tokenizer that reports exact code-point spans.
//
// Differences from the classic sed/NLTK rules are deliberate:
//   * a period ending a word always stays attached to it, including the
//     final word of the text ("Qinghai." is one word);
//   * typographic marks (guillemets, curly double quotes, dashes, the
//     ellipsis character) are split like ASCII punctuation;
//   * quotes are never rewritten to `` or '' since spans must match the
//     input byte for byte.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace much {

struct WordSpan {
  std::string text;  // UTF-8
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const WordSpan&) const = default;
};

std::vector<WordSpan> tokenize_words(std::u32string_view input);
std::vector<WordSpan> tokenize_words(std::string_view utf8_input);

}  // namespace much
