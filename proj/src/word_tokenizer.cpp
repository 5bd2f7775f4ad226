#include "much/word_tokenizer.hpp"

#include <array>
#include <optional>

#include "much/text.hpp"

namespace much {

namespace {

bool always_split(char32_t c) noexcept {
  switch (c) {
    case U';': case U'@': case U'#': case U'$': case U'%': case U'&':
    case U'?': case U'!':
    case U'(': case U')': case U'[': case U']': case U'{': case U'}': case U'<': case U'>':
    case U'"':
    case 0x00AB: case 0x00BB:                            // « »
    case 0x2039: case 0x203A:                            // ‹ ›
    case 0x201C: case 0x201D: case 0x201E: case 0x201F:  // “ ” „ ‟
    case 0x2012: case 0x2013: case 0x2014: case 0x2015:  // figure, en, em dash, bar
    case 0x2026:                                         // …
    case 0x00A1: case 0x00BF:                            // ¡ ¿
      return true;
    default:
      return false;
  }
}

char32_t ascii_lower(char32_t c) noexcept { return (c >= U'A' && c <= U'Z') ? c + 0x20 : c; }

bool iequals(std::u32string_view a, std::u32string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
  }
  return true;
}

// Whole-word splits from the Treebank contraction tables.
struct FixedSplit {
  std::u32string_view word;
  std::size_t cut;
};
constexpr std::array<FixedSplit, 10> kFixedSplits{{
    {U"cannot", 3}, {U"gimme", 3}, {U"gonna", 3}, {U"gotta", 3}, {U"lemme", 3},
    {U"wanna", 3}, {U"'tis", 2}, {U"'twas", 2}, {U"d'ye", 1}, {U"more'n", 4},
}};

// Clitic suffixes split off a word when they end it. Only the all-lower
// and all-upper spellings count, as in the reference rules.
constexpr std::array<std::u32string_view, 15> kSuffixes{{
    U"n't", U"N'T", U"'ll", U"'LL", U"'re", U"'RE", U"'ve", U"'VE",
    U"'s", U"'S", U"'m", U"'M", U"'d", U"'D", U"'",
}};

class Splitter {
 public:
  Splitter(std::u32string_view text, std::vector<WordSpan>& out) : text_(text), out_(out) {}

  void emit(std::size_t b, std::size_t e) {
    if (b >= e) return;
    out_.push_back({text::encode_utf8(text_.substr(b, e - b)), b, e});
  }

  void emit_word(std::size_t b, std::size_t e) {
    if (b >= e) return;
    const auto word = text_.substr(b, e - b);
    for (const auto& fs : kFixedSplits) {
      if (iequals(word, fs.word)) {
        emit(b, b + fs.cut);
        emit(b + fs.cut, e);
        return;
      }
    }
    for (auto suffix : kSuffixes) {
      if (word.size() <= suffix.size() || !word.ends_with(suffix)) continue;
      const char32_t before = word[word.size() - suffix.size() - 1];
      if (before == U'\'') continue;
      emit(b, e - suffix.size());
      emit(e - suffix.size(), e);
      return;
    }
    emit(b, e);
  }

  void chunk(std::size_t b, std::size_t e) {
    std::size_t word_start = b;
    std::size_t i = b;
    auto flush_and_emit = [&](std::size_t len) {
      emit_word(word_start, i);
      emit(i, i + len);
      i += len;
      word_start = i;
    };
    while (i < e) {
      const char32_t c = text_[i];
      const char32_t next = i + 1 < e ? text_[i + 1] : U'\0';
      if (c == U'.' && next == U'.' && i + 2 < e && text_[i + 2] == U'.') {
        flush_and_emit(3);
      } else if (c == U'-' && next == U'-') {
        flush_and_emit(2);
      } else if (c == U'\'' && next == U'\'') {
        flush_and_emit(2);
      } else if (always_split(c)) {
        flush_and_emit(1);
      } else if ((c == U',' || c == U':') && !text::is_digit(next)) {
        flush_and_emit(1);
      } else {
        ++i;
      }
    }
    emit_word(word_start, e);
  }

 private:
  std::u32string_view text_;
  std::vector<WordSpan>& out_;
};

}  // namespace

std::vector<WordSpan> tokenize_words(std::u32string_view input) {
  std::vector<WordSpan> out;
  Splitter splitter(input, out);
  std::size_t i = 0;
  while (i < input.size()) {
    while (i < input.size() && text::is_space(input[i])) ++i;
    const std::size_t b = i;
    while (i < input.size() && !text::is_space(input[i])) ++i;
    if (b < i) splitter.chunk(b, i);
  }
  return out;
}

std::vector<WordSpan> tokenize_words(std::string_view utf8_input) {
  return tokenize_words(text::decode_utf8(utf8_input));
}

}  // namespace much
