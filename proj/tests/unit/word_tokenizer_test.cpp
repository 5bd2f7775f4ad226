#include <gtest/gtest.h>

#include <fstream>

#include <json.hpp>

#include "much/text.hpp"
#include "much/word_tokenizer.hpp"
#include "support/synthetic.hpp"

namespace much {
namespace {

std::vector<std::string> texts(const std::vector<WordSpan>& words) {
  std::vector<std::string> out;
  for (const auto& w : words) out.push_back(w.text);
  return out;
}

TEST(WordTokenizer, SplitsCommaButKeepsWords) {
  const auto words = tokenize_words(std::string_view("No, Xining is"));
  ASSERT_EQ(words.size(), 4u);
  EXPECT_EQ(words[0], (WordSpan{"No", 0, 2}));
  EXPECT_EQ(words[1], (WordSpan{",", 2, 3}));
  EXPECT_EQ(words[2], (WordSpan{"Xining", 4, 10}));
  EXPECT_EQ(words[3], (WordSpan{"is", 11, 13}));
}

TEST(WordTokenizer, EmptyInput) {
  EXPECT_TRUE(tokenize_words(std::string_view("")).empty());
  EXPECT_TRUE(tokenize_words(std::string_view(" \n\t ")).empty());
}

TEST(WordTokenizer, WordFinalPeriodStaysAttached) {
  EXPECT_EQ(texts(tokenize_words(std::string_view("Qinghai."))), std::vector<std::string>{"Qinghai."});
  EXPECT_EQ(texts(tokenize_words(std::string_view("It was in 1997. Then peace."))),
            (std::vector<std::string>{"It", "was", "in", "1997.", "Then", "peace."}));
}

TEST(WordTokenizer, Contractions) {
  EXPECT_EQ(texts(tokenize_words(std::string_view("I don't know, they'll see."))),
            (std::vector<std::string>{"I", "do", "n't", "know", ",", "they", "'ll", "see."}));
  EXPECT_EQ(texts(tokenize_words(std::string_view("cannot"))), (std::vector<std::string>{"can", "not"}));
  EXPECT_EQ(texts(tokenize_words(std::string_view("Einstein's"))), (std::vector<std::string>{"Einstein", "'s"}));
}

TEST(WordTokenizer, NumbersKeepInnerSeparators) {
  EXPECT_EQ(texts(tokenize_words(std::string_view("8,849 or 3.5, 10:30"))),
            (std::vector<std::string>{"8,849", "or", "3.5", ",", "10:30"}));
}

TEST(WordTokenizer, TypographicPunctuationIsSeparate) {
  EXPECT_EQ(texts(tokenize_words(std::string_view("«Oui» — dit-il… (bon)"))),
            (std::vector<std::string>{"«", "Oui", "»", "—", "dit-il", "…", "(", "bon", ")"}));
  EXPECT_EQ(texts(tokenize_words(std::string_view("wait...what?!"))),
            (std::vector<std::string>{"wait", "...", "what", "?", "!"}));
}

TEST(WordTokenizer, OffsetsAreCodePoints) {
  const auto words = tokenize_words(std::string_view("é río"));
  ASSERT_EQ(words.size(), 2u);
  EXPECT_EQ(words[1].char_start, 2u);
  EXPECT_EQ(words[1].char_end, 5u);
}

TEST(WordTokenizer, MatchesReferenceSpansOnGoldenSentences) {
  std::ifstream in(std::string(MUCH_GOLDEN_DIR) + "/claim_starts.jsonl");
  ASSERT_TRUE(in);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    std::vector<WordSpan> expected;
    for (const auto& w : j["words"]) {
      expected.push_back({w[0].get<std::string>(), w[1].get<std::size_t>(), w[2].get<std::size_t>()});
    }
    EXPECT_EQ(tokenize_words(j["text"].get<std::string>()), expected) << j["text"];
    ++rows;
  }
  EXPECT_GE(rows, 25u);
}

// Spans reproduce their text, are ordered, never hold whitespace, and
// together cover every non-whitespace character.
TEST(WordTokenizerProperty, SpansAreExactAndCovering) {
  testing::Rng rng(7);
  for (int iter = 0; iter < 2000; ++iter) {
    const auto s = testing::random_text(rng, testing::uniform(rng, 0, 30));
    const auto cps = text::decode_utf8(s);
    const auto words = tokenize_words(std::u32string_view(cps));
    std::vector<bool> covered(cps.size(), false);
    std::size_t prev_end = 0;
    for (const auto& w : words) {
      ASSERT_LT(w.char_start, w.char_end) << s;
      ASSERT_GE(w.char_start, prev_end) << s;
      ASSERT_EQ(text::encode_utf8(cps.substr(w.char_start, w.char_end - w.char_start)), w.text) << s;
      for (auto i = w.char_start; i < w.char_end; ++i) {
        ASSERT_FALSE(text::is_space(cps[i])) << s;
        covered[i] = true;
      }
      prev_end = w.char_end;
    }
    for (std::size_t i = 0; i < cps.size(); ++i) {
      ASSERT_TRUE(covered[i] || text::is_space(cps[i])) << s << " at " << i;
    }
  }
}

}  // namespace
}  // namespace much
