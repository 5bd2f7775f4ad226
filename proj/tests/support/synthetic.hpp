#pragma once

// Random but well-formed samples for property tests. Everything is driven
// by an explicit seed so failures reproduce.

#include <algorithm>
#include <array>
#include <random>
#include <string>
#include <vector>

#include "much/text.hpp"
#include "much/types.hpp"

namespace much::testing {

using Rng = std::mt19937_64;

inline constexpr std::array<const char*, 40> kContentWords = {
    "Xining", "city",   "largest",  "Qinghai", "1997",   "peace",   "Berlin",  "río",    "Straße",  "élève",
    "Paris",  "tower",  "built",    "3.5",     "U.S.",   "Nobel",   "physics", "mountain", "Everest", "8,849",
    "café",   "coûte",  "Hauptstadt", "España", "capital", "river", "Amazonas", "Zugspitze", "Curie", "Oxford",
    "treaty", "signed", "don't",    "Einstein's", "über", "größte", "ÉCOLE",   "naïve",  "Ångström", "1889"};

inline constexpr std::array<const char*, 24> kStopWords = {
    "the", "is", "of",  "in",  "and",  "The", "It",  "was", "de", "la",  "le",  "et",
    "el",  "es", "der", "die", "und",  "ist", "à",   "où",  "él", "über", "AND", "los"};

inline constexpr std::array<const char*, 16> kPunct = {".", ",", "!", "?", ";", ":", "(", ")",
                                                       "«", "»", "—", "...", "\"", "…", "“", "”"};

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// Text made of words, stopwords and punctuation, with occasional double
// spaces, newlines and surrounding whitespace.
inline std::string random_text(Rng& rng, std::size_t n_words) {
  std::string out;
  if (chance(rng, 0.1)) out += chance(rng, 0.5) ? " " : "\n";
  for (std::size_t i = 0; i < n_words; ++i) {
    const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    std::string w;
    bool glue = false;
    if (r < 0.45) {
      w = kContentWords[uniform(rng, 0, kContentWords.size() - 1)];
      if (chance(rng, 0.12)) w += ".";
    } else if (r < 0.8) {
      w = kStopWords[uniform(rng, 0, kStopWords.size() - 1)];
    } else {
      w = kPunct[uniform(rng, 0, kPunct.size() - 1)];
      glue = chance(rng, 0.7);
    }
    if (!out.empty() && !glue) out += chance(rng, 0.05) ? (chance(rng, 0.5) ? "  " : "\n") : " ";
    out += w;
  }
  if (chance(rng, 0.1)) out += chance(rng, 0.5) ? " " : "\n\n";
  return out;
}

// Descending logits with distinct ids; the sampled token is candidates[rank].
inline std::vector<Candidate> random_candidates(Rng& rng, double spread = 5.0) {
  std::normal_distribution<double> dist(0.0, spread);
  std::vector<double> logits(kCandidateCount);
  for (auto& l : logits) l = dist(rng);
  std::sort(logits.begin(), logits.end(), std::greater<>());
  std::vector<Candidate> out;
  std::int64_t id = static_cast<std::int64_t>(uniform(rng, 0, 1000));
  for (double l : logits) {
    id += static_cast<std::int64_t>(uniform(rng, 1, 50));
    out.push_back({id, l});
  }
  return out;
}

inline TokenRecord random_token(Rng& rng, std::string surface, std::size_t start, std::size_t end) {
  TokenRecord t;
  t.surface = std::move(surface);
  t.char_start = start;
  t.char_end = end;
  t.candidates = random_candidates(rng, chance(rng, 0.2) ? 30.0 : 4.0);
  t.sampled_rank = static_cast<int>(chance(rng, 0.6) ? 0 : uniform(rng, 0, kCandidateCount - 1));
  t.token_id = t.candidates[static_cast<std::size_t>(t.sampled_rank)].token_id;
  return t;
}

struct SyntheticOptions {
  std::size_t min_words = 0;
  std::size_t max_words = 40;
  double eos_probability = 0.9;
};

// Splits the text into model tokens of 1-7 code points, preferring cuts
// just before a space so that surfaces look like " city".
inline Sample random_sample(Rng& rng, const std::string& id, const SyntheticOptions& opt = {}) {
  Sample s;
  s.id = id;
  s.language = static_cast<Language>(uniform(rng, 0, 3));
  s.model = std::array<const char*, 4>{"Llama-3.1-8B", "Gemma-3-4B", "Ministral-8B", "Qwen-2.5-7B"}[uniform(rng, 0, 3)];
  s.temperature = chance(rng, 0.5) ? 1.0 : 0.7;
  s.question = "Question " + id + "?";
  s.generation_text = random_text(rng, uniform(rng, opt.min_words, opt.max_words));

  const auto cps = text::decode_utf8(s.generation_text);
  std::size_t pos = 0;
  while (pos < cps.size()) {
    std::size_t len = uniform(rng, 1, 7);
    for (std::size_t k = pos + 1; k < std::min(cps.size(), pos + len); ++k) {
      if (cps[k] == U' ' && chance(rng, 0.7)) {
        len = k - pos;
        break;
      }
    }
    len = std::min(len, cps.size() - pos);
    auto tok = random_token(rng, text::encode_utf8(cps.substr(pos, len)), pos, pos + len);
    s.tokens.push_back(std::move(tok));
    pos += len;
  }
  if (chance(rng, opt.eos_probability)) {
    auto eos = random_token(rng, "", cps.size(), cps.size());
    eos.is_eos = true;
    s.tokens.push_back(std::move(eos));
  }
  return s;
}

inline std::vector<Label> random_labels(Rng& rng, std::size_t n, double p_nonfactual = 0.35) {
  std::vector<Label> out(n);
  for (auto& l : out) l = chance(rng, p_nonfactual) ? Label::NonFactual : Label::Factual;
  return out;
}

}  // namespace much::testing
