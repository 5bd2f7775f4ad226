#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace much {

// Case-folded stopwords of all four languages plus punctuation marks.
// Membership is tested on folded text; read-only once built.
class StopSet {
 public:
  // Built-in lists compiled from data/: NLTK-style stopwords for EN, FR,
  // ES and DE, ASCII punctuation, and the custom typographic marks.
  static const StopSet& builtin();

  // Loads every list file given (one entry per line, UTF-8). A directory
  // argument loads all *.txt files in it, recursively. Throws IoError.
  static StopSet load(const std::vector<std::filesystem::path>& paths);

  static StopSet from_entries(const std::vector<std::string>& entries);

  // `word` is folded (trimmed + lowercased) before lookup.
  bool contains(std::u32string_view word) const;
  bool contains_folded(const std::u32string& folded) const { return entries_.contains(folded); }
  bool contains_utf8(std::string_view word) const;

  std::size_t size() const noexcept { return entries_.size(); }

  // Sorted UTF-8 entries, for audits and fingerprinting.
  std::vector<std::string> entries() const;

 private:
  void add_list(std::string_view content);
  void check() const;

  std::unordered_set<std::u32string> entries_;
};

}  // namespace much
