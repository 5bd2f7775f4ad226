#include "much/stopwords.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "much/error.hpp"
#include "much/text.hpp"

namespace much {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_lists();
}

void StopSet::add_list(std::string_view content) {
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    auto line = content.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto folded = text::fold(text::decode_utf8(line));
    if (!folded.empty()) entries_.insert(std::move(folded));
    pos = nl + 1;
  }
}

void StopSet::check() const {
  for (const char32_t* required : {U".", U",", U"the"}) {
    if (!entries_.contains(required)) {
      throw DataError("stop set is missing required entry '" +
                      text::encode_utf8(required) + "'");
    }
  }
}

const StopSet& StopSet::builtin() {
  static const StopSet set = [] {
    StopSet s;
    for (const auto& [name, content] : detail::embedded_lists()) s.add_list(content);
    s.check();
    return s;
  }();
  return set;
}

StopSet StopSet::load(const std::vector<std::filesystem::path>& paths) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
      }
    } else {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  StopSet s;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw IoError(f.string(), "cannot open stop list");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      s.add_list(buf.str());
    } catch (const DataError& e) {
      throw IoError(f.string(), e.what());
    }
  }
  s.check();
  return s;
}

StopSet StopSet::from_entries(const std::vector<std::string>& entries) {
  StopSet s;
  for (const auto& e : entries) {
    auto folded = text::fold(text::decode_utf8(e));
    if (!folded.empty()) s.entries_.insert(std::move(folded));
  }
  if (s.entries_.empty()) throw DataError("stop set must not be empty");
  return s;
}

bool StopSet::contains(std::u32string_view word) const { return entries_.contains(text::fold(word)); }

bool StopSet::contains_utf8(std::string_view word) const {
  return entries_.contains(text::fold(text::decode_utf8(word)));
}

std::vector<std::string> StopSet::entries() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(text::encode_utf8(e));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace much
