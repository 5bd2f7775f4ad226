#include "much/published_adapter.hpp"

#include <array>
#include <initializer_list>

#include "much/error.hpp"
#include "much/text.hpp"

namespace much::published {

using nlohmann::json;

namespace {

const json* find_any(const json& row, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (auto it = row.find(n); it != row.end() && !it->is_null()) return &*it;
  }
  return nullptr;
}

const json& require_any(const json& row, std::initializer_list<const char*> names) {
  if (const json* j = find_any(row, names)) return *j;
  throw DataError(std::string("published row: missing field '") + *names.begin() + "'");
}

std::string as_string(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

}  // namespace

bool looks_like_eos(std::string_view surface) noexcept {
  static constexpr std::array<std::string_view, 7> kMarkers{
      "</s>", "<eos>", "<|eot_id|>", "<|end_of_text|>", "<end_of_turn>", "<|endoftext|>", ""};
  for (auto m : kMarkers) {
    if (surface == m) return true;
  }
  return false;
}

LabeledSample from_json(const json& row) {
  if (!row.is_object()) throw DataError("published row must be a JSON object");
  LabeledSample rec;
  Sample& s = rec.sample;
  s.id = as_string(require_any(row, {"id", "sample_id", "uid"}));
  s.language = parse_language(require_any(row, {"lang", "language"}).get<std::string>());
  s.model = require_any(row, {"model", "model_name"}).get<std::string>();
  s.temperature = require_any(row, {"temperature"}).get<double>();
  s.question = require_any(row, {"question", "model_input"}).get<std::string>();
  s.generation_text = require_any(row, {"generation", "model_output_text", "output_text"}).get<std::string>();

  const auto surfaces = require_any(row, {"tokens", "model_output_tokens"}).get<std::vector<std::string>>();
  const auto ids = require_any(row, {"token_ids", "model_output_token_ids"}).get<std::vector<std::int64_t>>();
  const auto logits = require_any(row, {"top_logits", "logits"}).get<std::vector<std::vector<double>>>();
  const auto cand_ids =
      require_any(row, {"top_token_ids", "logit_token_ids"}).get<std::vector<std::vector<std::int64_t>>>();
  if (ids.size() != surfaces.size() || logits.size() != surfaces.size() || cand_ids.size() != surfaces.size()) {
    throw DataError("published row " + s.id + ": token arrays differ in length");
  }

  const std::size_t text_len = text::codepoint_length(s.generation_text);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    TokenRecord t;
    t.surface = surfaces[i];
    t.token_id = ids[i];
    if (logits[i].size() != cand_ids[i].size()) {
      throw DataError("published row " + s.id + ", token " + std::to_string(i) + ": logits and ids differ in length");
    }
    for (std::size_t k = 0; k < logits[i].size(); ++k) t.candidates.push_back({cand_ids[i][k], logits[i][k]});
    t.sampled_rank = -1;
    for (std::size_t k = 0; k < t.candidates.size(); ++k) {
      if (t.candidates[k].token_id == t.token_id) {
        t.sampled_rank = static_cast<int>(k);
        break;
      }
    }
    const bool last = i + 1 == surfaces.size();
    if (last && pos == text_len && looks_like_eos(t.surface)) {
      t.is_eos = true;
      t.surface.clear();
      t.char_start = t.char_end = text_len;
    } else {
      t.char_start = pos;
      pos += text::codepoint_length(t.surface);
      t.char_end = pos;
    }
    s.tokens.push_back(std::move(t));
  }

  if (const json* claims = find_any(row, {"claims", "segmentation"})) {
    ClaimPartition p;
    for (const auto& c : *claims) p.claims.push_back(c.get<Claim>());
    p.eos_claim = s.ends_with_eos() && !p.claims.empty() && p.claims.back().size() == 1 &&
                  p.claims.back().front() == s.tokens.size() - 1;
    rec.partition = std::move(p);
  }

  auto add_labels = [&rec](const std::string& name, const json& labels) {
    AnnotationSet set{name, {}};
    for (const auto& l : labels) set.labels.push_back(label_from_int(l.get<long>()));
    rec.annotations.emplace(name, std::move(set));
  };
  if (const json* ann = find_any(row, {"annotations"})) {
    for (const auto& [name, labels] : ann->items()) add_labels(name, labels);
  }
  for (const auto& [key, value] : row.items()) {
    if (key.rfind("labels_", 0) == 0 && value.is_array()) add_labels(key.substr(7), value);
  }
  return rec;
}

}  // namespace much::published
