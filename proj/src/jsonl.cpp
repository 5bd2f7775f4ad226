#include "much/jsonl.hpp"

#include "much/error.hpp"

namespace much::io {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw DataError(std::string("missing field '") + name + "'");
  return *it;
}

template <typename T>
T get(const json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const json::exception& e) {
    throw DataError(std::string("field '") + name + "': " + e.what());
  }
}

}  // namespace

json to_json(const TokenRecord& t) {
  json cands = json::array();
  for (const auto& c : t.candidates) cands.push_back(json::array({c.token_id, c.logit}));
  return json{{"surface", t.surface},     {"char_start", t.char_start},
              {"char_end", t.char_end},   {"token_id", t.token_id},
              {"sampled_rank", t.sampled_rank}, {"candidates", std::move(cands)},
              {"is_eos", t.is_eos}};
}

json to_json(const Sample& s) {
  json tokens = json::array();
  for (const auto& t : s.tokens) tokens.push_back(to_json(t));
  return json{{"format", kFormatVersion},
              {"id", s.id},
              {"language", to_string(s.language)},
              {"model", s.model},
              {"temperature", s.temperature},
              {"question", s.question},
              {"generation_text", s.generation_text},
              {"tokens", std::move(tokens)}};
}

json to_json(const ClaimPartition& p) {
  json claims = json::array();
  for (const auto& c : p.claims) claims.push_back(c);
  return claims;
}

json to_json(const LabeledSample& r) {
  json j = to_json(r.sample);
  if (r.partition) {
    j["partition"] = to_json(*r.partition);
    j["partition_hash"] = r.stored_partition_hash.value_or(partition_hash(*r.partition));
  }
  if (!r.annotations.empty()) {
    json ann = json::object();
    for (const auto& [name, set] : r.annotations) {
      json labels = json::array();
      for (auto l : set.labels) labels.push_back(to_int(l));
      ann[name] = std::move(labels);
    }
    j["annotations"] = std::move(ann);
  }
  return j;
}

TokenRecord token_from_json(const json& j) {
  if (!j.is_object()) throw DataError("token must be an object");
  TokenRecord t;
  t.surface = get<std::string>(j, "surface");
  t.char_start = get<std::size_t>(j, "char_start");
  t.char_end = get<std::size_t>(j, "char_end");
  t.token_id = get<std::int64_t>(j, "token_id");
  t.sampled_rank = get<int>(j, "sampled_rank");
  t.is_eos = get<bool>(j, "is_eos");
  const auto& cands = field(j, "candidates");
  if (!cands.is_array()) throw DataError("field 'candidates' must be an array");
  t.candidates.reserve(cands.size());
  for (const auto& c : cands) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number()) {
      throw DataError("candidate must be a [token_id, logit] pair");
    }
    t.candidates.push_back({c[0].get<std::int64_t>(), c[1].get<double>()});
  }
  return t;
}

Sample sample_from_json(const json& j) {
  if (!j.is_object()) throw DataError("row must be a JSON object");
  if (auto it = j.find("format"); it != j.end() && *it != kFormatVersion) {
    throw DataError("unsupported format version " + it->dump());
  }
  Sample s;
  s.id = get<std::string>(j, "id");
  s.language = parse_language(get<std::string>(j, "language"));
  s.model = get<std::string>(j, "model");
  s.temperature = get<double>(j, "temperature");
  s.question = get<std::string>(j, "question");
  s.generation_text = get<std::string>(j, "generation_text");
  const auto& toks = field(j, "tokens");
  if (!toks.is_array()) throw DataError("field 'tokens' must be an array");
  s.tokens.reserve(toks.size());
  for (std::size_t i = 0; i < toks.size(); ++i) {
    try {
      s.tokens.push_back(token_from_json(toks[i]));
    } catch (const DataError& e) {
      throw DataError("tokens[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return s;
}

ClaimPartition partition_from_json(const json& j, const Sample& sample) {
  if (!j.is_array()) throw DataError("field 'partition' must be an array of arrays");
  ClaimPartition p;
  for (const auto& c : j) {
    if (!c.is_array()) throw DataError("field 'partition' must be an array of arrays");
    p.claims.push_back(c.get<Claim>());
  }
  const auto n = sample.tokens.size();
  p.eos_claim = sample.ends_with_eos() && !p.claims.empty() && p.claims.back().size() == 1 &&
                p.claims.back().front() == n - 1;
  return p;
}

LabeledSample labeled_from_json(const json& j) {
  LabeledSample r;
  r.sample = sample_from_json(j);
  if (auto it = j.find("partition"); it != j.end()) {
    r.partition = partition_from_json(*it, r.sample);
  }
  if (auto it = j.find("partition_hash"); it != j.end()) {
    r.stored_partition_hash = it->get<std::string>();
  }
  if (auto it = j.find("annotations"); it != j.end()) {
    if (!it->is_object()) throw DataError("field 'annotations' must be an object");
    for (const auto& [name, labels] : it->items()) {
      AnnotationSet set{name, {}};
      if (!labels.is_array()) throw DataError("annotations." + name + " must be an array");
      for (const auto& l : labels) {
        if (!l.is_number_integer()) throw DataError("annotations." + name + ": non-integer label");
        set.labels.push_back(label_from_int(l.get<long>()));
      }
      r.annotations.emplace(name, std::move(set));
    }
  }
  return r;
}

std::string dump_line(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

std::string serialize(const LabeledSample& record) { return dump_line(to_json(record)); }

LabeledSample parse(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return labeled_from_json(j);
  } catch (const json::exception& e) {
    throw DataError(e.what());
  }
}

}  // namespace much::io
