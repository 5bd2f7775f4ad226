#include "much/types.hpp"

#include <algorithm>
#include <cctype>

#include "much/error.hpp"
#include "much/persist.hpp"

namespace much {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Language lang) noexcept {
  switch (lang) {
    case Language::EN: return "EN";
    case Language::FR: return "FR";
    case Language::ES: return "ES";
    case Language::DE: return "DE";
  }
  return "EN";
}

Language parse_language(std::string_view s) {
  const auto u = upper(s);
  if (u == "EN" || u == "ENGLISH") return Language::EN;
  if (u == "FR" || u == "FRENCH") return Language::FR;
  if (u == "ES" || u == "SPANISH") return Language::ES;
  if (u == "DE" || u == "GERMAN") return Language::DE;
  throw DataError("unknown language '" + std::string(s) + "'");
}

std::size_t ClaimPartition::token_count() const noexcept {
  std::size_t n = 0;
  for (const auto& c : claims) n += c.size();
  return n;
}

std::string partition_hash(const ClaimPartition& partition) {
  std::string canon;
  for (const auto& claim : partition.claims) {
    for (std::size_t i = 0; i < claim.size(); ++i) {
      if (i) canon.push_back(',');
      canon += std::to_string(claim[i]);
    }
    canon.push_back('|');
  }
  canon += partition.eos_claim ? "eos" : "noeos";
  return sha256_hex(canon).substr(0, 16);
}

Label label_from_int(long value) {
  if (value == -1) return Label::NonFactual;
  if (value == 1) return Label::Factual;
  throw DataError("label must be -1 or +1, got " + std::to_string(value));
}

std::string_view to_string(AggregatorKind kind) noexcept {
  switch (kind) {
    case AggregatorKind::Mean: return "mean";
    case AggregatorKind::Max: return "max";
    case AggregatorKind::GeoMean: return "geomean";
    case AggregatorKind::Product: return "product";
  }
  return "product";
}

AggregatorKind parse_aggregator(std::string_view s) {
  std::string l(s);
  std::transform(l.begin(), l.end(), l.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (l == "mean") return AggregatorKind::Mean;
  if (l == "max") return AggregatorKind::Max;
  if (l == "geomean") return AggregatorKind::GeoMean;
  if (l == "product") return AggregatorKind::Product;
  throw UsageError("unknown aggregator '" + std::string(s) + "'");
}

}  // namespace much
