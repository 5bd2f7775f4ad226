#include "much/aggregation.hpp"

#include <algorithm>
#include <cmath>

#include "much/error.hpp"
#include "much/text.hpp"

namespace much {

std::vector<bool> content_token_mask(const Sample& sample, const ClaimPartition& partition,
                                     const StopSet& stops) {
  if (partition.token_count() != sample.tokens.size()) {
    throw DataError("sample " + sample.id + ": partition covers " +
                    std::to_string(partition.token_count()) + " tokens, sample has " +
                    std::to_string(sample.tokens.size()));
  }
  std::vector<bool> mask(sample.tokens.size());
  for (std::size_t i = 0; i < sample.tokens.size(); ++i) {
    const auto& tok = sample.tokens[i];
    mask[i] = !tok.is_eos && !stops.contains_utf8(tok.surface);
  }
  return mask;
}

double aggregate_values(std::span<const double> values, AggregatorKind kind) {
  if (values.empty()) throw DataError("cannot aggregate an empty claim");
  if (values.size() == 1) {
    if (values[0] < 0.0 && (kind == AggregatorKind::GeoMean || kind == AggregatorKind::Product)) {
      throw DataError("negative value " + std::to_string(values[0]));
    }
    return values[0];
  }
  switch (kind) {
    case AggregatorKind::Mean: {
      double s = 0.0;
      for (double v : values) s += v;
      return s / static_cast<double>(values.size());
    }
    case AggregatorKind::Max:
      return *std::max_element(values.begin(), values.end());
    case AggregatorKind::GeoMean:
    case AggregatorKind::Product: {
      double log_sum = 0.0;
      bool zero = false;
      for (double v : values) {
        if (v < 0.0) throw DataError("negative value " + std::to_string(v));
        if (v == 0.0) zero = true;
        else log_sum += std::log(v);
      }
      if (zero) return 0.0;
      if (kind == AggregatorKind::GeoMean) log_sum /= static_cast<double>(values.size());
      return std::exp(log_sum);
    }
  }
  return 0.0;
}

ClaimScoreSet aggregate(const TokenScoreVector& scores, const ClaimPartition& partition,
                        const std::vector<bool>& mask, AggregatorKind kind) {
  const auto n = scores.values.size();
  if (mask.size() != n || partition.token_count() != n) {
    throw DataError("scorer " + scores.scorer + ": " + std::to_string(n) + " scores, " +
                    std::to_string(mask.size()) + " mask entries, " +
                    std::to_string(partition.token_count()) + " partitioned tokens");
  }
  ClaimScoreSet out{scores.scorer, kind, {}, scores.higher_is_more_uncertain};
  out.values.reserve(partition.labeled_count());
  std::vector<double> buf;
  for (const auto& claim : partition.labeled()) {
    buf.clear();
    for (std::size_t idx : claim) {
      if (mask[idx]) buf.push_back(scores.values[idx]);
    }
    if (buf.empty()) {
      for (std::size_t idx : claim) buf.push_back(scores.values[idx]);
    }
    double v = 0.0;
    try {
      v = aggregate_values(buf, kind);
    } catch (const DataError& e) {
      throw DataError("scorer " + scores.scorer + ", aggregator " + std::string(to_string(kind)) +
                      ": " + e.what());
    }
    if (!std::isfinite(v)) {
      throw DataError("scorer " + scores.scorer + ": non-finite " + std::string(to_string(kind)) +
                      " aggregate");
    }
    out.values.push_back(v);
  }
  return out;
}

}  // namespace much
