#pragma once

#include <span>
#include <vector>

#include "much/stopwords.hpp"
#include "much/types.hpp"

namespace much {

// true for tokens that take part in aggregation: not EOS, and whose
// trimmed, lowercased surface is not a stopword or punctuation mark.
std::vector<bool> content_token_mask(const Sample& sample, const ClaimPartition& partition,
                                     const StopSet& stops = StopSet::builtin());

// Reduces one claim's values. GEOMEAN and PRODUCT run in log space and
// return exactly 0 when any input is 0. Throws DataError on negative input
// for those two kinds, and on an empty span.
double aggregate_values(std::span<const double> values, AggregatorKind kind);

// One value per labeled claim. A claim whose tokens are all masked out is
// aggregated over all of its tokens instead. Throws DataError (naming the
// scorer) on negative input to GEOMEAN/PRODUCT, on length mismatches, and
// when a result is not finite.
ClaimScoreSet aggregate(const TokenScoreVector& scores, const ClaimPartition& partition,
                        const std::vector<bool>& mask, AggregatorKind kind);

}  // namespace much
