#pragma once

#include <array>
#include <cstdint>

#include "much/types.hpp"

namespace much {

// 2x2 counts; rows are annotator A, columns annotator B, both ordered
// [-1, +1].
using Confusion = std::array<std::array<std::uint64_t, 2>, 2>;

struct AgreementReport {
  Confusion confusion{};
  double kappa = 0.0;
  double observed_agreement = 0.0;

  std::uint64_t total() const noexcept {
    return confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1];
  }
};

// Adds the claim-by-claim comparison of `a` and `b` to `confusion`.
// Throws DataError when the label vectors differ in length.
void accumulate(Confusion& confusion, const AnnotationSet& a, const AnnotationSet& b);

// kappa = (p_o - p_e) / (1 - p_e) with p_e from the product of marginals.
// When p_e == 1 (both annotators constant) kappa is 1 for perfect
// agreement and 0 otherwise. Throws DataError on an all-zero matrix.
AgreementReport agreement_from_confusion(const Confusion& confusion);

// Throws DataError on zero-length or misaligned input.
AgreementReport cohen_kappa(const AnnotationSet& a, const AnnotationSet& b);

}  // namespace much
