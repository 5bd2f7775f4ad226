#pragma once

// Ranking metrics for claim-level hallucination detection.
//
// The positive class is a non-factual claim (label -1). Scores are first
// oriented so that larger means "more likely non-factual": confidence-type
// scores (higher_is_more_uncertain == false) are negated. Every threshold
// is a block of equal scores; no curve is ever interpolated.

#include <span>
#include <vector>

#include "much/types.hpp"

namespace much {

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

// Cumulative counts after each threshold block, highest score first.
struct ThresholdSweep {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::vector<std::size_t> tp;
  std::vector<std::size_t> fp;
};

// Throws DataError for mismatched lengths, NaN scores, or a label set with
// a single class.
ThresholdSweep sweep_thresholds(std::span<const double> scores, std::span<const Label> labels,
                                bool higher_is_more_uncertain);

// Mann-Whitney U over average ranks: P(pos > neg) + P(tie) / 2.
double roc_auc(std::span<const double> scores, std::span<const Label> labels,
               bool higher_is_more_uncertain);

// Average precision: sum over threshold blocks of precision times the
// recall gained in that block.
double pr_auc(std::span<const double> scores, std::span<const Label> labels,
              bool higher_is_more_uncertain);

// Largest TPR among ROC points with FPR <= fpr_cap; fpr_cap in (0, 1).
double tpr_at_fpr(std::span<const double> scores, std::span<const Label> labels,
                  bool higher_is_more_uncertain, double fpr_cap);

// Largest recall among PR points with precision >= prec_floor, or 0.
// prec_floor in (0, 1].
double rec_at_prec(std::span<const double> scores, std::span<const Label> labels,
                   bool higher_is_more_uncertain, double prec_floor);

double pr_auc(const ThresholdSweep& sweep);
double tpr_at_fpr(const ThresholdSweep& sweep, double fpr_cap);
double rec_at_prec(const ThresholdSweep& sweep, double prec_floor);

// (FPR, TPR), starting at the origin and ending at (1, 1).
std::vector<CurvePoint> roc_curve(const ThresholdSweep& sweep);
// (recall, precision), starting at (0, 1), then one point per block.
std::vector<CurvePoint> pr_curve(const ThresholdSweep& sweep);

}  // namespace much
