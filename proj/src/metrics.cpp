#include "much/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "much/error.hpp"

namespace much {

namespace {

std::vector<double> oriented(std::span<const double> scores, std::span<const Label> labels,
                             bool higher_is_more_uncertain) {
  if (scores.size() != labels.size()) {
    throw DataError("got " + std::to_string(scores.size()) + " scores for " +
                    std::to_string(labels.size()) + " labels");
  }
  std::vector<double> out(scores.size());
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw DataError("NaN score at index " + std::to_string(i));
    out[i] = higher_is_more_uncertain ? scores[i] : -scores[i];
    if (labels[i] == Label::NonFactual) ++n_pos;
  }
  if (n_pos == 0 || n_pos == scores.size()) {
    throw DataError("degenerate label set: need both factual and non-factual claims");
  }
  return out;
}

}  // namespace

ThresholdSweep sweep_thresholds(std::span<const double> scores, std::span<const Label> labels,
                                bool higher_is_more_uncertain) {
  const auto s = oriented(scores, labels, higher_is_more_uncertain);
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });

  ThresholdSweep sw;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && s[order[j]] == s[order[i]]) {
      if (labels[order[j]] == Label::NonFactual) ++tp;
      else ++fp;
      ++j;
    }
    sw.tp.push_back(tp);
    sw.fp.push_back(fp);
    i = j;
  }
  sw.n_pos = tp;
  sw.n_neg = fp;
  return sw;
}

double roc_auc(std::span<const double> scores, std::span<const Label> labels,
               bool higher_is_more_uncertain) {
  const auto s = oriented(scores, labels, higher_is_more_uncertain);
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });

  // Ranks are 1-based; a tie block spanning positions [i, j) gets the
  // average rank (i + 1 + j) / 2. Work with doubled ranks to stay integral.
  std::uint64_t pos_rank_x2 = 0;
  std::uint64_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && s[order[j]] == s[order[i]]) ++j;
    const std::uint64_t rank_x2 = i + 1 + j;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == Label::NonFactual) {
        pos_rank_x2 += rank_x2;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::uint64_t n_neg = s.size() - n_pos;
  const std::uint64_t u_x2 = pos_rank_x2 - n_pos * (n_pos + 1);
  return static_cast<double>(u_x2) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double pr_auc(const ThresholdSweep& sw) {
  double ap = 0.0;
  std::size_t prev_tp = 0;
  for (std::size_t b = 0; b < sw.tp.size(); ++b) {
    const std::size_t gained = sw.tp[b] - prev_tp;
    if (gained > 0) {
      const double precision =
          static_cast<double>(sw.tp[b]) / static_cast<double>(sw.tp[b] + sw.fp[b]);
      ap += precision * static_cast<double>(gained);
    }
    prev_tp = sw.tp[b];
  }
  return ap / static_cast<double>(sw.n_pos);
}

double tpr_at_fpr(const ThresholdSweep& sw, double fpr_cap) {
  if (!(fpr_cap > 0.0 && fpr_cap < 1.0)) throw UsageError("fpr cap must be in (0, 1)");
  double best = 0.0;  // the origin always qualifies
  for (std::size_t b = 0; b < sw.tp.size(); ++b) {
    const double fpr = static_cast<double>(sw.fp[b]) / static_cast<double>(sw.n_neg);
    if (fpr <= fpr_cap) {
      best = std::max(best, static_cast<double>(sw.tp[b]) / static_cast<double>(sw.n_pos));
    }
  }
  return best;
}

double rec_at_prec(const ThresholdSweep& sw, double prec_floor) {
  if (!(prec_floor > 0.0 && prec_floor <= 1.0)) throw UsageError("precision floor must be in (0, 1]");
  double best = 0.0;
  for (std::size_t b = 0; b < sw.tp.size(); ++b) {
    if (sw.tp[b] == 0) continue;
    const double precision =
        static_cast<double>(sw.tp[b]) / static_cast<double>(sw.tp[b] + sw.fp[b]);
    if (precision >= prec_floor) {
      best = std::max(best, static_cast<double>(sw.tp[b]) / static_cast<double>(sw.n_pos));
    }
  }
  return best;
}

double pr_auc(std::span<const double> scores, std::span<const Label> labels,
              bool higher_is_more_uncertain) {
  return pr_auc(sweep_thresholds(scores, labels, higher_is_more_uncertain));
}

double tpr_at_fpr(std::span<const double> scores, std::span<const Label> labels,
                  bool higher_is_more_uncertain, double fpr_cap) {
  return tpr_at_fpr(sweep_thresholds(scores, labels, higher_is_more_uncertain), fpr_cap);
}

double rec_at_prec(std::span<const double> scores, std::span<const Label> labels,
                   bool higher_is_more_uncertain, double prec_floor) {
  return rec_at_prec(sweep_thresholds(scores, labels, higher_is_more_uncertain), prec_floor);
}

std::vector<CurvePoint> roc_curve(const ThresholdSweep& sw) {
  std::vector<CurvePoint> out{{0.0, 0.0}};
  for (std::size_t b = 0; b < sw.tp.size(); ++b) {
    out.push_back({static_cast<double>(sw.fp[b]) / static_cast<double>(sw.n_neg),
                   static_cast<double>(sw.tp[b]) / static_cast<double>(sw.n_pos)});
  }
  return out;
}

std::vector<CurvePoint> pr_curve(const ThresholdSweep& sw) {
  std::vector<CurvePoint> out{{0.0, 1.0}};
  for (std::size_t b = 0; b < sw.tp.size(); ++b) {
    out.push_back({static_cast<double>(sw.tp[b]) / static_cast<double>(sw.n_pos),
                   static_cast<double>(sw.tp[b]) / static_cast<double>(sw.tp[b] + sw.fp[b])});
  }
  return out;
}

}  // namespace much
