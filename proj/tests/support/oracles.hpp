#pragma once

// Quadratic reference implementations of the ranking metrics. They share
// no code with the library.

#include <algorithm>
#include <functional>
#include <vector>

#include "much/types.hpp"

namespace much::testing {

// Fraction of (non-factual, factual) pairs where the non-factual claim
// scores higher; ties count half.
inline double pair_auc_oracle(const std::vector<double>& s, const std::vector<Label>& l) {
  double wins = 0;
  double pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (l[i] != Label::NonFactual) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (l[j] != Label::Factual) continue;
      pairs += 1;
      wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

// Average precision from a sweep over every distinct score used as a
// ">=" threshold.
inline double average_precision_oracle(const std::vector<double>& s, const std::vector<Label>& l) {
  std::vector<double> thr(s);
  std::sort(thr.begin(), thr.end(), std::greater<>());
  thr.erase(std::unique(thr.begin(), thr.end()), thr.end());
  double n_pos = 0;
  for (auto x : l) n_pos += x == Label::NonFactual;
  double ap = 0;
  double prev_recall = 0;
  for (double t : thr) {
    double tp = 0;
    double fp = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= t) (l[i] == Label::NonFactual ? tp : fp) += 1;
    }
    const double recall = tp / n_pos;
    ap += (recall - prev_recall) * (tp / (tp + fp));
    prev_recall = recall;
  }
  return ap;
}

}  // namespace much::testing
