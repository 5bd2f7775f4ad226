#include "much/agreement.hpp"

#include "much/error.hpp"

namespace much {

namespace {
std::size_t slot(Label l) noexcept { return l == Label::NonFactual ? 0 : 1; }
}  // namespace

void accumulate(Confusion& confusion, const AnnotationSet& a, const AnnotationSet& b) {
  if (a.labels.size() != b.labels.size()) {
    throw DataError("annotations '" + a.annotator + "' and '" + b.annotator + "' differ in length (" +
                    std::to_string(a.labels.size()) + " vs " + std::to_string(b.labels.size()) + ")");
  }
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    ++confusion[slot(a.labels[i])][slot(b.labels[i])];
  }
}

AgreementReport agreement_from_confusion(const Confusion& confusion) {
  AgreementReport r;
  r.confusion = confusion;
  const auto n = static_cast<double>(r.total());
  if (r.total() == 0) throw DataError("cannot compute agreement over zero claims");
  const auto& c = confusion;
  r.observed_agreement = static_cast<double>(c[0][0] + c[1][1]) / n;
  const double a_neg = static_cast<double>(c[0][0] + c[0][1]) / n;
  const double b_neg = static_cast<double>(c[0][0] + c[1][0]) / n;
  const double expected = a_neg * b_neg + (1.0 - a_neg) * (1.0 - b_neg);
  if (expected >= 1.0) {
    r.kappa = r.observed_agreement >= 1.0 ? 1.0 : 0.0;
  } else {
    r.kappa = (r.observed_agreement - expected) / (1.0 - expected);
  }
  return r;
}

AgreementReport cohen_kappa(const AnnotationSet& a, const AnnotationSet& b) {
  Confusion c{};
  accumulate(c, a, b);
  return agreement_from_confusion(c);
}

}  // namespace much
