#pragma once

// Labeled datasets built on top of the synthetic samples.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "much/segmenter.hpp"
#include "support/synthetic.hpp"

namespace much::testing {

// A sample with its partition stored and labels from two annotators that
// agree with probability `agree`.
inline LabeledSample random_labeled(Rng& rng, const std::string& id, double agree = 0.8,
                                    const SyntheticOptions& opt = {1, 40, 0.97}) {
  LabeledSample rec;
  rec.sample = random_sample(rng, id, opt);
  const auto p = segment(rec.sample);
  const auto a = random_labels(rng, p.labeled_count());
  auto b = a;
  if (!b.empty() && !chance(rng, agree)) {
    auto& flip = b[uniform(rng, 0, b.size() - 1)];
    flip = flip == Label::NonFactual ? Label::Factual : Label::NonFactual;
  }
  rec.partition = p;
  rec.annotations["gpt-4o"] = {"gpt-4o", a};
  rec.annotations["gpt-4.1"] = {"gpt-4.1", b};
  return rec;
}

inline std::vector<LabeledSample> random_dataset(std::size_t n, std::uint64_t seed, double agree = 0.8) {
  Rng rng(seed);
  std::vector<LabeledSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "s%05zu", i);
    out.push_back(random_labeled(rng, id, agree));
  }
  return out;
}

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("much-test-" + tag + "-" + std::to_string(rd()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

}  // namespace much::testing
