#include "much/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace much {

using nlohmann::json;

namespace {

constexpr Language kLanguages[] = {Language::EN, Language::FR, Language::ES, Language::DE};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string percent(double v) { return std::isnan(v) ? "-" : fmt::format("{:.1f}%", 100.0 * v); }

json cell_json(const HallucinationCell& c) {
  json j{{"samples", c.samples}, {"hallucinating", c.hallucinating}};
  j["rate"] = c.samples ? json(c.rate()) : json(nullptr);
  j["mean_nonfactual_fraction"] = c.hallucinating ? json(c.mean_nonfactual_fraction()) : json(nullptr);
  return j;
}

// Model rows by language columns, with totals in the last row and column.
template <class CellFn, class ModelFn, class LangFn, class TotalFn>
std::string grid(const std::vector<std::string>& models, CellFn cell, ModelFn model_total, LangFn lang_total,
                 TotalFn total) {
  std::size_t w0 = 5;
  for (const auto& m : models) w0 = std::max(w0, m.size());
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"model"});
  for (auto l : kLanguages) rows[0].emplace_back(to_string(l));
  rows[0].emplace_back("all");
  for (const auto& m : models) {
    std::vector<std::string> r{m};
    for (auto l : kLanguages) r.push_back(cell(m, l));
    r.push_back(model_total(m));
    rows.push_back(std::move(r));
  }
  std::vector<std::string> last{"all"};
  for (auto l : kLanguages) last.push_back(lang_total(l));
  last.push_back(total());
  rows.push_back(std::move(last));

  std::vector<std::size_t> widths(rows[0].size(), 0);
  widths[0] = w0;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], r[i].size());
  }
  std::string out;
  for (const auto& r : rows) {
    out += fmt::format("{:<{}}", r[0], widths[0]);
    for (std::size_t i = 1; i < r.size(); ++i) out += fmt::format("  {:>{}}", r[i], widths[i]);
    out += '\n';
  }
  return out;
}

}  // namespace

void HallucinationCell::add(const std::vector<Label>& labels) {
  ++samples;
  const auto bad = std::count(labels.begin(), labels.end(), Label::NonFactual);
  if (bad == 0) return;
  ++hallucinating;
  nonfactual_fraction_sum += static_cast<double>(bad) / static_cast<double>(labels.size());
}

double HallucinationCell::rate() const noexcept {
  return samples ? static_cast<double>(hallucinating) / static_cast<double>(samples) : kNaN;
}

double HallucinationCell::mean_nonfactual_fraction() const noexcept {
  return hallucinating ? nonfactual_fraction_sum / static_cast<double>(hallucinating) : kNaN;
}

HallucinationStats hallucination_stats(const std::vector<LabeledSample>& records, std::string_view annotator) {
  HallucinationStats s;
  for (const auto& r : records) {
    const auto labels = resolve_labels(r, annotator);
    if (!labels) {
      s.skipped.push_back(r.sample.id);
      continue;
    }
    s.cells[{r.sample.model, r.sample.language}].add(labels->labels);
    s.by_model[r.sample.model].add(labels->labels);
    s.by_language[r.sample.language].add(labels->labels);
    s.overall.add(labels->labels);
  }
  return s;
}

json to_json(const HallucinationStats& stats) {
  json cells = json::array();
  for (const auto& [key, c] : stats.cells) {
    json j = cell_json(c);
    j["model"] = key.first;
    j["language"] = to_string(key.second);
    cells.push_back(std::move(j));
  }
  json models = json::object();
  for (const auto& [m, c] : stats.by_model) models[m] = cell_json(c);
  json langs = json::object();
  for (const auto& [l, c] : stats.by_language) langs[std::string(to_string(l))] = cell_json(c);
  return {{"cells", std::move(cells)},
          {"by_model", std::move(models)},
          {"by_language", std::move(langs)},
          {"overall", cell_json(stats.overall)},
          {"skipped", stats.skipped.size()}};
}

std::string to_text(const HallucinationStats& stats) {
  std::vector<std::string> models;
  for (const auto& [m, c] : stats.by_model) models.push_back(m);
  auto show = [](const HallucinationCell* c) {
    if (!c || c->samples == 0) return std::string("-");
    return percent(c->rate()) + " (" + percent(c->mean_nonfactual_fraction()) + ")";
  };
  auto find_cell = [&](const std::string& m, Language l) -> const HallucinationCell* {
    auto it = stats.cells.find({m, l});
    return it == stats.cells.end() ? nullptr : &it->second;
  };
  std::string out = "Samples with at least one non-factual claim (mean non-factual claim share among them)\n";
  out += grid(
      models, [&](const std::string& m, Language l) { return show(find_cell(m, l)); },
      [&](const std::string& m) { return show(&stats.by_model.at(m)); },
      [&](Language l) {
        auto it = stats.by_language.find(l);
        return show(it == stats.by_language.end() ? nullptr : &it->second);
      },
      [&] { return show(&stats.overall); });
  if (!stats.skipped.empty()) out += fmt::format("skipped {} samples without agreed labels\n", stats.skipped.size());
  return out;
}

json to_json(const CompositionTable& table) {
  json cells = json::array();
  for (const auto& [key, n] : table.counts) {
    cells.push_back({{"language", to_string(key.first)},
                     {"model", key.second},
                     {"samples", n},
                     {"share", table.cell(key.first, key.second)}});
  }
  json models = json::object();
  for (const auto& m : table.models) models[m] = table.model_share(m);
  json langs = json::object();
  for (auto l : kLanguages) langs[std::string(to_string(l))] = table.language_share(l);
  return {{"total", table.total}, {"cells", std::move(cells)}, {"by_model", std::move(models)},
          {"by_language", std::move(langs)}};
}

std::string to_text(const CompositionTable& table) {
  std::string out = "Share of samples per language and model\n";
  out += grid(
      table.models, [&](const std::string& m, Language l) { return percent(table.total ? table.cell(l, m) : kNaN); },
      [&](const std::string& m) { return percent(table.total ? table.model_share(m) : kNaN); },
      [&](Language l) { return percent(table.total ? table.language_share(l) : kNaN); },
      [&] { return table.total ? std::string("100.0%") : std::string("-"); });
  return out;
}

json to_json(const AgreementReport& report) {
  const auto& c = report.confusion;
  return {{"confusion", {{c[0][0], c[0][1]}, {c[1][0], c[1][1]}}},
          {"kappa", report.kappa},
          {"observed_agreement", report.observed_agreement},
          {"total", report.total()}};
}

std::string to_text(const AgreementReport& report, const std::string& a, const std::string& b) {
  const auto& c = report.confusion;
  std::string out = fmt::format("Agreement {} (rows) vs {} (columns), kappa={:.3f}, observed={:.3f}\n", a, b,
                                report.kappa, report.observed_agreement);
  out += fmt::format("{:>6}  {:>10}  {:>10}\n", "", "-1", "+1");
  out += fmt::format("{:>6}  {:>10}  {:>10}\n", "-1", c[0][0], c[0][1]);
  out += fmt::format("{:>6}  {:>10}  {:>10}\n", "+1", c[1][0], c[1][1]);
  return out;
}

}  // namespace much
