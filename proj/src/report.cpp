#include "much/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "much/aggregation.hpp"
#include "much/dataset.hpp"
#include "much/error.hpp"
#include "much/jsonl.hpp"
#include "much/parallel.hpp"

namespace much {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(GroupKey key) noexcept {
  return key == GroupKey::Language ? "language" : "model";
}

GroupKey parse_group_key(std::string_view s) {
  if (s == "language" || s == "lang") return GroupKey::Language;
  if (s == "model") return GroupKey::Model;
  throw UsageError("unknown group-by key '" + std::string(s) + "' (expected language or model)");
}

void check_eval_options(const EvalOptions& options) {
  if (!(options.fpr_cap > 0.0 && options.fpr_cap < 1.0)) {
    throw UsageError(fmt::format("--fpr-cap must be in (0, 1), got {}", options.fpr_cap));
  }
  if (!(options.prec_floor > 0.0 && options.prec_floor <= 1.0)) {
    throw UsageError(fmt::format("--prec-floor must be in (0, 1], got {}", options.prec_floor));
  }
}

MetricSet compute_metrics(std::span<const double> scores, std::span<const Label> labels,
                          bool higher_is_more_uncertain, const EvalOptions& options) {
  MetricSet m;
  for (auto l : labels) (l == Label::NonFactual ? m.n_pos : m.n_neg)++;
  if (m.n_pos == 0 || m.n_neg == 0) {
    m.error = "single class (" + std::to_string(m.n_pos) + " non-factual, " + std::to_string(m.n_neg) +
              " factual)";
    return m;
  }
  const auto sweep = sweep_thresholds(scores, labels, higher_is_more_uncertain);
  m.roc_auc = roc_auc(scores, labels, higher_is_more_uncertain);
  m.pr_auc = pr_auc(sweep);
  m.tpr_at_fpr = tpr_at_fpr(sweep, options.fpr_cap);
  m.rec_at_prec = rec_at_prec(sweep, options.prec_floor);
  return m;
}

EvalReport evaluate_claims(const std::string& scorer, AggregatorKind aggregator,
                           bool higher_is_more_uncertain, std::span<const double> scores,
                           std::span<const Label> labels, std::span<const ClaimTags> tags,
                           const EvalOptions& options, bool with_curves) {
  EvalReport r;
  r.scorer = scorer;
  r.aggregator = aggregator;
  r.higher_is_more_uncertain = higher_is_more_uncertain;
  r.fpr_cap = options.fpr_cap;
  r.prec_floor = options.prec_floor;
  r.overall = compute_metrics(scores, labels, higher_is_more_uncertain, options);
  if (with_curves && r.overall.ok()) {
    const auto sweep = sweep_thresholds(scores, labels, higher_is_more_uncertain);
    r.roc = roc_curve(sweep);
    r.pr = pr_curve(sweep);
  }

  for (auto key : options.group_by) {
    std::map<std::string, std::pair<std::vector<double>, std::vector<Label>>> buckets;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const auto value =
          key == GroupKey::Language ? std::string(to_string(tags[i].language)) : tags[i].model;
      auto& b = buckets[value];
      b.first.push_back(scores[i]);
      b.second.push_back(labels[i]);
    }
    auto& out = r.groups[std::string(to_string(key))];
    for (const auto& [value, b] : buckets) {
      out[value] = compute_metrics(b.first, b.second, higher_is_more_uncertain, options);
    }
  }
  return r;
}

namespace {

json metrics_json(const MetricSet& m) {
  json j{{"n_pos", m.n_pos}, {"n_neg", m.n_neg}};
  if (!m.ok()) {
    j["error"] = m.error;
    return j;
  }
  j["roc_auc"] = m.roc_auc;
  j["pr_auc"] = m.pr_auc;
  j["tpr_at_fpr"] = m.tpr_at_fpr;
  j["rec_at_prec"] = m.rec_at_prec;
  return j;
}

json curve_json(const std::vector<CurvePoint>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

std::string cell(double v) { return std::isnan(v) ? "-" : fmt::format("{:.4f}", v); }

std::string file_stem(const EvalReport& r) {
  return r.scorer + "_" + std::string(to_string(r.aggregator));
}

}  // namespace

json to_json(const EvalReport& report) {
  json j{{"scorer", report.scorer},
         {"aggregator", to_string(report.aggregator)},
         {"higher_is_more_uncertain", report.higher_is_more_uncertain},
         {"fpr_cap", report.fpr_cap},
         {"prec_floor", report.prec_floor},
         {"overall", metrics_json(report.overall)}};
  json groups = json::object();
  for (const auto& [key, values] : report.groups) {
    json g = json::object();
    for (const auto& [value, m] : values) g[value] = metrics_json(m);
    groups[key] = std::move(g);
  }
  j["groups"] = std::move(groups);
  if (!report.roc.empty()) {
    j["curves"] = {{"roc", curve_json(report.roc)}, {"pr", curve_json(report.pr)}};
  }
  return j;
}

std::string summary_table(const std::vector<EvalReport>& reports) {
  struct Row {
    std::string scorer, agg, group;
    const MetricSet* m;
  };
  std::vector<Row> rows;
  for (const auto& r : reports) {
    const std::string agg(to_string(r.aggregator));
    rows.push_back({r.scorer, agg, "all", &r.overall});
    for (const auto& [key, values] : r.groups) {
      for (const auto& [value, m] : values) rows.push_back({r.scorer, agg, key + "=" + value, &m});
    }
  }
  std::size_t ws = 6, wa = 10, wg = 5;
  for (const auto& row : rows) {
    ws = std::max(ws, row.scorer.size());
    wa = std::max(wa, row.agg.size());
    wg = std::max(wg, row.group.size());
  }
  const std::string fpr = reports.empty() ? "10" : fmt::format("{:g}", reports.front().fpr_cap * 100);
  const std::string prec = reports.empty() ? "80" : fmt::format("{:g}", reports.front().prec_floor * 100);
  std::string out = fmt::format("{:<{}}  {:<{}}  {:<{}}  {:>7}  {:>7}  {:>7}  {:>7}  {:>12}  {:>12}\n", "scorer",
                                ws, "aggregator", wa, "group", wg, "n_pos", "n_neg", "ROC-AUC", "PR-AUC",
                                "TPR@FPR" + fpr + "%", "Rec@Prec" + prec + "%");
  for (const auto& row : rows) {
    out += fmt::format("{:<{}}  {:<{}}  {:<{}}  {:>7}  {:>7}  {:>7}  {:>7}  {:>12}  {:>12}", row.scorer, ws,
                       row.agg, wa, row.group, wg, row.m->n_pos, row.m->n_neg, cell(row.m->roc_auc),
                       cell(row.m->pr_auc), cell(row.m->tpr_at_fpr), cell(row.m->rec_at_prec));
    if (!row.m->ok()) out += "  (" + row.m->error + ")";
    out += '\n';
  }
  return out;
}

std::string curve_text(const std::vector<CurvePoint>& points) {
  std::string out;
  for (const auto& p : points) out += fmt::format("{} {}\n", p.y, p.x);
  return out;
}

namespace {

struct ScorerPlan {
  std::string label;
  bool native = false;
  std::string base;  // native scorer name
  bool higher_is_more_uncertain = true;
  std::map<std::string, TokenScoreVector> external;  // sample id -> scores
};

// Everything computed for one sample.
struct SampleWork {
  bool used = false;
  ClaimPartition partition;
  std::vector<Label> labels;
  std::vector<TokenScoreVector> token_scores;             // per scorer
  std::vector<std::vector<std::vector<double>>> claims;   // [scorer][aggregator][claim]
};

}  // namespace

PipelineResult run_evaluation(const std::vector<LabeledSample>& records, const PipelineOptions& options) {
  check_scorer_config(options.scoring.config);
  check_eval_options(options.eval);
  if (options.aggregators.empty()) throw UsageError("no aggregator selected");
  if (options.native_scorers.empty() && options.external.empty()) throw UsageError("no scorer selected");
  const StopSet& stops = options.stops ? *options.stops : StopSet::builtin();

  TokenCounts counts;
  for (const auto& r : records) counts[r.sample.id] = r.sample.tokens.size();

  std::vector<ScorerPlan> plans;
  for (const auto& name : options.native_scorers) {
    if (!is_native_scorer(name)) throw UsageError("unknown scorer '" + name + "'");
    ScorerPlan p;
    p.native = true;
    p.base = name;
    p.label = native_scorer_label(name, options.scoring.config);
    p.higher_is_more_uncertain = name == kTokenEntropy;
    plans.push_back(std::move(p));
  }
  for (const auto& src : options.external) {
    ScorerPlan p;
    p.label = src.meta.scorer_name;
    p.higher_is_more_uncertain = src.meta.higher_is_more_uncertain;
    p.external = ingest_external_scores(src.file, src.meta, counts);
    plans.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < plans.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (plans[i].label == plans[j].label) throw UsageError("scorer '" + plans[i].label + "' selected twice");
    }
  }

  std::vector<SampleWork> work(records.size());
  parallel_for(records.size(), options.threads, [&](std::size_t i) {
    const auto& rec = records[i];
    auto labels = resolve_labels(rec, options.annotator);
    if (!labels) return;
    auto& w = work[i];
    w.partition = partition_for(rec, stops, options.resegment);
    if (labels->labels.size() != w.partition.labeled_count()) {
      throw DataError("sample " + rec.sample.id + ": " + std::to_string(labels->labels.size()) +
                      " labels for " + std::to_string(w.partition.labeled_count()) + " claims");
    }
    w.labels = std::move(labels->labels);
    const auto mask = content_token_mask(rec.sample, w.partition, stops);
    for (const auto& plan : plans) {
      TokenScoreVector tv;
      if (plan.native) {
        tv = run_native_scorer(plan.base, rec.sample, options.scoring);
      } else {
        auto it = plan.external.find(rec.sample.id);
        if (it == plan.external.end()) {
          throw DataError("no " + plan.label + " scores for sample " + rec.sample.id);
        }
        tv = it->second;
      }
      std::vector<std::vector<double>> per_agg;
      for (auto agg : options.aggregators) per_agg.push_back(aggregate(tv, w.partition, mask, agg).values);
      w.claims.push_back(std::move(per_agg));
      w.token_scores.push_back(std::move(tv));
    }
    w.used = true;
  });

  PipelineResult result;
  std::vector<Label> labels;
  std::vector<ClaimTags> tags;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& id = records[i].sample.id;
    if (!work[i].used) {
      result.skipped.push_back(id);
      continue;
    }
    ++result.samples_evaluated;
    result.partitions.emplace_back(id, work[i].partition);
    labels.insert(labels.end(), work[i].labels.begin(), work[i].labels.end());
    tags.insert(tags.end(), work[i].labels.size(), ClaimTags{records[i].sample.language, records[i].sample.model});
    for (std::size_t s = 0; s < plans.size(); ++s) {
      result.token_scores[plans[s].label][id] = work[i].token_scores[s];
    }
  }

  for (std::size_t s = 0; s < plans.size(); ++s) {
    for (std::size_t a = 0; a < options.aggregators.size(); ++a) {
      std::vector<double> scores;
      scores.reserve(labels.size());
      for (const auto& w : work) {
        if (w.used) scores.insert(scores.end(), w.claims[s][a].begin(), w.claims[s][a].end());
      }
      const auto agg = options.aggregators[a];
      result.reports.push_back(evaluate_claims(plans[s].label, agg, plans[s].higher_is_more_uncertain, scores,
                                               labels, tags, options.eval, agg == options.curve_aggregator));
    }
  }
  return result;
}

std::vector<Artifact> evaluation_artifacts(const PipelineResult& result, AggregatorKind curve_aggregator) {
  std::vector<Artifact> out;
  for (const auto& r : result.reports) {
    const auto stem = file_stem(r);
    out.push_back({"reports/" + stem + ".json", to_json(r).dump(2) + "\n"});
    if (r.aggregator == curve_aggregator && !r.roc.empty()) {
      out.push_back({"curves/" + stem + "_roc.txt", curve_text(r.roc)});
      out.push_back({"curves/" + stem + "_pr.txt", curve_text(r.pr)});
    }
  }
  out.push_back({"reports/summary.txt", summary_table(result.reports)});

  for (const auto& [scorer, by_id] : result.token_scores) {
    out.push_back({"scores/" + scorer + ".jsonl", token_scores_jsonl(by_id)});
  }

  std::string parts;
  for (const auto& [id, p] : result.partitions) {
    const json row{{"sample_id", id}, {"claims", io::to_json(p)}, {"eos_claim", p.eos_claim},
                   {"partition_hash", partition_hash(p)}};
    parts += io::dump_line(row) + "\n";
  }
  out.push_back({"partitions.jsonl", std::move(parts)});
  return out;
}

Manifest persist_results(const PipelineResult& result, AggregatorKind curve_aggregator, const fs::path& out_dir) {
  return write_artifacts(out_dir, evaluation_artifacts(result, curve_aggregator));
}

}  // namespace much
