#include "much/cli.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <optional>

#include <fmt/format.h>
#include <json.hpp>

#include "much/aggregation.hpp"
#include "much/agreement.hpp"
#include "much/dataset.hpp"
#include "much/error.hpp"
#include "much/external_scores.hpp"
#include "much/jsonl.hpp"
#include "much/log.hpp"
#include "much/parallel.hpp"
#include "much/persist.hpp"
#include "much/report.hpp"
#include "much/scorers.hpp"
#include "much/segmenter.hpp"
#include "much/stats.hpp"
#include "much/text.hpp"
#include "much/word_tokenizer.hpp"

namespace much::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kAll(std::begin(kCommands), std::end(kCommands));
const std::vector<std::string> kScoring{"score", "aggregate", "evaluate"};
const std::vector<std::string> kAggregating{"aggregate", "evaluate"};
const std::vector<std::string> kLabelled{"evaluate", "stats"};
const std::vector<std::string> kAnnotatorPair{"stats", "filter"};
const std::vector<std::string> kPartitioned{"aggregate", "evaluate", "filter"};
const std::vector<std::string> kNeedsOutput{"segment", "score", "aggregate", "evaluate", "filter",
                                            "audit-tokenizer"};

using Binder = std::function<CLI::Option*(CLI::App&, RunConfig&, const std::string& flag, const std::string& help)>;

struct FlagDef {
  FlagSpec spec;
  std::string help;
  Binder bind;
};

template <class T>
Binder value(T RunConfig::*member) {
  return [member](CLI::App& app, RunConfig& c, const std::string& flag, const std::string& help) {
    return app.add_option(flag, c.*member, help)->capture_default_str();
  };
}

Binder list(auto RunConfig::*member) {
  return [member](CLI::App& app, RunConfig& c, const std::string& flag, const std::string& help) {
    return app.add_option(flag, c.*member, help)->delimiter(',');
  };
}

Binder toggle(bool RunConfig::*member) {
  return [member](CLI::App& app, RunConfig& c, const std::string& flag, const std::string& help) {
    return app.add_flag(flag, c.*member, help);
  };
}

const std::vector<FlagDef>& flag_defs() {
  static const std::vector<FlagDef> defs = {
      {{"--input", "input", kAll}, "Dataset file or directory of *.jsonl files", value(&RunConfig::input)},
      {{"--output", "output", kAll}, "Output directory (optional for stats and bench)", value(&RunConfig::output)},
      {{"--format", "format", kAll}, "Input layout: canonical or published", value(&RunConfig::format)},
      {{"--scorer", "scorers", kScoring},
       "Native scorers: token_likelihood, max_likelihood, token_entropy (default: all three)",
       list(&RunConfig::scorers)},
      {{"--scores", "score_files", kAggregating},
       "Precomputed token-score JSONL file; orientation from <file>.meta.json when present",
       list(&RunConfig::score_files)},
      {{"--scores-orientation", "score_orientation", kAggregating},
       "Orientation of --scores files without a sidecar: uncertainty or confidence",
       value(&RunConfig::score_orientation)},
      {{"--delta", "delta", kScoring}, "Candidates used by token_entropy, 1..24", value(&RunConfig::delta)},
      {{"--agg", "aggregators", kAggregating}, "Aggregators: mean, max, geomean, product (default: all)",
       list(&RunConfig::aggregators)},
      {{"--curve-agg", "curve_aggregator", {"evaluate"}}, "Aggregator whose ROC/PR points are exported",
       value(&RunConfig::curve_aggregator)},
      {{"--fpr-cap", "fpr_cap", {"evaluate"}}, "FPR cap for TPR@FPR, in (0, 1)", value(&RunConfig::fpr_cap)},
      {{"--prec-floor", "prec_floor", {"evaluate"}}, "Precision floor for Rec@Prec, in (0, 1]",
       value(&RunConfig::prec_floor)},
      {{"--group-by", "group_by", {"evaluate"}}, "Breakdowns: language, model", list(&RunConfig::group_by)},
      {{"--stopwords", "stopwords", kAll}, "Stopword/punctuation list files or directories replacing the built-in set",
       list(&RunConfig::stopwords)},
      {{"--logits", "logit_kind", kScoring}, "Stored candidate values: raw (logits) or logprob",
       value(&RunConfig::logit_kind)},
      {{"--annotator", "annotator", kLabelled}, "Label source: an annotator name, or auto for agreed labels",
       value(&RunConfig::annotator)},
      {{"--annotator-a", "annotator_a", kAnnotatorPair}, "First annotator of the agreement pair",
       value(&RunConfig::annotator_a)},
      {{"--annotator-b", "annotator_b", kAnnotatorPair}, "Second annotator of the agreement pair",
       value(&RunConfig::annotator_b)},
      {{"--resegment", "resegment", kPartitioned}, "Ignore stored partitions and segment afresh",
       toggle(&RunConfig::resegment)},
      {{"--skip-invalid", "skip_invalid", kAll}, "Continue past rows that fail to parse (they are still reported)",
       toggle(&RunConfig::skip_invalid)},
      {{"--threads", "threads", kAll}, "Worker threads, 0 for one per core", value(&RunConfig::threads)},
      {{"--generation-seconds", "generation_seconds", {"bench"}},
       "Generation wall time to compare segmentation time against", value(&RunConfig::generation_seconds)},
      {{"--repeat", "repeat", {"bench"}}, "Timed segmentation passes", value(&RunConfig::repeat)},
      {{"--log-level", "log_level", kAll}, "debug, info, warn, error or off", value(&RunConfig::log_level)},
  };
  return defs;
}

const char* command_help(std::string_view name) {
  if (name == "segment") return "Split generations into claims";
  if (name == "score") return "Compute token-level uncertainty scores";
  if (name == "aggregate") return "Reduce token scores to claim scores";
  if (name == "evaluate") return "Score, aggregate and evaluate against claim labels";
  if (name == "stats") return "Hallucination rates, dataset composition and annotator agreement";
  if (name == "filter") return "Apply the annotator-agreement, EOS and top-24 filters";
  if (name == "audit-tokenizer") return "Report word-tokenizer edge cases and partition divergences";
  return "Time segmentation over a corpus";
}

// --- errors ------------------------------------------------------------

class LoadFailure : public DataError {
 public:
  explicit LoadFailure(std::vector<LoadError> rows)
      : DataError(fmt::format("{} malformed row(s)", rows.size())), rows_(std::move(rows)) {}
  const std::vector<LoadError>& rows() const noexcept { return rows_; }

 private:
  std::vector<LoadError> rows_;
};

json load_errors_json(const std::vector<LoadError>& rows) {
  json arr = json::array();
  for (const auto& e : rows) arr.push_back({{"file", e.file}, {"row", e.row}, {"message", e.message}});
  return arr;
}

void report_error(std::ostream& err, std::string_view type, const std::string& message, json extra = json::object()) {
  json body{{"type", type}, {"message", message}};
  body.update(extra);
  err << io::dump_line(json{{"error", std::move(body)}}) << '\n';
}

// --- validation --------------------------------------------------------

log::Level parse_log_level(std::string_view s) {
  if (s == "debug") return log::Level::Debug;
  if (s == "info") return log::Level::Info;
  if (s == "warn") return log::Level::Warn;
  if (s == "error") return log::Level::Error;
  if (s == "off") return log::Level::Off;
  throw UsageError("--log-level must be one of debug, info, warn, error, off");
}

bool parse_orientation(std::string_view s) {
  if (s == "uncertainty") return true;
  if (s == "confidence") return false;
  throw UsageError("--scores-orientation must be uncertainty or confidence");
}

bool accepts(const std::string& command, const std::string& field) {
  for (const auto& d : flag_defs()) {
    if (d.spec.field == field) {
      return std::find(d.spec.commands.begin(), d.spec.commands.end(), command) != d.spec.commands.end();
    }
  }
  return false;
}

void validate(const RunConfig& c) {
  if (std::find(kAll.begin(), kAll.end(), c.command) == kAll.end()) {
    throw UsageError("unknown command '" + c.command + "'");
  }
  std::error_code ec;
  if (c.input.empty()) throw UsageError("--input is required");
  if (!fs::exists(c.input, ec)) throw UsageError("--input: no such file or directory: " + c.input.string());
  const bool needs_output = std::find(kNeedsOutput.begin(), kNeedsOutput.end(), c.command) != kNeedsOutput.end();
  if (needs_output && c.output.empty()) throw UsageError("--output is required for " + c.command);
  if (!c.output.empty() && fs::exists(c.output, ec) && !fs::is_directory(c.output, ec)) {
    throw UsageError("--output exists and is not a directory: " + c.output.string());
  }
  parse_dataset_format(c.format);
  parse_log_level(c.log_level);
  for (const auto& p : c.stopwords) {
    if (!fs::exists(p, ec)) throw UsageError("--stopwords: no such file or directory: " + p.string());
  }
  if (c.threads > 1024) throw UsageError("--threads must be at most 1024");
  if (accepts(c.command, "delta")) {
    check_scorer_config(ScorerConfig{c.delta});
    parse_logit_kind(c.logit_kind);
    for (const auto& s : c.scorers) {
      if (!is_native_scorer(s)) throw UsageError("unknown scorer '" + s + "'");
    }
  }
  if (accepts(c.command, "aggregators")) {
    for (const auto& a : c.aggregators) parse_aggregator(a);
    parse_orientation(c.score_orientation);
    for (const auto& p : c.score_files) {
      if (!fs::is_regular_file(p, ec)) throw UsageError("--scores: no such file: " + p.string());
    }
  }
  if (c.command == "evaluate") {
    parse_aggregator(c.curve_aggregator);
    check_eval_options(EvalOptions{c.fpr_cap, c.prec_floor, {}});
    for (const auto& g : c.group_by) parse_group_key(g);
  }
  if (accepts(c.command, "annotator_a") && c.annotator_a == c.annotator_b) {
    throw UsageError("--annotator-a and --annotator-b must differ");
  }
  if (c.command == "bench") {
    if (c.repeat < 1) throw UsageError("--repeat must be at least 1");
    if (!(c.generation_seconds >= 0.0)) throw UsageError("--generation-seconds must be non-negative");
  }
}

// --- shared plumbing ---------------------------------------------------

struct Context {
  const RunConfig& config;
  std::ostream& out;
  std::optional<StopSet> custom_stops;
  unsigned threads = 1;

  const StopSet& stops() const { return custom_stops ? *custom_stops : StopSet::builtin(); }
};

Dataset load(const Context& ctx) {
  const auto& c = ctx.config;
  auto ds = load_dataset(c.input, parse_dataset_format(c.format));
  for (const auto& w : ds.warnings) log::warn("load_warning", {{"detail", w}});
  log::info("loaded", {{"path", c.input.string()},
                       {"samples", std::to_string(ds.records.size())},
                       {"malformed", std::to_string(ds.errors.size())}});
  if (!ds.errors.empty()) {
    if (!c.skip_invalid) throw LoadFailure(ds.errors);
    for (const auto& e : ds.errors) {
      log::warn("skipped_row", {{"file", e.file}, {"row", std::to_string(e.row)}, {"detail", e.message}});
    }
  }
  return ds;
}

std::vector<ClaimPartition> segment_all(const Context& ctx, const std::vector<LabeledSample>& records,
                                        bool use_stored) {
  std::vector<ClaimPartition> parts(records.size());
  parallel_for(records.size(), ctx.threads, [&](std::size_t i) {
    try {
      parts[i] = partition_for(records[i], ctx.stops(), !use_stored);
    } catch (const DataError& e) {
      throw DataError("sample " + records[i].sample.id + ": " + e.what());
    }
  });
  return parts;
}

std::vector<std::string> native_scorers(const RunConfig& c) {
  if (!c.scorers.empty()) return c.scorers;
  if (!c.score_files.empty()) return {};
  return {kTokenLikelihood, kMaxLikelihood, kTokenEntropy};
}

std::vector<AggregatorKind> aggregators(const RunConfig& c) {
  if (c.aggregators.empty()) return {std::begin(kAllAggregators), std::end(kAllAggregators)};
  std::vector<AggregatorKind> out;
  for (const auto& a : c.aggregators) {
    const auto k = parse_aggregator(a);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

std::vector<ExternalScoreSource> external_sources(const RunConfig& c) {
  std::vector<ExternalScoreSource> out;
  for (const auto& f : c.score_files) {
    auto meta = read_sidecar_meta(f);
    if (!meta) {
      meta = ExternalScoreMeta{};
      meta->scorer_name = f.stem().string();
      meta->higher_is_more_uncertain = parse_orientation(c.score_orientation);
    }
    out.push_back({f, *meta});
  }
  return out;
}

ScoringOptions scoring_options(const RunConfig& c) {
  return ScoringOptions{ScorerConfig{c.delta}, parse_logit_kind(c.logit_kind)};
}

Manifest persist(const Context& ctx, std::vector<Artifact> artifacts) {
  auto m = write_artifacts(ctx.config.output, std::move(artifacts));
  log::info("persisted", {{"dir", ctx.config.output.string()}, {"artifacts", std::to_string(m.artifacts.size())}});
  return m;
}

std::string claim_text(const Sample& s, const Claim& claim) {
  std::string t;
  for (auto i : claim) t += s.tokens[i].surface;
  return t;
}

json partition_row(const std::string& id, const ClaimPartition& p) {
  return {{"sample_id", id}, {"claims", io::to_json(p)}, {"eos_claim", p.eos_claim},
          {"partition_hash", partition_hash(p)}};
}

// --- commands ----------------------------------------------------------

int cmd_segment(Context& ctx) {
  const auto ds = load(ctx);
  const auto parts = segment_all(ctx, ds.records, false);
  std::string body;
  std::size_t claims = 0;
  std::size_t eos = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& s = ds.records[i].sample;
    json row = partition_row(s.id, parts[i]);
    json texts = json::array();
    for (const auto& c : parts[i].labeled()) texts.push_back(claim_text(s, c));
    row["texts"] = std::move(texts);
    body += io::dump_line(row) + "\n";
    claims += parts[i].labeled_count();
    eos += parts[i].eos_claim ? 1 : 0;
  }
  const json summary{{"samples", parts.size()}, {"claims", claims}, {"eos_claims", eos}};
  persist(ctx, {{"partitions.jsonl", body}, {"segment_summary.json", summary.dump(2) + "\n"}});
  ctx.out << fmt::format("samples={} claims={} eos_claims={}\n", parts.size(), claims, eos);
  return 0;
}

int cmd_score(Context& ctx) {
  const auto& c = ctx.config;
  const auto ds = load(ctx);
  const auto opts = scoring_options(c);
  const auto names = native_scorers(c);
  std::vector<std::vector<TokenScoreVector>> per_sample(ds.records.size());
  parallel_for(ds.records.size(), ctx.threads, [&](std::size_t i) {
    const auto& s = ds.records[i].sample;
    for (const auto& n : names) {
      try {
        per_sample[i].push_back(run_native_scorer(n, s, opts));
      } catch (const DataError& e) {
        throw DataError("sample " + s.id + ": " + e.what());
      }
    }
  });
  std::vector<Artifact> artifacts;
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::map<std::string, TokenScoreVector> by_id;
    for (std::size_t i = 0; i < ds.records.size(); ++i) by_id[ds.records[i].sample.id] = per_sample[i][k];
    const auto label = native_scorer_label(names[k], opts.config);
    ExternalScoreMeta meta{label, {{"logits", std::string(to_string(opts.logit_kind))}}, names[k] == kTokenEntropy};
    if (names[k] == kTokenEntropy) meta.hyperparams["delta"] = std::to_string(c.delta);
    artifacts.push_back({"scores/" + label + ".jsonl", token_scores_jsonl(by_id)});
    artifacts.push_back({"scores/" + label + ".jsonl.meta.json", sidecar_json(meta)});
  }
  persist(ctx, std::move(artifacts));
  ctx.out << fmt::format("samples={} scorers={}\n", ds.records.size(), names.size());
  return 0;
}

int cmd_aggregate(Context& ctx) {
  const auto& c = ctx.config;
  const auto ds = load(ctx);
  const auto parts = segment_all(ctx, ds.records, !c.resegment);
  const auto aggs = aggregators(c);
  const auto opts = scoring_options(c);

  struct Source {
    std::string label;
    std::string native;
    std::map<std::string, TokenScoreVector> external;
  };
  std::vector<Source> sources;
  for (const auto& n : native_scorers(c)) sources.push_back({native_scorer_label(n, opts.config), n, {}});
  TokenCounts counts;
  for (const auto& r : ds.records) counts[r.sample.id] = r.sample.tokens.size();
  for (const auto& src : external_sources(c)) {
    sources.push_back({src.meta.scorer_name, "", ingest_external_scores(src.file, src.meta, counts)});
  }

  // [sample][source][aggregator] -> claim values
  std::vector<std::vector<std::vector<std::vector<double>>>> values(ds.records.size());
  parallel_for(ds.records.size(), ctx.threads, [&](std::size_t i) {
    const auto& s = ds.records[i].sample;
    const auto mask = content_token_mask(s, parts[i], ctx.stops());
    for (const auto& src : sources) {
      TokenScoreVector tv;
      if (!src.native.empty()) {
        tv = run_native_scorer(src.native, s, opts);
      } else if (auto it = src.external.find(s.id); it != src.external.end()) {
        tv = it->second;
      } else {
        throw DataError("no " + src.label + " scores for sample " + s.id);
      }
      auto& row = values[i].emplace_back();
      for (auto a : aggs) row.push_back(aggregate(tv, parts[i], mask, a).values);
    }
  });

  std::vector<Artifact> artifacts;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    for (std::size_t a = 0; a < aggs.size(); ++a) {
      std::string body;
      for (std::size_t i = 0; i < ds.records.size(); ++i) {
        body += io::dump_line(json{{"sample_id", ds.records[i].sample.id},
                                   {"scorer", sources[k].label},
                                   {"aggregator", to_string(aggs[a])},
                                   {"values", values[i][k][a]}}) +
                "\n";
      }
      artifacts.push_back({"claim_scores/" + sources[k].label + "_" + std::string(to_string(aggs[a])) + ".jsonl",
                           std::move(body)});
    }
  }
  std::string part_body;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    part_body += io::dump_line(partition_row(ds.records[i].sample.id, parts[i])) + "\n";
  }
  artifacts.push_back({"partitions.jsonl", std::move(part_body)});
  persist(ctx, std::move(artifacts));
  ctx.out << fmt::format("samples={} scorers={} aggregators={}\n", ds.records.size(), sources.size(), aggs.size());
  return 0;
}

int cmd_evaluate(Context& ctx) {
  const auto& c = ctx.config;
  const auto ds = load(ctx);
  PipelineOptions p;
  p.native_scorers = native_scorers(c);
  p.external = external_sources(c);
  p.scoring = scoring_options(c);
  p.aggregators = aggregators(c);
  p.curve_aggregator = parse_aggregator(c.curve_aggregator);
  p.eval.fpr_cap = c.fpr_cap;
  p.eval.prec_floor = c.prec_floor;
  for (const auto& g : c.group_by) p.eval.group_by.push_back(parse_group_key(g));
  p.annotator = c.annotator;
  p.resegment = c.resegment;
  p.threads = ctx.threads;
  p.stops = &ctx.stops();

  const auto result = run_evaluation(ds.records, p);
  if (!result.skipped.empty()) {
    log::warn("unlabeled_samples", {{"count", std::to_string(result.skipped.size())}, {"annotator", c.annotator}});
  }
  persist_results(result, p.curve_aggregator, c.output);
  log::info("persisted", {{"dir", c.output.string()}, {"reports", std::to_string(result.reports.size())}});
  ctx.out << summary_table(result.reports);
  return 0;
}

int cmd_stats(Context& ctx) {
  const auto& c = ctx.config;
  const auto ds = load(ctx);
  const auto hs = hallucination_stats(ds.records, c.annotator);
  const auto comp = dataset_composition(ds.records);

  Confusion confusion{};
  std::size_t paired = 0;
  for (const auto& r : ds.records) {
    auto a = r.annotations.find(c.annotator_a);
    auto b = r.annotations.find(c.annotator_b);
    if (a == r.annotations.end() || b == r.annotations.end()) continue;
    try {
      accumulate(confusion, a->second, b->second);
    } catch (const DataError& e) {
      throw DataError("sample " + r.sample.id + ": " + e.what());
    }
    ++paired;
  }

  json j{{"hallucination", to_json(hs)}, {"composition", to_json(comp)}};
  std::string text = to_text(hs) + "\n" + to_text(comp);
  if (paired > 0 && (confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1]) > 0) {
    const auto ag = agreement_from_confusion(confusion);
    j["agreement"] = to_json(ag);
    j["agreement"]["annotator_a"] = c.annotator_a;
    j["agreement"]["annotator_b"] = c.annotator_b;
    j["agreement"]["samples"] = paired;
    text += "\n" + to_text(ag, c.annotator_a, c.annotator_b);
  }
  if (!c.output.empty()) persist(ctx, {{"stats.json", j.dump(2) + "\n"}, {"stats.txt", text}});
  ctx.out << text;
  return 0;
}

int cmd_filter(Context& ctx) {
  const auto& c = ctx.config;
  const auto ds = load(ctx);
  FilterSummary summary;
  const FilterConfig fc{c.annotator_a, c.annotator_b, c.resegment};
  const auto kept = apply_filters(ds.records, fc, ctx.stops(), summary);

  std::string body;
  for (const auto& r : kept) body += io::serialize(r) + "\n";
  json by_reason = json::object();
  for (const auto& [reason, n] : summary.by_reason) by_reason[std::string(to_string(reason))] = n;
  json dropped = json::array();
  for (const auto& [id, outcome] : summary.dropped) {
    json reasons = json::array();
    for (auto r : outcome.reasons) reasons.push_back(to_string(r));
    dropped.push_back({{"sample_id", id}, {"reasons", std::move(reasons)}});
  }
  const json report{{"input", summary.input},       {"kept", summary.kept},
                    {"claims_in", summary.claims_in}, {"claims_kept", summary.claims_kept},
                    {"by_reason", by_reason},        {"dropped", std::move(dropped)},
                    {"malformed_rows", load_errors_json(ds.errors)}};
  persist(ctx, {{"kept.jsonl", body}, {"filter_report.json", report.dump(2) + "\n"}});
  ctx.out << fmt::format("input={} kept={} claims_in={} claims_kept={}", summary.input, summary.kept,
                         summary.claims_in, summary.claims_kept);
  for (const auto& [reason, n] : summary.by_reason) ctx.out << ' ' << to_string(reason) << '=' << n;
  ctx.out << '\n';
  return 0;
}

// Word-level patterns whose Treebank handling is not pinned down.
std::vector<std::string> edge_kinds(const std::string& word) {
  std::vector<std::string> kinds;
  const auto dot = word.find('.');
  if (word == "..." || word.find("\xE2\x80\xA6") != std::string::npos) {
    kinds.emplace_back("ellipsis");
  } else if (dot != std::string::npos && dot + 1 < word.size()) {
    kinds.emplace_back("internal_period");
  }
  if (word.find('\'') != std::string::npos || word.find("\xE2\x80\x99") != std::string::npos) {
    kinds.emplace_back("apostrophe");
  }
  return kinds;
}

int cmd_audit(Context& ctx) {
  const auto ds = load(ctx);
  std::vector<json> rows(ds.records.size());
  std::vector<int> diverged(ds.records.size(), -1);  // -1 no stored partition, 0 equal, 1 differs
  std::vector<std::size_t> split_starts(ds.records.size(), 0);
  parallel_for(ds.records.size(), ctx.threads, [&](std::size_t i) {
    const auto& rec = ds.records[i];
    const auto& s = rec.sample;
    const auto words = tokenize_words(s.generation_text);
    const auto starts = find_claim_starts(words, ctx.stops());

    json edges = json::array();
    for (const auto& w : words) {
      auto kinds = edge_kinds(w.text);
      if (!kinds.empty()) edges.push_back({{"word", w.text}, {"char_start", w.char_start}, {"kinds", kinds}});
    }
    // Claim starts that fall inside a model token rather than at its first
    // visible character; the token is assigned to only one side.
    json inside = json::array();
    std::size_t t = 0;
    for (auto st : starts) {
      while (t < s.tokens.size() && s.tokens[t].char_end <= st) ++t;
      if (t >= s.tokens.size() || s.tokens[t].is_eos) break;
      const auto& tok = s.tokens[t];
      const auto anchor = tok.char_start + std::min(text::leading_space(text::decode_utf8(tok.surface)), tok.char_end - tok.char_start);
      if (st > anchor && st < tok.char_end) inside.push_back({{"char", st}, {"token", t}});
    }
    split_starts[i] = inside.size();

    json row{{"sample_id", s.id}};
    bool notable = !edges.empty() || !inside.empty();
    if (rec.partition) {
      const auto fresh = segment(s, ctx.stops());
      diverged[i] = fresh == *rec.partition ? 0 : 1;
      if (diverged[i]) {
        std::size_t k = 0;
        while (k < fresh.claims.size() && k < rec.partition->claims.size() && fresh.claims[k] == rec.partition->claims[k]) ++k;
        row["partition_divergence"] = {{"first_claim", k},
                                       {"stored_claims", rec.partition->claims.size()},
                                       {"fresh_claims", fresh.claims.size()}};
        notable = true;
      }
    }
    if (!notable) return;
    row["edge_words"] = std::move(edges);
    row["starts_inside_tokens"] = std::move(inside);
    rows[i] = std::move(row);
  });

  std::string body;
  std::size_t flagged = 0, with_stored = 0, differing = 0, inside_total = 0;
  std::map<std::string, std::size_t> kind_counts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    with_stored += diverged[i] >= 0;
    differing += diverged[i] == 1;
    inside_total += split_starts[i];
    if (rows[i].is_null()) continue;
    ++flagged;
    for (const auto& e : rows[i]["edge_words"]) {
      for (const auto& k : e["kinds"]) ++kind_counts[k.get<std::string>()];
    }
    body += io::dump_line(rows[i]) + "\n";
  }
  const json summary{{"samples", rows.size()},          {"flagged", flagged},
                     {"stored_partitions", with_stored}, {"diverging_partitions", differing},
                     {"edge_words", kind_counts},         {"starts_inside_tokens", inside_total}};
  persist(ctx, {{"audit.jsonl", body}, {"audit_summary.json", summary.dump(2) + "\n"}});
  ctx.out << fmt::format("samples={} flagged={} stored_partitions={} diverging={} starts_inside_tokens={}\n",
                         rows.size(), flagged, with_stored, differing, inside_total);
  return 0;
}

int cmd_bench(Context& ctx) {
  const auto& c = ctx.config;
  const auto ds = load(ctx);
  ctx.stops();  // build the stop set outside the timed region
  std::vector<double> runs;
  std::size_t claims = 0;
  for (int r = 0; r < c.repeat; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto parts = segment_all(ctx, ds.records, false);
    const auto t1 = std::chrono::steady_clock::now();
    runs.push_back(std::chrono::duration<double>(t1 - t0).count());
    claims = 0;
    for (const auto& p : parts) claims += p.labeled_count();
  }
  const double best = *std::min_element(runs.begin(), runs.end());
  json j{{"samples", ds.records.size()}, {"claims", claims}, {"threads", ctx.threads},
         {"runs_seconds", runs}, {"seconds", best}};
  std::string line = fmt::format("samples={} claims={} seconds={:.3f}", ds.records.size(), claims, best);
  if (c.generation_seconds > 0.0) {
    j["generation_seconds"] = c.generation_seconds;
    j["ratio"] = best / c.generation_seconds;
    line += fmt::format(" generation_seconds={} ratio={:.4f} ({:.2f}%)", c.generation_seconds,
                        best / c.generation_seconds, 100.0 * best / c.generation_seconds);
  }
  if (!c.output.empty()) persist(ctx, {{"bench.json", j.dump(2) + "\n"}});
  ctx.out << line << '\n';
  return 0;
}

}  // namespace

const std::vector<FlagSpec>& run_config_flags() {
  static const std::vector<FlagSpec> specs = [] {
    std::vector<FlagSpec> out;
    for (const auto& d : flag_defs()) out.push_back(d.spec);
    return out;
  }();
  return specs;
}

const std::vector<std::string>& run_config_fields() {
  static const std::vector<std::string> fields = {
      "input",       "output",      "format",     "scorers",    "score_files",       "score_orientation",
      "delta",       "aggregators", "curve_aggregator", "fpr_cap", "prec_floor",     "group_by",
      "stopwords",   "logit_kind",  "annotator",  "annotator_a", "annotator_b",      "resegment",
      "skip_invalid", "threads",    "generation_seconds", "repeat", "log_level"};
  return fields;
}

std::unique_ptr<CLI::App> build_app(RunConfig& config) {
  auto app = std::make_unique<CLI::App>("Claim segmentation, token-level uncertainty scoring and evaluation",
                                        "much");
  app->set_help_all_flag("--help-all", "Show help for every command");
  app->require_subcommand(1);
  for (const char* name : kCommands) {
    CLI::App* sub = app->add_subcommand(name, command_help(name));
    for (const auto& d : flag_defs()) {
      if (std::find(d.spec.commands.begin(), d.spec.commands.end(), name) != d.spec.commands.end()) {
        d.bind(*sub, config, d.spec.flag, d.help);
      }
    }
    sub->callback([&config, cmd = std::string(name)] { config.command = cmd; });
  }
  return app;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    log::set_level(parse_log_level(config.log_level));
    Context ctx{config, out, std::nullopt, config.threads ? config.threads : default_thread_count()};
    if (!config.stopwords.empty()) ctx.custom_stops = StopSet::load(config.stopwords);
    const auto& cmd = config.command;
    if (cmd == "segment") return cmd_segment(ctx);
    if (cmd == "score") return cmd_score(ctx);
    if (cmd == "aggregate") return cmd_aggregate(ctx);
    if (cmd == "evaluate") return cmd_evaluate(ctx);
    if (cmd == "stats") return cmd_stats(ctx);
    if (cmd == "filter") return cmd_filter(ctx);
    if (cmd == "audit-tokenizer") return cmd_audit(ctx);
    return cmd_bench(ctx);
  } catch (const UsageError& e) {
    report_error(err, "usage", e.what());
    return 2;
  } catch (const LoadFailure& e) {
    report_error(err, "data", e.what(), {{"rows", load_errors_json(e.rows())}});
    return 1;
  } catch (const DataError& e) {
    report_error(err, "data", e.what());
    return 1;
  } catch (const IoError& e) {
    report_error(err, "io", e.what(), {{"path", e.path()}});
    return 1;
  } catch (const fs::filesystem_error& e) {
    report_error(err, "io", e.what(), {{"path", e.path1().string()}});
    return 1;
  }
}

int main(int argc, char** argv) {
  RunConfig config;
  auto app = build_app(config);
  try {
    app->parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app->exit(e);
  } catch (const CLI::ParseError& e) {
    report_error(std::cerr, "usage", e.what());
    return 2;
  }
  return run(config, std::cout, std::cerr);
}

}  // namespace much::cli
