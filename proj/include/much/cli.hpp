#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace much::cli {

inline constexpr const char* kCommands[] = {"segment", "score", "aggregate", "evaluate",
                                            "stats",   "filter", "audit-tokenizer", "bench"};

struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::filesystem::path output;
  std::string format = "canonical";
  std::vector<std::string> scorers;
  std::vector<std::filesystem::path> score_files;
  std::string score_orientation = "uncertainty";
  int delta = 24;
  std::vector<std::string> aggregators;
  std::string curve_aggregator = "product";
  double fpr_cap = 0.10;
  double prec_floor = 0.80;
  std::vector<std::string> group_by;
  std::vector<std::filesystem::path> stopwords;
  std::string logit_kind = "raw";
  std::string annotator = "auto";
  std::string annotator_a = "gpt-4o";
  std::string annotator_b = "gpt-4.1";
  bool resegment = false;
  bool skip_invalid = false;
  unsigned threads = 0;
  double generation_seconds = 0.0;
  int repeat = 1;
  std::string log_level = "info";
};

// One command-line flag, the RunConfig field it fills, and the commands
// that accept it. The parser is built from this table.
struct FlagSpec {
  std::string flag;   // e.g. "--fpr-cap"
  std::string field;  // e.g. "fpr_cap"
  std::vector<std::string> commands;
};

const std::vector<FlagSpec>& run_config_flags();

// Names of all RunConfig fields except `command`, which is the subcommand.
const std::vector<std::string>& run_config_fields();

// Parser with one subcommand per command, writing into `config`.
std::unique_ptr<CLI::App> build_app(RunConfig& config);

// Executes a parsed configuration. Returns 0 on success, 1 on data or IO
// errors, 2 on usage errors; failures print one JSON object to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and runs. Used by the `much` executable.
int main(int argc, char** argv);

}  // namespace much::cli
