#pragma once

// File-mediated pipeline stages shared by the CLI and the Python module.

#include <string>
#include <vector>

#include "genpatch/miner.hpp"
#include "genpatch/mining.hpp"
#include "genpatch/repair.hpp"

namespace genpatch {

struct PipelineConfig {
  std::vector<std::string> repos;
  std::vector<std::string> diff_dirs;
  MiningFilter filter;
  double infer_timeout = 900;
  int jobs = 1;
  std::string out = "genpatch-out";
  std::string db;  // defaults to <out>/db
  RepairConfig repair;

  std::string db_path() const { return db.empty() ? out + "/db" : db; }
};

/// JSON config; relative paths are resolved against the file's directory.
/// Throws Error("config").
PipelineConfig load_config(const std::string& path);
/// Range and existence checks. Throws Error("config").
void check_config(const PipelineConfig& cfg, bool need_sources);

struct MineSummary {
  int sources_ok = 0;
  int sources_failed = 0;
  int patches = 0;
  int hunks = 0;
  int dropped = 0;
  std::vector<std::string> warnings;
};

/// Writes hunks.jsonl, dropped.jsonl and scripts/<hunk>.txt under cfg.out.
MineSummary run_mine(const PipelineConfig& cfg);
/// hunks.jsonl -> clusters.jsonl + stats.json.
ClusterStats run_cluster(const std::string& out);

struct InferSummary {
  int clusters = 0;
  int timed_out = 0;
  int patches = 0;  // atomic
  int uncovered = 0;
};

/// clusters.jsonl + hunks.jsonl -> pattern database and inference.jsonl.
InferSummary run_infer(const std::string& out, const std::string& db, double timeout, int jobs);

/// Human-readable cluster and pattern statistics.
std::string render_stats(const std::string& out, const std::string& db);

}  // namespace genpatch
