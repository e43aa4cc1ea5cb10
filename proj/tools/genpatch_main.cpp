#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "genpatch/common.hpp"
#include "genpatch/engine.hpp"
#include "genpatch/lang.hpp"
#include "genpatch/pipeline.hpp"

namespace fs = std::filesystem;
using namespace genpatch;

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string db;
  int jobs = 0;
  double timeout = 0;
  std::string strategy;
  int budget = 0;
  long long seed = -1;
  bool find_all = false;
  std::vector<std::string> repos;
  std::vector<std::string> diff_dirs;
};

PipelineConfig resolve(const Flags& f) {
  PipelineConfig c = f.config.empty() ? PipelineConfig{} : load_config(f.config);
  if (!f.out.empty()) c.out = f.out;
  if (!f.db.empty()) c.db = f.db;
  if (f.jobs) c.jobs = f.jobs;
  if (f.timeout) c.infer_timeout = f.timeout;
  if (!f.strategy.empty() && !strategy_from_name(f.strategy, c.repair.strategy))
    throw Error("config", "unknown strategy '" + f.strategy + "'");
  if (f.budget) c.repair.budget = f.budget;
  if (f.seed >= 0) c.repair.seed = static_cast<std::uint64_t>(f.seed);
  if (f.find_all) c.repair.find_all = true;
  for (const auto& r : f.repos) c.repos.push_back(r);
  for (const auto& d : f.diff_dirs) c.diff_dirs.push_back(d);
  return c;
}

int cmd_mine(const PipelineConfig& c) {
  check_config(c, true);
  MineSummary s = run_mine(c);
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << "mined " << s.patches << " patches, " << s.hunks << " hunks (" << s.dropped
            << " dropped) into " << c.out << "\n";
  if (s.hunks == 0) {
    std::cerr << "error: empty corpus\n";
    return 2;
  }
  return 0;
}

int cmd_cluster(const PipelineConfig& c) {
  ClusterStats st = run_cluster(c.out);
  std::cerr << st.cluster_count << " clusters over " << st.clusterable_hunks << " hunks ("
            << st.vertical << " vertical, " << st.horizontal << " horizontal)\n";
  return 0;
}

int cmd_infer(const PipelineConfig& c) {
  check_config(c, false);
  InferSummary s = run_infer(c.out, c.db_path(), c.infer_timeout, c.jobs);
  std::cerr << s.patches << " atomic patterns from " << s.clusters << " clusters (" << s.timed_out
            << " timed out, " << s.uncovered << " uncovered examples) in " << c.db_path() << "\n";
  return 0;
}

int cmd_apply(const std::string& pattern, const std::string& file) {
  for (const auto& p : {pattern, file})
    if (!fs::is_regular_file(p)) throw Error("missing", p);
  GenericPatch gp = parse_generic_patch(read_file(pattern), fs::path(pattern).stem().string());
  // Diff headers want a relative path.
  std::string shown = file;
  if (fs::path(file).is_absolute()) {
    auto rel = fs::path(file).lexically_relative(fs::current_path()).string();
    shown = rel.empty() || rel.rfind("..", 0) == 0 ? fs::path(file).filename().string() : rel;
  }
  AstUnit unit = parse_unit(read_file(file), shown);
  PatchsetResult r = apply_patchset(gp, unit);
  for (const auto& rule : r.rules) {
    std::cerr << rule.rule << ": " << rule.sites << " site(s)\n";
    for (const auto& w : rule.warnings) std::cerr << "warning: " << w << "\n";
  }
  std::cout << r.diff;
  return r.diff.empty() ? 1 : 0;
}

int cmd_repair(PipelineConfig c) {
  PatternDb db = load_pattern_db(c.db_path());
  for (const auto& w : db.warnings) std::cerr << "warning: " << w << "\n";
  RepairReport r = repair(c.repair, db);
  fs::create_directories(c.out);
  const std::string path = (fs::path(c.out) / "report.json").string();
  write_file_atomic(path, report_json(r, c.repair));
  if (r.first_plausible)
    std::cerr << "plausible patch at candidate " << *r.first_plausible << " (npc-all " << *r.npc_all
              << ", npc-sensical " << *r.npc_sensical << ")\n";
  else
    std::cerr << "no plausible patch in " << r.outcomes.size() << " candidates\n";
  std::cerr << "report: " << path << "\n";
  return r.first_plausible ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"genpatch: mine, infer and apply generic C patches"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON pipeline configuration");
  app.add_option("--out", f.out, "artifact directory");
  app.add_option("--db", f.db, "pattern database (default <out>/db)");
  app.add_option("--jobs", f.jobs, "parallel inference workers")->check(CLI::PositiveNumber);
  app.add_option("--timeout", f.timeout, "per-cluster inference timeout in seconds")->check(CLI::PositiveNumber);
  app.add_option("--strategy", f.strategy, "hunk|function|file|patch|project|random");
  app.add_option("--budget", f.budget, "maximum candidates to validate")->check(CLI::PositiveNumber);
  app.add_option("--seed", f.seed, "seed for the random strategy")->check(CLI::NonNegativeNumber);
  app.add_flag("--find-all", f.find_all, "keep validating after the first plausible patch");

  auto* mine = app.add_subcommand("mine", "mine hunks and edit scripts");
  mine->add_option("--repo", f.repos, "git repository (repeatable)");
  mine->add_option("--diff-dir", f.diff_dirs, "directory of unified diffs (repeatable)");
  app.add_subcommand("cluster", "group hunks by edit script");
  app.add_subcommand("infer", "infer generic patches per cluster");
  std::string pattern, file;
  auto* apply = app.add_subcommand("apply", "apply a generic patch to a file and print the diff");
  apply->add_option("pattern", pattern)->required();
  apply->add_option("file", file)->required();
  app.add_subcommand("repair", "generate and validate candidates");
  app.add_subcommand("stats", "cluster and pattern distributions");

  CLI11_PARSE(app, argc, argv);
  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "apply") return cmd_apply(pattern, file);
    PipelineConfig c = resolve(f);
    if (cmd == "mine") return cmd_mine(c);
    if (cmd == "cluster") return cmd_cluster(c);
    if (cmd == "infer") return cmd_infer(c);
    if (cmd == "repair") return cmd_repair(c);
    std::cout << render_stats(c.out, c.db_path());
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.kind() == "mining") return 1;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
