#include "genpatch/pipeline.hpp"

#include <atomic>
#include <climits>
#include <filesystem>
#include <map>
#include <sstream>
#include <thread>

#include "genpatch/common.hpp"
#include "genpatch/inferrer.hpp"
#include "genpatch/io.hpp"

namespace genpatch {

namespace fs = std::filesystem;

PipelineConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const std::exception& e) {
    throw Error("config", path + ": " + e.what());
  }
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (base / p).lexically_normal().string();
  };
  PipelineConfig c;
  try {
    if (j.contains("sources")) {
      for (const auto& r : j["sources"].value("repos", json::array())) c.repos.push_back(resolve(r));
      for (const auto& d : j["sources"].value("diff_dirs", json::array())) c.diff_dirs.push_back(resolve(d));
    }
    if (j.contains("mining")) {
      c.filter.max_changed_lines = j["mining"].value("max_changed_lines", c.filter.max_changed_lines);
      c.filter.max_hunks = j["mining"].value("max_hunks", c.filter.max_hunks);
    }
    if (j.contains("inference")) {
      c.infer_timeout = j["inference"].value("timeout", c.infer_timeout);
      c.jobs = j["inference"].value("jobs", c.jobs);
    }
    if (j.contains("out")) c.out = resolve(j["out"]);
    if (j.contains("db")) c.db = resolve(j["db"]);
    if (j.contains("repair")) {
      const json& r = j["repair"];
      RepairConfig& rc = c.repair;
      rc.project = resolve(r.value("project", ""));
      rc.suspicious_files = r.value("suspicious_files", std::vector<std::string>{});
      rc.build_command = r.value("build", "");
      rc.test_command = r.value("test", "");
      rc.heldout_test_command = r.value("heldout", "");
      std::string s = r.value("strategy", "hunk");
      if (!strategy_from_name(s, rc.strategy)) throw Error("config", "unknown strategy '" + s + "'");
      rc.budget = r.value("budget", rc.budget);
      rc.test_timeout = r.value("test_timeout", rc.test_timeout);
      rc.seed = r.value("seed", rc.seed);
      rc.top_patterns = r.value("top_patterns", rc.top_patterns);
      rc.find_all = r.value("find_all", rc.find_all);
    }
  } catch (const json::exception& e) {
    throw Error("config", path + ": " + e.what());
  }
  return c;
}

void check_config(const PipelineConfig& c, bool need_sources) {
  if (c.filter.max_changed_lines < 1 || c.filter.max_hunks < 1)
    throw Error("config", "mining limits must be at least 1");
  if (!(c.infer_timeout > 0)) throw Error("config", "inference timeout must be positive");
  if (c.jobs < 1) throw Error("config", "jobs must be at least 1");
  for (const auto& r : c.repos)
    if (!fs::is_directory(r)) throw Error("config", "repository not found: " + r);
  for (const auto& d : c.diff_dirs)
    if (!fs::is_directory(d)) throw Error("config", "diff directory not found: " + d);
  if (need_sources && c.repos.empty() && c.diff_dirs.empty())
    throw Error("config", "no corpus sources configured");
}

namespace {

std::string need(const fs::path& p) {
  if (!fs::exists(p)) throw Error("missing", p.string());
  return p.string();
}

}  // namespace

MineSummary run_mine(const PipelineConfig& cfg) {
  MineSummary s;
  std::vector<PatchRecord> records;
  std::vector<std::pair<std::string, std::string>> dropped;
  auto take = [&](std::vector<PatchRecord> recs) {
    ++s.sources_ok;
    for (auto& r : recs) records.push_back(std::move(r));
  };
  for (const auto& repo : cfg.repos) {
    try {
      take(mine_repository(repo, cfg.filter, {}, &dropped));
    } catch (const Error& e) {
      ++s.sources_failed;
      s.warnings.push_back(repo + ": " + e.what());
    }
  }
  for (const auto& dir : cfg.diff_dirs) {
    try {
      take(load_patch_dir(dir, fs::path(dir).lexically_normal().filename().string(), cfg.filter, &dropped));
    } catch (const Error& e) {
      ++s.sources_failed;
      s.warnings.push_back(dir + ": " + e.what());
    }
  }
  if (s.sources_ok == 0 && s.sources_failed > 0) throw Error("mining", "every source failed");
  s.patches = static_cast<int>(records.size());
  const std::size_t patch_drops = dropped.size();
  auto keyed = key_records(records, &dropped);
  s.hunks = static_cast<int>(keyed.size());
  s.dropped = static_cast<int>(dropped.size());

  const fs::path out(cfg.out);
  fs::create_directories(out / "scripts");
  write_jsonl((out / "hunks.jsonl").string(), keyed);
  std::string drops;
  for (std::size_t i = 0; i < dropped.size(); ++i)
    drops += json{{"id", dropped[i].first},
                  {"level", i < patch_drops ? "patch" : "hunk"},
                  {"reason", dropped[i].second}}
                 .dump() +
             "\n";
  write_file_atomic((out / "dropped.jsonl").string(), drops);
  for (const auto& k : keyed) write_file_atomic((out / "scripts" / (k.hunk.id + ".txt")).string(), k.script);
  return s;
}

ClusterStats run_cluster(const std::string& out) {
  auto hunks = read_jsonl<KeyedHunk>(need(fs::path(out) / "hunks.jsonl"));
  std::vector<ClusterInput> in;
  for (const auto& h : hunks) in.push_back(cluster_input(h));
  auto [clusters, stats] = cluster(in);
  write_jsonl((fs::path(out) / "clusters.jsonl").string(), clusters);
  write_file_atomic((fs::path(out) / "stats.json").string(), json(stats).dump(2) + "\n");
  return stats;
}

InferSummary run_infer(const std::string& out, const std::string& db, double timeout, int jobs) {
  auto clusters = read_jsonl<PatchCluster>(need(fs::path(out) / "clusters.jsonl"));
  auto hunks = read_jsonl<KeyedHunk>(need(fs::path(out) / "hunks.jsonl"));
  std::map<std::string, const KeyedHunk*> by_id;
  for (const auto& h : hunks) by_id[h.hunk.id] = &h;

  std::vector<InferenceResult> results(clusters.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < clusters.size();) {
      std::vector<ExamplePair> exs;
      for (const auto& m : clusters[i].members)
        if (auto it = by_id.find(m.hunk_id); it != by_id.end()) exs.push_back(example_from(*it->second));
      results[i] = infer(clusters[i], exs, {timeout});
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  InferSummary s;
  s.clusters = static_cast<int>(clusters.size());
  std::vector<GenericPatch> atomic;
  std::string summary;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const auto& r = results[i];
    s.timed_out += r.timed_out;
    s.uncovered += static_cast<int>(r.uncovered.size());
    json ids = json::array();
    int rules = 0;
    for (const auto& gp : r.patches) {
      rules += static_cast<int>(gp.rules.size());
      for (auto& p : split_atomic(gp)) {
        ids.push_back(p.id);
        atomic.push_back(std::move(p));
      }
    }
    summary += json{{"cluster", clusters[i].id}, {"size", clusters[i].size()}, {"rules", rules},
                    {"patches", ids},        {"uncovered", r.uncovered}, {"timed_out", r.timed_out}}
                   .dump() +
               "\n";
  }
  s.patches = static_cast<int>(atomic.size());
  write_pattern_db(db, atomic);
  write_file_atomic((fs::path(out) / "inference.jsonl").string(), summary);
  return s;
}

std::string render_stats(const std::string& out, const std::string& db) {
  std::ostringstream os;
  ClusterStats st = json::parse(read_file(need(fs::path(out) / "stats.json"))).get<ClusterStats>();
  os << "hunks            " << st.total_hunks << "\n"
     << "unique hunks     " << st.unique_hunks << "\n"
     << "clusterable      " << st.clusterable_hunks << "\n"
     << "clusters         " << st.cluster_count << "\n"
     << "  vertical       " << st.vertical << "\n"
     << "  horizontal     " << st.horizontal << "\n"
     << "\ncluster size histogram\n";
  for (const auto& [size, n] : st.size_histogram) os << "  " << size << "\t" << n << "\n";
  if (!fs::exists(fs::path(db) / "index.jsonl")) return os.str();
  PatternDb pdb = load_pattern_db(db);
  os << "\npatterns         " << pdb.patches.size() << "\n";
  const std::vector<std::pair<std::string, long Frequency::*>> grains = {
      {"hunk", &Frequency::hunk}, {"function", &Frequency::function}, {"file", &Frequency::file},
      {"patch", &Frequency::patch}, {"project", &Frequency::project}};
  const std::vector<std::pair<long, std::string>> buckets = {
      {1, "1"}, {5, "2-5"}, {10, "6-10"}, {50, "11-50"}, {LONG_MAX, ">50"}};
  os << "\npatterns by frequency\n  granularity";
  for (const auto& b : buckets) os << "\t" << b.second;
  os << "\n";
  for (const auto& [name, field] : grains) {
    std::vector<int> counts(buckets.size(), 0);
    for (const auto& p : pdb.patches) {
      long v = p.frequency.*field;
      for (std::size_t b = 0; b < buckets.size(); ++b)
        if (v <= buckets[b].first) {
          ++counts[b];
          break;
        }
    }
    os << "  " << name;
    for (int c : counts) os << "\t" << c;
    os << "\n";
  }
  return os.str();
}

}  // namespace genpatch
