#include "genpatch/repair.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <json.hpp>

#include "genpatch/common.hpp"
#include "genpatch/engine.hpp"
#include "genpatch/process.hpp"

namespace genpatch {

namespace fs = std::filesystem;
using json = nlohmann::json;

CandidateStream::CandidateStream(const PatternDb& db, std::vector<std::string> ordered_ids,
                                 std::string project_root, std::vector<std::string> files, int budget)
    : db_(db),
      ids_(std::move(ordered_ids)),
      root_(std::move(project_root)),
      files_(std::move(files)),
      budget_(budget) {}

void CandidateStream::fill() {
  pending_.clear();
  pending_pos_ = 0;
  while (pending_.empty() && patch_ < ids_.size()) {
    if (file_ >= files_.size()) {
      file_ = 0;
      ++patch_;
      continue;
    }
    const GenericPatch* gp = db_.find(ids_[patch_]);
    const std::string rel = files_[file_++];
    if (!gp) continue;
    try {
      AstUnit unit = parse_unit(read_file((fs::path(root_) / rel).string()), rel);
      for (const auto& rule : gp->rules)
        for (const auto& site : match_rule(rule, unit)) {
          ConcretePatch cp = apply_rule(rule, unit, site, gp->id);
          if (cp.diff.empty()) continue;
          pending_.push_back({0, gp->id, rel, cp.site_digest, cp.after, cp.diff});
        }
    } catch (const Error&) {
      // Unreadable file or degenerate rule: no candidates from this pair.
    }
  }
}

std::optional<Candidate> CandidateStream::next() {
  if (emitted_ >= budget_) return std::nullopt;
  if (pending_pos_ >= pending_.size()) fill();
  if (pending_pos_ >= pending_.size()) return std::nullopt;
  Candidate c = pending_[pending_pos_++];
  c.index = ++emitted_;
  return c;
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Nonsensical: return "nonsensical";
    case Status::Implausible: return "in-plausible";
    case Status::Plausible: return "plausible";
    case Status::Infrastructure: return "infrastructure-error";
  }
  return "?";
}

void compute_npc(RepairReport& r) {
  r.first_plausible.reset();
  r.npc_all.reset();
  r.npc_sensical.reset();
  int all = 0, sensical = 0;
  for (const auto& o : r.outcomes) {
    if (o.status == Status::Infrastructure) continue;
    if (o.status == Status::Plausible) {
      r.first_plausible = o.index;
      r.npc_all = all;
      r.npc_sensical = sensical;
      return;
    }
    ++all;
    if (o.status == Status::Implausible) ++sensical;
  }
}

namespace {

struct Sandbox {
  fs::path dir;
  explicit Sandbox(const std::string& project) {
    std::string tmpl = (fs::temp_directory_path() / "genpatch-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw Error("infrastructure", "cannot create sandbox");
    dir = tmpl;
    fs::copy(project, dir, fs::copy_options::recursive | fs::copy_options::copy_symlinks);
  }
  ~Sandbox() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

bool passes(const std::string& cmd, const fs::path& dir, double timeout) {
  auto r = run_shell(cmd, dir.string(), timeout);
  return !r.timed_out && r.exit_code == 0;
}

std::vector<std::string> c_files(const std::string& root) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().extension() == ".c")
      out.push_back(fs::relative(e.path(), root).string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CandidateOutcome validate_candidate(const Candidate& c, const RepairConfig& config) {
  CandidateOutcome o;
  o.index = c.index;
  o.patch_id = c.patch_id;
  o.file = c.file;
  o.site_digest = c.site_digest;
  o.diff = c.diff;
  try {
    Sandbox box(config.project);
    write_file_atomic((box.dir / c.file).string(), c.after);
    if (!passes(config.build_command, box.dir, config.test_timeout)) {
      o.status = Status::Nonsensical;
    } else if (!passes(config.test_command, box.dir, config.test_timeout)) {
      o.status = Status::Implausible;
    } else {
      o.status = Status::Plausible;
      o.correct = !config.heldout_test_command.empty() &&
                  passes(config.heldout_test_command, box.dir, config.test_timeout);
    }
  } catch (const std::exception&) {
    o.status = Status::Infrastructure;
  }
  return o;
}

RepairReport repair(const RepairConfig& config, const PatternDb& db) {
  const auto start = std::chrono::steady_clock::now();
  if (config.project.empty() || !fs::is_directory(config.project))
    throw Error("config", "project directory not found: " + config.project);
  if (trim(config.build_command).empty() || trim(config.test_command).empty())
    throw Error("config", "build and test commands are required");
  if (config.budget < 1) throw Error("config", "budget must be at least 1");
  std::vector<std::string> files = config.suspicious_files;
  if (files.empty()) files = c_files(config.project);
  for (const auto& f : files)
    if (!fs::is_regular_file(fs::path(config.project) / f))
      throw Error("config", "suspicious file not found: " + f);

  auto ids = prioritize(db, config.strategy, config.seed);
  if (config.top_patterns) ids = top_with_ties(db, ids, config.strategy, config.top_patterns);
  CandidateStream stream(db, ids, config.project, files, config.budget);
  RepairReport report;
  while (auto c = stream.next()) {
    CandidateOutcome o = validate_candidate(*c, config);
    if (const GenericPatch* gp = db.find(o.patch_id))
      for (const auto& p : gp->provenance) o.provenance.push_back(p.hunk_id);
    bool done = o.status == Status::Plausible && !config.find_all;
    report.outcomes.push_back(std::move(o));
    if (done) break;
  }
  compute_npc(report);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string report_json(const RepairReport& r, const RepairConfig& config) {
  json outcomes = json::array();
  for (const auto& o : r.outcomes)
    outcomes.push_back({{"index", o.index},
                        {"patch", o.patch_id},
                        {"file", o.file},
                        {"site", o.site_digest},
                        {"status", status_name(o.status)},
                        {"correct", o.correct},
                        {"provenance", o.provenance},
                        {"diff", o.diff}});
  json j = {{"project", config.project},
            {"strategy", strategy_name(config.strategy)},
            {"budget", config.budget},
            {"outcomes", outcomes},
            {"first_plausible", r.first_plausible ? json(*r.first_plausible) : json(nullptr)},
            {"npc_all", r.npc_all ? json(*r.npc_all) : json(nullptr)},
            {"npc_sensical", r.npc_sensical ? json(*r.npc_sensical) : json(nullptr)},
            {"wall_time", r.wall_time}};
  return j.dump(2) + "\n";
}

}  // namespace genpatch
