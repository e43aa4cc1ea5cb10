#pragma once

// Generate-and-validate repair over a pattern database.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genpatch/pattern.hpp"

namespace genpatch {

struct PatternDb {
  std::string root;
  std::vector<GenericPatch> patches;  // index order
  std::vector<std::string> warnings;

  const GenericPatch* find(const std::string& id) const;
};

/// Reads `<root>/index.jsonl` and `<root>/patterns/<id>.cocci`. Invalid rows
/// are skipped with a warning. Throws Error("input") when there is no index.
PatternDb load_pattern_db(const std::string& root);
/// Writes the pattern files and the index; ids must be unique.
void write_pattern_db(const std::string& root, const std::vector<GenericPatch>& patches);

enum class Strategy { Hunk, Function, File, Patch, Project, Random };
std::string_view strategy_name(Strategy s);
bool strategy_from_name(std::string_view name, Strategy& out);

/// Descending frequency at the strategy's granularity, ties by descending hunk
/// count then ascending id. Random is a seeded shuffle of the id order.
std::vector<std::string> prioritize(const PatternDb& db, Strategy strategy, std::uint64_t seed = 0);

/// The first `n` ids of `ordered`, extended with every id tied with the last one.
/// n = 0 keeps everything.
std::vector<std::string> top_with_ties(const PatternDb& db, const std::vector<std::string>& ordered,
                                       Strategy strategy, std::size_t n);

struct Candidate {
  int index = 0;  // 1-based serial position
  std::string patch_id;
  std::string file;  // relative to the project root
  std::string site_digest;
  std::string after;  // full patched text of `file`
  std::string diff;
};

/// Deterministic candidate stream: patches outer, files middle, sites inner.
class CandidateStream {
 public:
  CandidateStream(const PatternDb& db, std::vector<std::string> ordered_ids, std::string project_root,
                  std::vector<std::string> files, int budget);
  std::optional<Candidate> next();

 private:
  void fill();

  const PatternDb& db_;
  std::vector<std::string> ids_;
  std::string root_;
  std::vector<std::string> files_;
  int budget_;
  std::size_t patch_ = 0;
  std::size_t file_ = 0;
  std::vector<Candidate> pending_;
  std::size_t pending_pos_ = 0;
  int emitted_ = 0;
};

enum class Status { Nonsensical, Implausible, Plausible, Infrastructure };
std::string_view status_name(Status s);

struct CandidateOutcome {
  int index = 0;
  std::string patch_id;
  std::string file;
  std::string site_digest;
  Status status = Status::Nonsensical;
  bool correct = false;  // plausible and passes the held-out suite
  std::string diff;
  std::vector<std::string> provenance;  // hunk ids behind the pattern
};

struct RepairConfig {
  std::string project;
  std::vector<std::string> suspicious_files;  // relative paths; empty means every .c file
  std::string build_command;
  std::string test_command;           // repair suite
  std::string heldout_test_command;   // optional
  Strategy strategy = Strategy::Hunk;
  std::uint64_t seed = 0;
  int budget = 1000;
  double test_timeout = 30;
  bool find_all = false;
  std::size_t top_patterns = 0;  // 0 keeps every pattern
};

struct RepairReport {
  std::vector<CandidateOutcome> outcomes;  // infrastructure errors included, not counted
  std::optional<int> first_plausible;      // candidate index
  std::optional<int> npc_all;
  std::optional<int> npc_sensical;
  double wall_time = 0.0;
};

/// NPC fields from an outcome sequence in serial order.
void compute_npc(RepairReport& report);

/// Copies the project into a fresh sandbox, writes the candidate, builds and
/// runs the suites there.
CandidateOutcome validate_candidate(const Candidate& c, const RepairConfig& config);

/// Throws Error("config") for an unusable configuration.
RepairReport repair(const RepairConfig& config, const PatternDb& db);

std::string report_json(const RepairReport& report, const RepairConfig& config);

}  // namespace genpatch
