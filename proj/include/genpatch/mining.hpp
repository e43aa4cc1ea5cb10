#pragma once

// Patch ingestion: diff files or version-control history, split into hunks.

#include <map>
#include <string>
#include <vector>

#include "genpatch/udiff.hpp"

namespace genpatch {

struct Hunk {
  std::string id;
  std::string patch_id;
  std::string project;
  std::string commit;
  std::string file;
  std::string function;  // from the hunk header section, refined by reconstitute()
  DiffHunk diff;

  std::vector<std::string> removed() const;
  std::vector<std::string> added() const;
  std::vector<std::string> context() const;
};

struct PatchRecord {
  std::string id;
  std::string project;
  std::string commit;
  std::vector<FileDiff> files;
  std::map<std::string, std::string> before_files;  // path -> pre-change text, when known

  int changed_lines() const;  // '+' and '-' lines, context excluded
  int hunk_count() const;
  std::vector<Hunk> hunks() const;
};

struct MiningFilter {
  int max_changed_lines = 50;
  int max_hunks = 3;
};

struct FilterDecision {
  bool keep = true;
  std::string reason;  // "size" or "spread" when dropped
};

/// The record id is the content hash unless `commit` is given.
PatchRecord parse_patch(std::string_view diff_text, const std::string& project = "",
                        const std::string& commit = "");
FilterDecision filter_patch(const PatchRecord& record, const MiningFilter& filter);

struct VcsConfig {
  std::string executable = "git";
  std::vector<std::string> log_args = {"log", "--no-merges", "-p", "--no-color", "--no-ext-diff",
                                       "-U3", "--format=format:%x01%H"};
  std::vector<std::string> pathspec = {"*.c", "*.h"};
  double timeout_seconds = 600;
};

/// Newest commit first. Throws Error("input") for a non-repository and
/// Error("mining") when the tool fails.
std::vector<PatchRecord> mine_repository(const std::string& repo_path, const MiningFilter& filter,
                                         const VcsConfig& vcs = {},
                                         std::vector<std::pair<std::string, std::string>>* dropped = nullptr);

/// Every *.diff / *.patch file under `dir`, sorted by name. Pre-change files are
/// taken from `<dir>/<stem>/<path>` when present.
std::vector<PatchRecord> load_patch_dir(const std::string& dir, const std::string& project,
                                        const MiningFilter& filter,
                                        std::vector<std::pair<std::string, std::string>>* dropped = nullptr);

struct Fragments {
  std::string before;
  std::string after;
  std::string function;  // "" for synthetic wrappers
  bool synthetic = false;
  DiffHunk hunk;  // the hunk relocated to the before fragment
};

inline constexpr const char* kSyntheticFunction = "__genpatch_hunk__";

/// Enclosing function of the change before and after the hunk, or the hunk's
/// two sides wrapped in a synthetic function when no function encloses it.
/// Throws Error("stale-hunk") when the hunk does not fit the file.
Fragments reconstitute(const Hunk& hunk, const std::string& before_file);

}  // namespace genpatch
