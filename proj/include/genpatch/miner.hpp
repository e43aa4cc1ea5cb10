#pragma once

// Clustering of hunks by the shape of their edit scripts.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "genpatch/mining.hpp"

namespace genpatch {

/// A hunk with its reconstituted fragments and edit script.
struct KeyedHunk {
  Hunk hunk;
  Fragments fragments;
  std::string script;  // serialized edit script
  std::string key;     // shape key
};

/// Reconstitute, diff and key one hunk. Returns nullopt with a reason in
/// `why` when the hunk has no AST-level change or cannot be parsed.
std::optional<KeyedHunk> key_hunk(const Hunk& hunk, const std::string& before_file,
                                  std::string* why = nullptr);

/// All hunks of all records, keyed. Unkeyable hunks are reported in `dropped`.
std::vector<KeyedHunk> key_records(const std::vector<PatchRecord>& records,
                                   std::vector<std::pair<std::string, std::string>>* dropped = nullptr);

struct ClusterMember {
  std::string hunk_id;
  std::string patch_id;
  std::string project;
  std::string file;
  std::string function;
};

struct PatchCluster {
  std::string id;  // hash of the key
  std::string key;
  std::vector<ClusterMember> members;  // sorted by (patch, file, hunk id)
  bool vertical = false;
  bool horizontal = false;

  int size() const { return static_cast<int>(members.size()); }
};

struct ClusterStats {
  int total_hunks = 0;
  int unique_hunks = 0;
  int clusterable_hunks = 0;
  int cluster_count = 0;
  int vertical = 0;
  int horizontal = 0;
  std::map<int, int> size_histogram;  // cluster size -> count
};

struct ClusterInput {
  std::string hunk_id;
  std::string patch_id;
  std::string project;
  std::string file;
  std::string function;
  std::string key;
};

ClusterInput cluster_input(const KeyedHunk& h);

/// Exact grouping by key; singletons are counted and discarded. Clusters are
/// sorted by size descending, then id.
std::pair<std::vector<PatchCluster>, ClusterStats> cluster(const std::vector<ClusterInput>& hunks);

/// (vertical, horizontal)
std::pair<bool, bool> classify_spread(const PatchCluster& c);

}  // namespace genpatch
