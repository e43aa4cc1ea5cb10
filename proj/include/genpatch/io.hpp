#pragma once

// JSON forms of pipeline artifacts (hunks.jsonl, clusters.jsonl, stats.json).

#include <json.hpp>
#include <string>
#include <vector>

#include "genpatch/common.hpp"
#include "genpatch/miner.hpp"

namespace genpatch {

using json = nlohmann::json;

void to_json(json& j, const DiffHunk& h);
void from_json(const json& j, DiffHunk& h);
void to_json(json& j, const Hunk& h);
void from_json(const json& j, Hunk& h);
void to_json(json& j, const KeyedHunk& h);
void from_json(const json& j, KeyedHunk& h);
void to_json(json& j, const ClusterMember& m);
void from_json(const json& j, ClusterMember& m);
void to_json(json& j, const PatchCluster& c);
void from_json(const json& j, PatchCluster& c);
void to_json(json& j, const ClusterStats& s);
void from_json(const json& j, ClusterStats& s);

template <class T>
std::vector<T> read_jsonl(const std::string& path) {
  std::vector<T> out;
  int n = 0;
  for (const auto& line : split_lines(read_file(path))) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line).get<T>());
    } catch (const json::exception& e) {
      throw Error("input", path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

template <class T>
void write_jsonl(const std::string& path, const std::vector<T>& rows) {
  std::string text;
  for (const auto& r : rows) text += json(r).dump() + "\n";
  write_file_atomic(path, text);
}

}  // namespace genpatch
