#include "genpatch/io.hpp"

namespace genpatch {

void to_json(json& j, const DiffHunk& h) {
  json lines = json::array();
  for (const auto& l : h.lines) lines.push_back(std::string(1, l.op) + l.text);
  j = {{"old_start", h.old_start}, {"old_len", h.old_len}, {"new_start", h.new_start},
       {"new_len", h.new_len},     {"section", h.section}, {"lines", lines}};
}

void from_json(const json& j, DiffHunk& h) {
  h.old_start = j.at("old_start");
  h.old_len = j.at("old_len");
  h.new_start = j.at("new_start");
  h.new_len = j.at("new_len");
  h.section = j.value("section", "");
  h.lines.clear();
  for (const auto& l : j.at("lines")) {
    std::string s = l;
    if (s.empty()) throw Error("input", "empty hunk line");
    h.lines.push_back({s[0], s.substr(1)});
  }
}

void to_json(json& j, const Hunk& h) {
  j = {{"id", h.id},     {"patch", h.patch_id},       {"project", h.project}, {"commit", h.commit},
       {"file", h.file}, {"function", h.function}, {"diff", h.diff}};
}

void from_json(const json& j, Hunk& h) {
  h.id = j.at("id");
  h.patch_id = j.at("patch");
  h.project = j.value("project", "");
  h.commit = j.value("commit", "");
  h.file = j.value("file", "");
  h.function = j.value("function", "");
  h.diff = j.at("diff").get<DiffHunk>();
}

void to_json(json& j, const KeyedHunk& h) {
  j = h.hunk;
  j["before"] = h.fragments.before;
  j["after"] = h.fragments.after;
  j["synthetic"] = h.fragments.synthetic;
  j["fragment_diff"] = h.fragments.hunk;
  j["script"] = h.script;
  j["key"] = h.key;
}

void from_json(const json& j, KeyedHunk& h) {
  h.hunk = j.get<Hunk>();
  h.fragments.before = j.at("before");
  h.fragments.after = j.at("after");
  h.fragments.synthetic = j.value("synthetic", false);
  h.fragments.function = h.fragments.synthetic ? "" : h.hunk.function;
  h.fragments.hunk = j.at("fragment_diff").get<DiffHunk>();
  h.script = j.value("script", "");
  h.key = j.at("key");
}

void to_json(json& j, const ClusterMember& m) {
  j = {{"hunk", m.hunk_id}, {"patch", m.patch_id}, {"project", m.project}, {"file", m.file},
       {"function", m.function}};
}

void from_json(const json& j, ClusterMember& m) {
  m.hunk_id = j.at("hunk");
  m.patch_id = j.at("patch");
  m.project = j.value("project", "");
  m.file = j.value("file", "");
  m.function = j.value("function", "");
}

void to_json(json& j, const PatchCluster& c) {
  j = {{"id", c.id},           {"key", c.key},
       {"size", c.size()},     {"members", c.members},
       {"vertical", c.vertical}, {"horizontal", c.horizontal}};
}

void from_json(const json& j, PatchCluster& c) {
  c.id = j.at("id");
  c.key = j.at("key");
  c.members = j.at("members").get<std::vector<ClusterMember>>();
  c.vertical = j.value("vertical", false);
  c.horizontal = j.value("horizontal", false);
}

void to_json(json& j, const ClusterStats& s) {
  json hist = json::object();
  for (const auto& [size, n] : s.size_histogram) hist[std::to_string(size)] = n;
  j = {{"total_hunks", s.total_hunks},
       {"unique_hunks", s.unique_hunks},
       {"clusterable_hunks", s.clusterable_hunks},
       {"cluster_count", s.cluster_count},
       {"vertical_clusters", s.vertical},
       {"horizontal_clusters", s.horizontal},
       {"size_histogram", hist}};
}

void from_json(const json& j, ClusterStats& s) {
  s.total_hunks = j.at("total_hunks");
  s.unique_hunks = j.at("unique_hunks");
  s.clusterable_hunks = j.at("clusterable_hunks");
  s.cluster_count = j.at("cluster_count");
  s.vertical = j.value("vertical_clusters", 0);
  s.horizontal = j.value("horizontal_clusters", 0);
  s.size_histogram.clear();
  for (const auto& [k, v] : j.at("size_histogram").items()) s.size_histogram[std::stoi(k)] = v;
}

}  // namespace genpatch
