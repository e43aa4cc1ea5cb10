#include "genpatch/miner.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "genpatch/common.hpp"
#include "genpatch/edit_script.hpp"
#include "genpatch/lang.hpp"

namespace genpatch {

namespace {

const Node* find_function(const AstUnit& unit, const std::string& name) {
  for (const Node* f : unit.functions())
    if (f->children.size() > 1 && f->children[1].label == name) return f;
  return nullptr;
}

}  // namespace

std::optional<KeyedHunk> key_hunk(const Hunk& hunk, const std::string& before_file,
                                  std::string* why) {
  auto fail = [&](std::string reason) -> std::optional<KeyedHunk> {
    if (why) *why = std::move(reason);
    return std::nullopt;
  };
  KeyedHunk k;
  k.hunk = hunk;
  try {
    k.fragments = reconstitute(hunk, before_file);
  } catch (const Error& e) {
    return fail(e.what());
  }
  const std::string name = k.fragments.synthetic ? kSyntheticFunction : k.fragments.function;
  if (!k.fragments.synthetic) k.hunk.function = name;
  try {
    AstUnit bu = parse_unit(k.fragments.before, hunk.file);
    AstUnit au = parse_unit(k.fragments.after, hunk.file);
    const Node* bf = find_function(bu, name);
    const Node* af = find_function(au, name);
    if (!bf || !af) return fail("parse: function '" + name + "' not recovered");
    auto actions = diff_trees(bu, *bf, au, *af);
    if (actions.empty()) return fail("no-ast-change");
    k.script = serialize_script(actions);
    k.key = shape_key(actions);
  } catch (const Error& e) {
    return fail(std::string("parse: ") + e.what());
  }
  return k;
}

std::vector<KeyedHunk> key_records(const std::vector<PatchRecord>& records,
                                   std::vector<std::pair<std::string, std::string>>* dropped) {
  std::vector<KeyedHunk> out;
  for (const auto& rec : records) {
    // Hunks of one file are located against the file independently.
    for (const auto& h : rec.hunks()) {
      std::string before;
      for (const auto& f : rec.files) {
        std::string path = f.new_path == "/dev/null" ? f.old_path : f.new_path;
        if (path != h.file) continue;
        auto it = rec.before_files.find(f.old_path);
        if (it != rec.before_files.end()) before = it->second;
      }
      std::string why;
      auto k = key_hunk(h, before, &why);
      if (k)
        out.push_back(std::move(*k));
      else if (dropped)
        dropped->emplace_back(h.id, why);
    }
  }
  return out;
}

ClusterInput cluster_input(const KeyedHunk& h) {
  return {h.hunk.id, h.hunk.patch_id, h.hunk.project, h.hunk.file, h.hunk.function, h.key};
}

std::pair<bool, bool> classify_spread(const PatchCluster& c) {
  std::map<std::string, int> per_patch;
  for (const auto& m : c.members) ++per_patch[m.patch_id];
  bool vertical = false;
  for (const auto& [_, n] : per_patch) vertical |= n >= 2;
  return {vertical, per_patch.size() >= 2};
}

std::pair<std::vector<PatchCluster>, ClusterStats> cluster(const std::vector<ClusterInput>& hunks) {
  std::map<std::string, std::vector<const ClusterInput*>> groups;
  for (const auto& h : hunks) groups[h.key].push_back(&h);
  ClusterStats stats;
  stats.total_hunks = static_cast<int>(hunks.size());
  std::vector<PatchCluster> out;
  for (const auto& [key, members] : groups) {
    if (members.size() < 2) {
      ++stats.unique_hunks;
      continue;
    }
    PatchCluster c;
    c.key = key;
    c.id = hex_id(key);
    for (const auto* m : members) c.members.push_back({m->hunk_id, m->patch_id, m->project, m->file, m->function});
    std::sort(c.members.begin(), c.members.end(), [](const auto& a, const auto& b) {
      return std::tie(a.patch_id, a.file, a.hunk_id) < std::tie(b.patch_id, b.file, b.hunk_id);
    });
    std::tie(c.vertical, c.horizontal) = classify_spread(c);
    stats.clusterable_hunks += c.size();
    ++stats.size_histogram[c.size()];
    stats.vertical += c.vertical;
    stats.horizontal += c.horizontal;
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const PatchCluster& a, const PatchCluster& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.id < b.id;
  });
  stats.cluster_count = static_cast<int>(out.size());
  return {std::move(out), stats};
}

}  // namespace genpatch
