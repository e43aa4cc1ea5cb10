#include <algorithm>
#include <filesystem>
#include <json.hpp>
#include <random>
#include <set>

#include "genpatch/common.hpp"
#include "genpatch/repair.hpp"

namespace genpatch {

namespace fs = std::filesystem;
using json = nlohmann::json;

const GenericPatch* PatternDb::find(const std::string& id) const {
  for (const auto& p : patches)
    if (p.id == id) return &p;
  return nullptr;
}

PatternDb load_pattern_db(const std::string& root) {
  const fs::path index = fs::path(root) / "index.jsonl";
  if (!fs::is_regular_file(index)) throw Error("input", "no index: " + index.string());
  PatternDb db;
  db.root = root;
  std::set<std::string> ids;
  int n = 0;
  for (const auto& line : split_lines(read_file(index.string()))) {
    ++n;
    if (trim(line).empty()) continue;
    const std::string where = "index.jsonl:" + std::to_string(n) + ": ";
    try {
      json row = json::parse(line);
      std::string id = row.at("id");
      if (!ids.insert(id).second) {
        db.warnings.push_back(where + "duplicate id " + id);
        continue;
      }
      fs::path file = fs::path(root) / row.value("file", "patterns/" + id + ".cocci");
      if (!fs::is_regular_file(file)) {
        db.warnings.push_back(where + "missing pattern file " + file.string());
        continue;
      }
      GenericPatch gp = parse_generic_patch(read_file(file.string()), id);
      bool bad = false;
      for (const auto& issue : validate(gp))
        if (issue.severity == Issue::Severity::Error) {
          db.warnings.push_back(where + issue.message);
          bad = true;
        }
      if (bad) continue;
      gp.recall = row.value("recall", 0.0);
      gp.precision = row.value("precision", 0.0);
      gp.frequency = {row.value("freq_hunk", 0L), row.value("freq_function", 0L),
                      row.value("freq_file", 0L), row.value("freq_patch", 0L),
                      row.value("freq_project", 0L)};
      for (const auto& p : row.value("provenance", json::array()))
        gp.provenance.push_back({p.value("project", ""), p.value("commit", ""), p.value("file", ""),
                                 p.value("function", ""), p.value("hunk", "")});
      db.patches.push_back(std::move(gp));
    } catch (const json::exception& e) {
      db.warnings.push_back(where + e.what());
    } catch (const Error& e) {
      db.warnings.push_back(where + e.what());
    }
  }
  return db;
}

void write_pattern_db(const std::string& root, const std::vector<GenericPatch>& patches) {
  fs::create_directories(fs::path(root) / "patterns");
  std::set<std::string> ids;
  std::string index;
  for (const auto& gp : patches) {
    if (!ids.insert(gp.id).second) throw Error("validation", "duplicate pattern id " + gp.id);
    const std::string rel = "patterns/" + gp.id + ".cocci";
    write_file_atomic((fs::path(root) / rel).string(), render_generic_patch(gp));
    json prov = json::array();
    for (const auto& p : gp.provenance)
      prov.push_back({{"project", p.project}, {"commit", p.commit}, {"file", p.file},
                      {"function", p.function}, {"hunk", p.hunk_id}});
    json row = {{"id", gp.id},
                {"file", rel},
                {"recall", gp.recall},
                {"precision", gp.precision},
                {"freq_hunk", gp.frequency.hunk},
                {"freq_function", gp.frequency.function},
                {"freq_file", gp.frequency.file},
                {"freq_patch", gp.frequency.patch},
                {"freq_project", gp.frequency.project},
                {"provenance", prov}};
    index += row.dump() + "\n";
  }
  write_file_atomic((fs::path(root) / "index.jsonl").string(), index);
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Hunk: return "hunk";
    case Strategy::Function: return "function";
    case Strategy::File: return "file";
    case Strategy::Patch: return "patch";
    case Strategy::Project: return "project";
    case Strategy::Random: return "random";
  }
  return "?";
}

bool strategy_from_name(std::string_view name, Strategy& out) {
  for (Strategy s : {Strategy::Hunk, Strategy::Function, Strategy::File, Strategy::Patch,
                     Strategy::Project, Strategy::Random})
    if (strategy_name(s) == name) {
      out = s;
      return true;
    }
  return false;
}

namespace {

long count_of(const GenericPatch& p, Strategy s) {
  switch (s) {
    case Strategy::Function: return p.frequency.function;
    case Strategy::File: return p.frequency.file;
    case Strategy::Patch: return p.frequency.patch;
    case Strategy::Project: return p.frequency.project;
    default: return p.frequency.hunk;
  }
}

}  // namespace

std::vector<std::string> prioritize(const PatternDb& db, Strategy strategy, std::uint64_t seed) {
  std::vector<const GenericPatch*> ps;
  for (const auto& p : db.patches) ps.push_back(&p);
  std::sort(ps.begin(), ps.end(), [&](const GenericPatch* a, const GenericPatch* b) {
    if (strategy != Strategy::Random) {
      long ca = count_of(*a, strategy), cb = count_of(*b, strategy);
      if (ca != cb) return ca > cb;
      if (a->frequency.hunk != b->frequency.hunk) return a->frequency.hunk > b->frequency.hunk;
    }
    return a->id < b->id;
  });
  if (strategy == Strategy::Random) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = ps.size(); i > 1; --i) std::swap(ps[i - 1], ps[rng() % i]);
  }
  std::vector<std::string> out;
  for (const auto* p : ps) out.push_back(p->id);
  return out;
}

std::vector<std::string> top_with_ties(const PatternDb& db, const std::vector<std::string>& ordered,
                                       Strategy strategy, std::size_t n) {
  if (n == 0 || ordered.size() <= n) return ordered;
  std::vector<std::string> out(ordered.begin(), ordered.begin() + static_cast<long>(n));
  const long cutoff = count_of(*db.find(ordered[n - 1]), strategy);
  for (std::size_t i = n; i < ordered.size() && count_of(*db.find(ordered[i]), strategy) == cutoff; ++i)
    out.push_back(ordered[i]);
  return out;
}

}  // namespace genpatch
