// Acceptance suite: one PASS/FAIL line per primary criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "generators.hpp"
#include "genpatch/common.hpp"
#include "genpatch/edit_script.hpp"
#include "genpatch/engine.hpp"
#include "genpatch/inferrer.hpp"
#include "genpatch/miner.hpp"
#include "genpatch/mining.hpp"
#include "genpatch/repair.hpp"
#include "genpatch/udiff.hpp"
#include "support.hpp"

using namespace genpatch;
using testing_support::source_file;
using testing_support::source_path;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// ------------------------------------------------------------------ 1

Verdict listing() {
  auto t0 = Clock::now();
  GenericPatch gp = parse_generic_patch(source_file("data/listings/unsafe_dereference.cocci"));
  AstUnit u = parse_unit(source_file("data/listings/get_age.c"), "get_age.c");
  auto sites = match_rule(gp.rules.at(0), u);
  std::ostringstream d;
  d << sites.size() << " site(s)";
  bool ok = sites.size() == 1;
  if (ok) {
    const Binding& b = sites[0].binding;
    auto text = [&](const char* m) { return b.count(m) ? b.at(m).text : std::string("?"); };
    d << ", fn=" << text("fn") << " param=" << text("param") << " fld=" << text("fld");
    ok = text("fn") == "get_age" && text("param") == "pers" && text("fld") == "age";
  }
  PatchsetResult r = apply_patchset(gp, u);
  bool guard = false;
  for (const auto& l : split_lines(r.diff))
    if (starts_with(l, "+") && !starts_with(l, "+++") && normalize_ws(l.substr(1)) == "if (pers == NULL)") guard = true;
  d << ", guard " << (guard ? "added" : "missing");
  AstUnit again = parse_unit(r.after, "get_age.c");
  std::size_t re = match_rule(gp.rules[0], again).size();
  double t = since(t0);
  d << ", re-application " << re << " site(s), " << t << " s";
  return {ok && guard && r.reparse_ok && re == 0 && t < 1.0, d.str()};
}

// ------------------------------------------------------------------ 2

Verdict oracle() {
  auto t0 = Clock::now();
  gen::Rng rng(20201);
  int agree = 0, positive = 0;
  const int n = 1000;
  std::string first_bad;
  for (int i = 0; i < n; ++i) {
    std::string unit = gen::random_unit(rng, 12);
    std::string rule = gen::random_rule(rng, 4);
    AstUnit u = parse_unit(unit);
    GenericPatchRule r = parse_generic_patch(rule).rules.at(0);
    auto fast = match_rule(r, u);
    auto slow = brute_force_match(r, u);
    std::vector<std::string> a, b;
    for (const auto& s : fast) a.push_back(s.key());
    for (const auto& s : slow) b.push_back(s.key());
    positive += !a.empty();
    if (a == b)
      ++agree;
    else if (first_bad.empty())
      first_bad = " first disagreement at pair " + std::to_string(i);
  }
  double t = since(t0);
  std::ostringstream d;
  d << agree << "/" << n << " pairs agree (" << positive << " with sites), " << t << " s" << first_bad;
  return {agree == n && t < 300, d.str()};
}

// ------------------------------------------------------------------ 3

Verdict closure() {
  auto t0 = Clock::now();
  gen::Rng rng(4242);
  int exact = 0, split = 0, wrong = 0;
  for (int i = 0; i < 100; ++i) {
    auto c = gen::closure_case(rng, i);
    GenericPatch tmpl = parse_generic_patch(c.template_text);
    auto res = infer(c.cluster, c.examples);
    bool outputs_ok = true, outputs_exact = true;
    bool one_rule = res.patches.size() == 1 && res.patches[0].rules.size() == 1;
    if (!res.patches.empty()) {
      for (const auto& ex : c.examples) {
        std::string out = apply_patchset(res.patches[0], parse_unit(ex.before, ex.path)).after;
        outputs_exact &= out == ex.after;
        outputs_ok &= out == ex.after || out == ex.before;
      }
    } else {
      outputs_exact = false;
    }
    bool recovered = false;
    if (one_rule && outputs_exact) {
      Score s = score(res.patches[0], c.examples);
      recovered = alpha_signature(res.patches[0].rules[0]) == alpha_signature(tmpl.rules[0]) && s.recall == 1.0 &&
                  s.precision == 1.0;
    }
    if (recovered)
      ++exact;
    else if (!outputs_ok)
      ++wrong;
    else
      ++split;
  }
  double t = since(t0);
  std::ostringstream d;
  d << exact << "/100 recovered, " << split << " partition split(s), " << wrong << " wrong, " << t << " s";
  return {exact >= 95 && wrong == 0 && t < 600, d.str()};
}

// ------------------------------------------------------------------ 4

Verdict round_trips() {
  int files = 0, file_ok = 0;
  for (const char* dir : {"data/corpus", "data/listings", "data/toy_corpus", "benchmarks/toy"})
    for (const auto& e : fs::recursive_directory_iterator(source_path(dir))) {
      auto ext = e.path().extension();
      if (!e.is_regular_file() || (ext != ".c" && ext != ".h")) continue;
      std::string src = read_file(e.path().string());
      ++files;
      file_ok += print_unit(parse_unit(src, e.path().string())) == src;
    }

  std::vector<std::string> patterns = {source_file("data/listings/unsafe_dereference.cocci")};
  for (const auto& e : fs::directory_iterator(source_path("benchmarks/toy/db/patterns")))
    patterns.push_back(read_file(e.path().string()));
  gen::Rng rng(77);
  for (int i = 0; i < 200; ++i) patterns.push_back(gen::random_rule(rng));
  int pat_ok = 0;
  for (const auto& p : patterns) {
    GenericPatch gp = parse_generic_patch(p);
    std::string once = render_generic_patch(gp);
    GenericPatch back = parse_generic_patch(once);
    pat_ok += signature(back) == signature(gp) && render_generic_patch(back) == once;
  }

  int scripts_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    auto s = gen::random_script(rng);
    std::string text = serialize_script(s);
    auto back = parse_script(text);
    scripts_ok += back == s && serialize_script(back) == text;
  }
  std::ostringstream d;
  d << "files " << file_ok << "/" << files << ", patterns " << pat_ok << "/" << patterns.size() << ", scripts "
    << scripts_ok << "/1000";
  return {files >= 20 && file_ok == files && pat_ok == static_cast<int>(patterns.size()) && scripts_ok == 1000,
          d.str()};
}

// ------------------------------------------------------------------ 5

struct Template {
  std::function<std::string(int)> before, after;
  std::vector<std::string> patches;  // patch of each instance
};

std::string fn_text(const std::string& name, const std::string& var, const std::string& body) {
  return "int " + name + "(int " + var + ", int n)\n{\n  int r = 0;\n" + body + "  return r;\n}\n";
}

Verdict clustering() {
  auto v = [](int i) { return "v" + std::to_string(i * 7 + 3); };
  std::vector<Template> ts = {
      // argument added: both hunks in one patch
      {[&](int i) { return "  foo(" + v(i) + ");\n"; }, [&](int i) { return "  foo(" + v(i) + ", 0);\n"; },
       {"P1", "P1"}},
      // relaxed comparison: three patches
      {[&](int i) { return "  if (" + v(i) + " < n)\n    r = 1;\n"; },
       [&](int i) { return "  if (" + v(i) + " <= n)\n    r = 1;\n"; },
       {"P2", "P3", "P4"}},
      // dropped call: two patches, two hunks each
      {[&](int i) { return "  trace(" + v(i) + ");\n  r = n;\n"; }, [&](int) { return std::string("  r = n;\n"); },
       {"P5", "P5", "P6", "P6"}},
      // added guard: five patches
      {[&](int i) { return "  use(" + v(i) + ");\n"; },
       [&](int i) { return "  if (" + v(i) + " == 0)\n    return -1;\n  use(" + v(i) + ");\n"; },
       {"P7", "P8", "P9", "P10", "P11"}},
      // changed constant: two patches, three hunks each
      {[&](int i) { return "  r = " + std::to_string(10 + i) + ";\n"; },
       [&](int i) { return "  r = " + std::to_string(20 + i) + ";\n"; },
       {"P12", "P12", "P12", "P13", "P13", "P13"}},
  };
  // singletons, each with its own change shape
  std::vector<std::pair<std::string, std::string>> singles = {
      {"  r = n;\n", "  while (n)\n    n--;\n  r = n;\n"},
      {"  r = f(n);\n", "  r = g(f(n));\n"},
      {"  r = n;\n", "  r = n;\n  return n * 2;\n"},
  };

  std::map<std::string, std::string> diffs;  // patch -> diff text
  std::map<std::string, std::map<std::string, std::string>> pre;
  int serial = 0;
  for (std::size_t t = 0; t < ts.size(); ++t)
    for (std::size_t k = 0; k < ts[t].patches.size(); ++k) {
      int i = serial++;
      std::string name = "t" + std::to_string(t) + "_" + std::to_string(k);
      std::string path = "src/" + name + ".c";
      std::string b = fn_text(name, v(i), ts[t].before(i)), a = fn_text(name, v(i), ts[t].after(i));
      diffs[ts[t].patches[k]] += make_unified_diff(b, a, path);
      pre[ts[t].patches[k]][path] = b;
    }
  for (std::size_t s = 0; s < singles.size(); ++s) {
    std::string patch = "S" + std::to_string(s), path = "lib/s" + std::to_string(s) + ".c";
    std::string b = fn_text("s" + std::to_string(s), "w", singles[s].first);
    diffs[patch] = make_unified_diff(b, fn_text("s" + std::to_string(s), "w", singles[s].second), path);
    pre[patch][path] = b;
  }
  std::vector<PatchRecord> records;
  for (const auto& [id, text] : diffs) {
    PatchRecord r = parse_patch(text, "proj", id);
    r.before_files = pre[id];
    records.push_back(std::move(r));
  }
  std::vector<std::pair<std::string, std::string>> dropped;
  std::vector<ClusterInput> inputs;
  for (const auto& k : key_records(records, &dropped)) inputs.push_back(cluster_input(k));
  auto [clusters, stats] = cluster(inputs);

  // Ground truth, worked out by hand from the construction above.
  const std::map<int, int> want_hist = {{2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}};
  const std::map<int, std::pair<bool, bool>> want_spread = {
      {2, {true, false}}, {3, {false, true}}, {4, {true, true}}, {5, {false, true}}, {6, {true, true}}};
  bool ok = dropped.empty() && stats.total_hunks == 23 && stats.unique_hunks == 3 &&
            stats.clusterable_hunks == 20 && stats.cluster_count == 5 && stats.size_histogram == want_hist &&
            stats.vertical == 3 && stats.horizontal == 4 && clusters.size() == 5;
  for (const auto& c : clusters) {
    auto it = want_spread.find(c.size());
    ok = ok && it != want_spread.end() && std::pair{c.vertical, c.horizontal} == it->second;
  }
  std::ostringstream d;
  d << stats.cluster_count << " clusters, " << stats.unique_hunks << " singletons, histogram {";
  for (const auto& [s, n] : stats.size_histogram) d << s << ":" << n << " ";
  d << "}, vertical " << stats.vertical << ", horizontal " << stats.horizontal;
  if (!dropped.empty()) d << ", " << dropped.size() << " unkeyed";
  return {ok, d.str()};
}

// ------------------------------------------------------------------ 6

struct Bug {
  std::string dir;
  RepairConfig config;
};

std::vector<Bug> toy_bugs(PatternDb& db, std::uint64_t& seed) {
  const std::string root = source_path("benchmarks/toy");
  auto m = nlohmann::json::parse(read_file(root + "/manifest.json"));
  db = load_pattern_db(root + "/" + m.at("db").get<std::string>());
  seed = m.value("random_seed", 0);
  std::vector<Bug> out;
  for (const auto& b : m.at("bugs")) {
    Bug bug;
    bug.dir = b.at("name");
    RepairConfig& c = bug.config;
    c.project = root + "/" + b.at("project").get<std::string>();
    c.suspicious_files = b.at("suspicious_files").get<std::vector<std::string>>();
    c.build_command = b.at("build");
    c.test_command = b.at("test");
    c.heldout_test_command = b.value("heldout", "");
    c.test_timeout = m.value("test_timeout", 30.0);
    c.seed = seed;
    out.push_back(std::move(bug));
  }
  return out;
}

Verdict npc() {
  using S = Status;
  auto run = [](const std::vector<S>& seq) {
    RepairReport r;
    int i = 0;
    for (S s : seq) r.outcomes.push_back({++i, "p", "f", "", s});
    compute_npc(r);
    return r;
  };
  auto r = run({S::Nonsensical, S::Implausible, S::Plausible});
  bool ok = r.npc_all == 2 && r.npc_sensical == 1;
  std::ostringstream d;
  d << "[nonsensical, in-plausible, plausible] -> " << r.npc_all.value_or(-1) << " and "
    << r.npc_sensical.value_or(-1);

  // closed forms on random sequences
  gen::Rng rng(6);
  int closed_ok = 0;
  for (int k = 0; k < 500; ++k) {
    std::vector<S> seq;
    int len = gen::pick(rng, 0, 12);
    for (int j = 0; j < len; ++j) seq.push_back(static_cast<S>(gen::pick(rng, 0, 3)));
    std::vector<S> counted;
    for (S s : seq)
      if (s != S::Infrastructure) counted.push_back(s);
    auto first = std::find(counted.begin(), counted.end(), S::Plausible);
    auto rr = run(seq);
    if (first == counted.end()) {
      closed_ok += !rr.npc_all && !rr.npc_sensical && !rr.first_plausible;
    } else {
      int all = static_cast<int>(first - counted.begin());
      int nonsense = static_cast<int>(std::count(counted.begin(), first, S::Nonsensical));
      closed_ok += rr.npc_all == all && rr.npc_sensical == all - nonsense;
    }
  }
  ok = ok && closed_ok == 500;
  d << ", closed form " << closed_ok << "/500";

  // candidate sets under every strategy
  PatternDb db;
  std::uint64_t seed = 0;
  auto bugs = toy_bugs(db, seed);
  int same_set = 0, reordered = 0;
  for (const auto& bug : bugs) {
    std::vector<std::vector<std::string>> seqs;
    for (Strategy s : {Strategy::Hunk, Strategy::Function, Strategy::File, Strategy::Patch, Strategy::Project,
                       Strategy::Random}) {
      CandidateStream stream(db, prioritize(db, s, seed), bug.config.project, bug.config.suspicious_files, 1 << 20);
      std::vector<std::string> seq;
      while (auto c = stream.next()) seq.push_back(c->patch_id + "|" + c->file + "|" + c->site_digest);
      seqs.push_back(std::move(seq));
    }
    bool same = true, differs = false;
    auto base = seqs[0];
    std::sort(base.begin(), base.end());
    for (const auto& s : seqs) {
      auto sorted = s;
      std::sort(sorted.begin(), sorted.end());
      same &= sorted == base;
      differs |= s != seqs[0];
    }
    same_set += same;
    reordered += differs;
  }
  ok = ok && same_set == static_cast<int>(bugs.size()) && reordered > 0;
  d << ", candidate sets equal on " << same_set << "/" << bugs.size() << " bugs, order differs on " << reordered;
  return {ok, d.str()};
}

// ------------------------------------------------------------------ 7

Verdict toy_benchmark() {
  auto t0 = Clock::now();
  PatternDb db;
  std::uint64_t seed = 0;
  auto bugs = toy_bugs(db, seed);
  int plausible = 0, correct = 0, paired = 0;
  double sum_project = 0, sum_random = 0;
  for (auto& bug : bugs) {
    bug.config.strategy = Strategy::Project;
    RepairReport p = repair(bug.config, db);
    bug.config.strategy = Strategy::Random;
    RepairReport r = repair(bug.config, db);
    if (p.first_plausible) {
      ++plausible;
      correct += p.outcomes.back().correct;
    }
    if (p.npc_all && r.npc_all) {
      ++paired;
      sum_project += *p.npc_all;
      sum_random += *r.npc_all;
    }
  }
  double t = since(t0);
  double mp = paired ? sum_project / paired : 0, mr = paired ? sum_random / paired : 0;
  std::ostringstream d;
  d << plausible << "/" << bugs.size() << " plausible (" << correct << " correct), mean npc-all project " << mp
    << " vs random " << mr << " over " << paired << " bugs, " << t << " s";
  return {plausible >= 7 && paired > 0 && mp <= mr && t < 300, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"listing end-to-end", listing},
      {"matcher oracle equivalence", oracle},
      {"inference closure", closure},
      {"round-trips", round_trips},
      {"clustering ground truth", clustering},
      {"npc accounting", npc},
      {"toy repair benchmark", toy_benchmark},
  };
  int failed = 0, n = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s [%d] %s: %s\n", v.pass ? "PASS" : "FAIL", ++n, name.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
