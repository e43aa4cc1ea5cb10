#include "genpatch/inferrer.hpp"

#include <map>
#include <set>

#include "antiunify.hpp"
#include "genpatch/common.hpp"
#include "genpatch/engine.hpp"

namespace genpatch {

ExamplePair example_from(const KeyedHunk& h) {
  ExamplePair ex;
  ex.hunk_id = h.hunk.id;
  ex.path = h.hunk.file;
  ex.before = h.fragments.before;
  ex.after = h.fragments.after;
  ex.expected = h.fragments.hunk;
  ex.provenance = {h.hunk.project, h.hunk.commit, h.hunk.file, h.hunk.function, h.hunk.id};
  return ex;
}

Generalization generalize_terms(const std::vector<std::string>& terms) {
  std::vector<Fragment> frags;
  for (const auto& t : terms) {
    Fragment f;
    if (!(parse_statement_fragment(t, f) && f.nodes.size() == 1) && !parse_expression_fragment(t, f))
      throw Error("no-generalization", "not a statement or expression: " + t);
    frags.push_back(std::move(f));
  }
  std::vector<detail::TermRef> refs;
  for (const auto& f : frags) refs.push_back({f.tokens.get(), &f.nodes.front()});
  detail::AntiUnifier au;
  int h = au.add(refs);
  au.finalize();
  return {au.render(h), au.decls()};
}

namespace {

std::map<std::string, int> line_multiset(const ChangedLines& c) {
  std::map<std::string, int> out;
  for (const auto& l : c.removed) ++out["-" + l];
  for (const auto& l : c.added) ++out["+" + l];
  return out;
}

}  // namespace

Score score(const GenericPatch& gp, const std::vector<ExamplePair>& examples) {
  Score s;
  for (const auto& ex : examples) {
    std::string produced = ex.before;
    try {
      AstUnit unit = parse_unit(ex.before, ex.path.empty() ? "<example>" : ex.path);
      produced = apply_patchset(gp, unit).after;
    } catch (const Error&) {
    }
    auto want = line_multiset(changed_lines(ex.before, ex.after));
    auto got = line_multiset(changed_lines(ex.before, produced));
    for (const auto& [l, n] : want) {
      s.expected += n;
      auto it = got.find(l);
      if (it != got.end()) s.matched += std::min(n, it->second);
    }
    for (const auto& [l, n] : got) s.produced += n;
  }
  s.recall = s.expected ? static_cast<double>(s.matched) / s.expected : 0.0;
  s.precision = s.produced ? static_cast<double>(s.matched) / s.produced : 0.0;
  return s;
}

Frequency frequency_of(const std::vector<Provenance>& prov) {
  std::set<std::string> hunks, functions, files, patches, projects;
  for (const auto& p : prov) {
    hunks.insert(p.hunk_id);
    functions.insert(p.project + "\n" + p.file + "\n" + p.function);
    files.insert(p.project + "\n" + p.file);
    patches.insert(p.project + "\n" + p.commit);
    projects.insert(p.project);
  }
  auto n = [](const std::set<std::string>& s) { return static_cast<long>(s.size()); };
  return {n(hunks), n(functions), n(files), n(patches), n(projects)};
}

std::vector<GenericPatch> split_atomic(const GenericPatch& gp) {
  if (gp.rules.size() == 1) return {gp};
  std::vector<GenericPatch> out;
  for (std::size_t i = 0; i < gp.rules.size(); ++i) {
    GenericPatch p;
    p.id = gp.id + "-" + std::to_string(i);
    p.rules = {gp.rules[i]};
    p.provenance = gp.rules[i].provenance.empty() ? gp.provenance : gp.rules[i].provenance;
    p.recall = gp.rules[i].recall;
    p.precision = gp.rules[i].precision;
    p.frequency = frequency_of(p.provenance);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace genpatch
