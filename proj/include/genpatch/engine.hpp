#pragma once

// Matching generic-patch rules against MiniC functions and applying them.

#include <map>
#include <string>
#include <vector>

#include "genpatch/cfg.hpp"
#include "genpatch/lang.hpp"
#include "genpatch/pattern.hpp"

namespace genpatch {

struct BoundValue {
  MetavarKind kind = MetavarKind::Expression;
  std::string canon;  // structural key; positions use "file:line:col"
  std::string text;   // exact source text
  const Node* node = nullptr;
  std::string file;  // Position only
  int line = 0;
  int column = 0;

  bool operator==(const BoundValue& o) const { return kind == o.kind && canon == o.canon; }
};

using Binding = std::map<std::string, BoundValue>;

/// One matched skeleton term: the CFG node it sits on and the tokens it covers.
struct Anchor {
  int cfg_node = 0;
  std::uint32_t first = 0;
  std::uint32_t last = 0;
  int branch = 0;  // disjunction branch taken, 0 for plain terms
  bool operator==(const Anchor&) const = default;
};

struct MatchSite {
  std::string rule;
  std::string function;
  const Node* function_node = nullptr;
  std::vector<Anchor> anchors;  // one per skeleton term, in rule order
  Binding binding;
  std::vector<int> witness;  // one Entry-to-Exit path satisfying the rule

  std::uint32_t start() const;
  std::uint32_t end() const;
  /// Identity used for set comparison and ordering (witness excluded).
  std::string key() const;
};

/// Sites of `rule` in `unit`, overlaps resolved, in source order.
/// Throws Error("validation") for degenerate rules.
std::vector<MatchSite> match_rule(const GenericPatchRule& rule, const AstUnit& unit);

/// Independent reference matcher: enumerates every acyclic CFG path and every
/// embedding on it. Throws Error("validation") if a path is longer than
/// `max_path_length` nodes.
std::vector<MatchSite> brute_force_match(const GenericPatchRule& rule, const AstUnit& unit,
                                         std::size_t max_path_length = 64);

/// Earliest start wins; later sites sharing tokens with a kept site are dropped.
std::vector<MatchSite> resolve_overlaps(std::vector<MatchSite> sites);

struct ConcretePatch {
  std::string target_file;
  std::string patch_id;
  std::string rule;
  std::string site_digest;
  std::string diff;   // unified diff, "" when the site produced no change
  std::string after;  // full patched text
  bool reparse_ok = true;
  std::vector<std::string> warnings;
};

ConcretePatch apply_rule(const GenericPatchRule& rule, const AstUnit& unit, const MatchSite& site,
                         const std::string& patch_id = "");

struct RuleReport {
  std::string rule;
  std::size_t sites = 0;
  std::vector<std::string> warnings;
};

struct PatchsetResult {
  std::string before;
  std::string after;
  std::string diff;
  std::vector<RuleReport> rules;
  bool reparse_ok = true;
};

/// Apply every rule in order, each to the output of the previous one.
PatchsetResult apply_patchset(const GenericPatch& gp, const AstUnit& unit);

}  // namespace genpatch
