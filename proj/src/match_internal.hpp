#pragma once

// Shared by the fast matcher, the reference matcher and rule application.

#include <set>

#include "genpatch/engine.hpp"

namespace genpatch::detail {

struct TermMatch {
  std::uint32_t first = 0;
  std::uint32_t last = 0;
  const Node* node = nullptr;
  Binding binding;
};

enum class GapKind { Float, Adjacent, Dots };

struct Gap {
  GapKind kind = GapKind::Float;
  const PatternElem* dots = nullptr;
};

/// Rule skeleton plus the per-node predicates both matchers are built from.
class RuleContext {
 public:
  RuleContext(const GenericPatchRule& rule, const AstUnit& unit);

  const GenericPatchRule& rule() const { return rule_; }
  const AstUnit& unit() const { return unit_; }
  std::size_t atom_count() const { return atoms_.size(); }
  const PatternElem& atom(std::size_t i) const { return *atoms_[i]; }
  /// gap(i) precedes atom i; gap(atom_count()) trails the last atom.
  const Gap& gap(std::size_t i) const { return gaps_[i]; }

  std::vector<Binding> header_bindings(const Node& fn) const;
  /// Matches of atom i at a CFG node; sets `branch` to the disjunction branch used.
  std::vector<TermMatch> atom_matches(std::size_t i, const Cfg& cfg, int node,
                                      const Binding& b, int& branch,
                                      bool bind_positions = true) const;
  /// May node `node` lie strictly inside gap `g` under the complete binding?
  bool gap_ok(std::size_t g, const Cfg& cfg, int node, const Binding& b) const;

  std::vector<TermMatch> term_matches(const Term& t, const Cfg& cfg, int node, const Binding& b,
                                      const std::set<std::string>& fresh,
                                      bool bind_positions) const;

 private:
  bool match_node(const Node& t, const Node& c, Binding& b, const std::set<std::string>& fresh,
                  std::map<std::uint32_t, std::uint32_t>* tokmap) const;
  bool bind(const std::string& name, MetavarKind kind, const Node& c, Binding& b) const;

  const GenericPatchRule& rule_;
  const AstUnit& unit_;
  std::vector<const PatternElem*> atoms_;
  std::vector<Gap> gaps_;
};

std::string binding_key(const Binding& b);
std::string function_name(const Node& fn);
/// Nodes of the unit whose functions have CFGs, in source order.
std::vector<std::pair<const Node*, Cfg>> function_cfgs(const AstUnit& unit);
MatchSite make_site(const RuleContext& ctx, const Node& fn, std::vector<Anchor> anchors,
                    Binding binding, std::vector<int> witness);
/// Sorts by source order and removes duplicate keys.
void normalize_sites(std::vector<MatchSite>& sites);

}  // namespace genpatch::detail
