#include <algorithm>

#include "genpatch/common.hpp"
#include "match_internal.hpp"

namespace genpatch::detail {

namespace {

bool is_type_node(const Node& n) {
  return n.type == NodeType::TypeName || n.type == NodeType::PointerType;
}

void collect_expressions(const Node& n, std::vector<const Node*>& out) {
  if (is_expression(n.type)) out.push_back(&n);
  for (const auto& c : n.children) collect_expressions(c, out);
}

// The `&&`/`||` nodes the CFG split a condition at.
void collect_spine(const Node& n, std::vector<const Node*>& out) {
  if (n.type == NodeType::BinaryExpr && (n.label == "&&" || n.label == "||")) {
    out.push_back(&n);
    for (const auto& c : n.children) collect_spine(c, out);
  }
}

}  // namespace

RuleContext::RuleContext(const GenericPatchRule& rule, const AstUnit& unit)
    : rule_(rule), unit_(unit) {
  const PatternElem* pending = nullptr;
  for (const auto& e : rule.body) {
    if (e.kind == ElemKind::Plus) continue;
    if (e.kind == ElemKind::Dots) {
      pending = &e;
      continue;
    }
    Gap g;
    if (pending) g = {GapKind::Dots, pending};
    else if (atoms_.empty()) g = {rule.header ? GapKind::Adjacent : GapKind::Float, nullptr};
    else g = {GapKind::Adjacent, nullptr};
    gaps_.push_back(g);
    atoms_.push_back(&e);
    pending = nullptr;
  }
  if (atoms_.empty())
    throw Error("validation", "degenerate rule '" + rule.name + "': no context or minus term");
  if (pending) gaps_.push_back({GapKind::Dots, pending});
  else gaps_.push_back({rule.header ? GapKind::Adjacent : GapKind::Float, nullptr});
}

bool RuleContext::bind(const std::string& name, MetavarKind kind, const Node& c,
                       Binding& b) const {
  BoundValue v;
  v.kind = kind;
  v.canon = canon(c);
  auto it = b.find(name);
  if (it != b.end()) return it->second.canon == v.canon;
  v.text = unit_.source_text(c);
  v.node = &c;
  b.emplace(name, std::move(v));
  return true;
}

bool RuleContext::match_node(const Node& t, const Node& c, Binding& b,
                             const std::set<std::string>& fresh,
                             std::map<std::uint32_t, std::uint32_t>* tokmap) const {
  auto record = [&] {
    if (!tokmap || t.empty_span() || c.empty_span()) return;
    (*tokmap)[t.first] = c.first;
    (*tokmap)[t.last - 1] = c.last - 1;
    if ((t.type == NodeType::BinaryExpr || t.type == NodeType::AssignExpr) &&
        t.children.size() == 2 && c.children.size() == 2)
      (*tokmap)[t.children[1].first - 1] = c.children[1].first - 1;
  };
  if (t.type == NodeType::Identifier) {
    if (fresh.count(t.label)) {
      if (!is_expression(c.type) || !bind(t.label, MetavarKind::Expression, c, b)) return false;
      record();
      return true;
    }
    if (const MetavarDecl* m = rule_.find_metavar(t.label)) {
      bool ok = false;
      switch (m->kind) {
        case MetavarKind::Expression: ok = is_expression(c.type); break;
        case MetavarKind::Identifier: ok = c.type == NodeType::Identifier; break;
        case MetavarKind::Constant: ok = c.type == NodeType::Literal; break;
        case MetavarKind::Type: ok = is_type_node(c); break;
        default: ok = false; break;
      }
      if (!ok || !bind(m->name, m->kind, c, b)) return false;
      record();
      return true;
    }
  }
  if (t.type == NodeType::ExprStmt && t.children.size() == 1 &&
      t.children[0].type == NodeType::Identifier) {
    const MetavarDecl* m = rule_.find_metavar(t.children[0].label);
    if (m && m->kind == MetavarKind::Statement) {
      if (!is_statement(c.type) || !bind(m->name, m->kind, c, b)) return false;
      record();
      return true;
    }
  }
  if (t.type == NodeType::TypeName) {
    const MetavarDecl* m = rule_.find_metavar(t.label);
    if (m && m->kind == MetavarKind::Type) {
      if (!is_type_node(c) || !bind(m->name, m->kind, c, b)) return false;
      record();
      return true;
    }
  }
  if (t.type == NodeType::Param && t.children.size() == 1 &&
      t.children[0].type == NodeType::TypeName) {
    const MetavarDecl* m = rule_.find_metavar(t.children[0].label);
    if (m && m->kind == MetavarKind::Parameter) {
      if (c.type != NodeType::Param || !bind(m->name, m->kind, c, b)) return false;
      record();
      return true;
    }
  }
  if (t.type != c.type || t.label != c.label || t.children.size() != c.children.size())
    return false;
  for (std::size_t i = 0; i < t.children.size(); ++i)
    if (!match_node(t.children[i], c.children[i], b, fresh, tokmap)) return false;
  record();
  return true;
}

std::vector<Binding> RuleContext::header_bindings(const Node& fn) const {
  std::vector<Binding> out;
  if (!rule_.header) {
    out.emplace_back();
    return out;
  }
  const HeaderTemplate& h = *rule_.header;
  static const std::set<std::string> kNoFresh;
  Binding base;
  const Node& name = fn.children[1];
  if (const MetavarDecl* m = rule_.find_metavar(h.name)) {
    if (m->kind != MetavarKind::Identifier || !bind(m->name, m->kind, name, base)) return out;
  } else if (h.name != name.label) {
    return out;
  }
  if (!h.return_fragment.nodes.empty()) {
    const Node& rt = h.return_fragment.nodes.front().children.front();
    if (!match_node(rt, fn.children[0], base, kNoFresh, nullptr)) return out;
  }
  const auto& params = fn.children[2].children;
  std::set<std::string> seen;
  auto rec = [&](auto&& self, std::size_t s, std::size_t p, Binding b) -> void {
    if (s == h.params.size()) {
      if (p == params.size() && seen.insert(binding_key(b)).second) out.push_back(std::move(b));
      return;
    }
    const auto& slot = h.params[s];
    if (slot.dots) {
      for (std::size_t q = p; q <= params.size(); ++q) self(self, s + 1, q, b);
      return;
    }
    if (p == params.size()) return;
    Binding nb = b;
    if (match_node(slot.param.nodes.front(), params[p], nb, kNoFresh, nullptr))
      self(self, s + 1, p + 1, std::move(nb));
  };
  rec(rec, 0, 0, base);
  return out;
}

std::vector<TermMatch> RuleContext::term_matches(const Term& term, const Cfg& cfg, int node,
                                                 const Binding& b,
                                                 const std::set<std::string>& fresh,
                                                 bool bind_positions) const {
  std::vector<TermMatch> out;
  const CfgNode& cn = cfg.nodes[node];
  if (cn.kind == CfgNodeKind::Entry || cn.kind == CfgNodeKind::Exit) return out;
  const Node& tn = term.node();
  std::vector<const Node*> cands;
  if (!term.is_expression) {
    bool compound_head = tn.type == NodeType::IfStmt || tn.type == NodeType::WhileStmt ||
                         tn.type == NodeType::ForStmt;
    if (compound_head) {
      if (cn.kind == CfgNodeKind::Cond && cn.chain_head && cn.owner->type == tn.type)
        cands.push_back(cn.owner);
    } else if (cn.kind == CfgNodeKind::Stmt) {
      cands.push_back(cn.ast);
    }
  } else {
    if (cn.kind == CfgNodeKind::Cond && cn.chain_head) collect_spine(*cn.cond_root, cands);
    collect_expressions(*cn.ast, cands);
  }
  for (const Node* c : cands) {
    Binding nb = b;
    std::map<std::uint32_t, std::uint32_t> tokmap;
    if (!match_node(tn, *c, nb, fresh, &tokmap)) continue;
    bool ok = true;
    if (bind_positions) {
      for (const auto& ann : term.positions) {
        auto it = tokmap.find(ann.token);
        std::uint32_t tok = it != tokmap.end() ? it->second : c->first;
        const Token& t = unit_.token(tok);
        BoundValue v;
        v.kind = MetavarKind::Position;
        v.file = unit_.path;
        v.line = t.pos.line;
        v.column = t.pos.column;
        v.canon = v.file + ":" + std::to_string(v.line) + ":" + std::to_string(v.column);
        v.text = t.lexeme;
        auto bt = nb.find(ann.name);
        if (bt != nb.end()) {
          if (bt->second.canon != v.canon) ok = false;
        } else {
          nb.emplace(ann.name, std::move(v));
        }
      }
    }
    if (ok) out.push_back({c->first, c->last, c, std::move(nb)});
  }
  return out;
}

std::vector<TermMatch> RuleContext::atom_matches(std::size_t i, const Cfg& cfg, int node,
                                                 const Binding& b, int& branch,
                                                 bool bind_positions) const {
  static const std::set<std::string> kNoFresh;
  const PatternElem& e = *atoms_[i];
  branch = 0;
  if (e.kind != ElemKind::Disjunction)
    return term_matches(e.term, cfg, node, b, kNoFresh, bind_positions);
  for (std::size_t k = 0; k < e.branches.size(); ++k) {
    for (const auto& be : e.branches[k]) {
      if (be.kind != ElemKind::Context && be.kind != ElemKind::Minus) continue;
      auto ms = term_matches(be.term, cfg, node, b, kNoFresh, bind_positions);
      if (!ms.empty()) {
        branch = static_cast<int>(k);
        return ms;
      }
    }
  }
  return {};
}

bool RuleContext::gap_ok(std::size_t g, const Cfg& cfg, int node, const Binding& b) const {
  const Gap& gp = gaps_[g];
  if (gp.kind != GapKind::Dots) return gp.kind == GapKind::Float;
  if (gp.dots->is_any()) return true;
  for (const auto& w : gp.dots->whens) {
    if (w.kind != WhenClause::Kind::NotMatch) continue;
    std::set<std::string> fresh(w.fresh.begin(), w.fresh.end());
    if (!term_matches(w.term, cfg, node, b, fresh, false).empty()) return false;
  }
  if (g < atoms_.size()) {
    int br = 0;
    if (!atom_matches(g, cfg, node, b, br, false).empty()) return false;
  }
  return true;
}

std::string binding_key(const Binding& b) {
  std::string out;
  for (const auto& [name, v] : b) {
    out += name;
    out += '=';
    out += metavar_kind_name(v.kind);
    out += ':';
    out += v.canon;
    out += ';';
  }
  return out;
}

std::string function_name(const Node& fn) {
  return fn.children.size() > 1 ? fn.children[1].label : fn.label;
}

std::vector<std::pair<const Node*, Cfg>> function_cfgs(const AstUnit& unit) {
  std::vector<std::pair<const Node*, Cfg>> out;
  for (const Node* fn : unit.functions()) out.emplace_back(fn, build_cfg(*fn));
  return out;
}

MatchSite make_site(const RuleContext& ctx, const Node& fn, std::vector<Anchor> anchors,
                    Binding binding, std::vector<int> witness) {
  MatchSite s;
  s.rule = ctx.rule().name;
  s.function = function_name(fn);
  s.function_node = &fn;
  s.anchors = std::move(anchors);
  s.binding = std::move(binding);
  s.witness = std::move(witness);
  return s;
}

void normalize_sites(std::vector<MatchSite>& sites) {
  std::vector<std::pair<std::string, std::size_t>> keys;
  for (std::size_t i = 0; i < sites.size(); ++i) keys.emplace_back(sites[i].key(), i);
  std::stable_sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) {
    auto sa = sites[a.second].start(), sb = sites[b.second].start();
    if (sa != sb) return sa < sb;
    return a.first < b.first;
  });
  std::vector<MatchSite> out;
  std::string last;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i && keys[i].first == last) continue;
    last = keys[i].first;
    out.push_back(std::move(sites[keys[i].second]));
  }
  sites = std::move(out);
}

}  // namespace genpatch::detail

namespace genpatch {

std::uint32_t MatchSite::start() const {
  std::uint32_t s = UINT32_MAX;
  for (const auto& a : anchors) s = std::min(s, a.first);
  return s;
}

std::uint32_t MatchSite::end() const {
  std::uint32_t e = 0;
  for (const auto& a : anchors) e = std::max(e, a.last);
  return e;
}

std::string MatchSite::key() const {
  std::string out = rule + "|" + function + "|";
  for (const auto& a : anchors)
    out += std::to_string(a.cfg_node) + "," + std::to_string(a.first) + "," +
           std::to_string(a.last) + "," + std::to_string(a.branch) + ";";
  return out + "|" + detail::binding_key(binding);
}

std::vector<MatchSite> resolve_overlaps(std::vector<MatchSite> sites) {
  detail::normalize_sites(sites);
  std::vector<MatchSite> kept;
  for (auto& s : sites) {
    bool clash = false;
    for (const auto& k : kept) {
      if (k.function_node != s.function_node) continue;
      for (const auto& a : s.anchors)
        for (const auto& b : k.anchors)
          if (a.first < b.last && b.first < a.last) clash = true;
    }
    if (!clash) kept.push_back(std::move(s));
  }
  return kept;
}

}  // namespace genpatch
