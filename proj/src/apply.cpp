#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "genpatch/common.hpp"
#include "genpatch/udiff.hpp"
#include "match_internal.hpp"

namespace genpatch {

namespace {

struct Edit {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string text;
};

struct FlatElem {
  const PatternElem* elem = nullptr;  // Context, Minus or Plus
  int anchor = -1;                    // terms only
};

std::size_t count_opaque(const Node& n) {
  std::size_t c = 0;
  walk(n, [&](const Node& x) { c += x.type == NodeType::OpaqueStmt; });
  return c;
}

bool is_body_slot(const Node& parent, const Node& child) {
  switch (parent.type) {
    case NodeType::IfStmt:
      return &child == &parent.children[1] ||
             (parent.children.size() > 2 && &child == &parent.children[2]);
    case NodeType::WhileStmt:
      return &child == &parent.children[1];
    case NodeType::ForStmt:
      return &child == &parent.children[3];
    default:
      return false;
  }
}

/// Edits for every site of one rule on one unit.
class Applier {
 public:
  Applier(const GenericPatchRule& rule, const AstUnit& unit) : rule_(rule), unit_(unit) {}

  void add_site(const MatchSite& site) {
    const Node& fn = *site.function_node;
    Cfg cfg = build_cfg(fn);
    parents_.clear();
    walk(fn, [&](const Node& n) {
      for (const auto& c : n.children) parents_[&c] = &n;
    });
    const Node& rt = fn.children[0];
    non_void_ = !(rt.type == NodeType::TypeName && rt.label == "void");

    std::vector<FlatElem> flat;
    int atom = 0;
    for (const auto& e : rule_.body) {
      if (e.kind == ElemKind::Dots) {
        flat.push_back({&e, -1});
      } else if (e.kind == ElemKind::Plus) {
        flat.push_back({&e, -1});
      } else if (e.kind == ElemKind::Disjunction) {
        int br = site.anchors[atom].branch;
        for (const auto& be : e.branches[br])
          flat.push_back({&be, be.kind == ElemKind::Plus ? -1 : atom});
        ++atom;
      } else {
        flat.push_back({&e, atom++});
      }
    }
    auto is_term = [&](std::size_t i) {
      return i < flat.size() && flat[i].anchor >= 0;
    };
    auto is_plus = [&](std::size_t i) {
      return i < flat.size() && flat[i].elem->kind == ElemKind::Plus;
    };
    std::vector<char> consumed(flat.size(), 0);
    for (std::size_t i = 0; i < flat.size(); ++i) {
      const PatternElem& e = *flat[i].elem;
      if (e.kind != ElemKind::Minus) continue;
      const Anchor& a = site.anchors[flat[i].anchor];
      const std::vector<std::string>* repl = nullptr;
      if (is_plus(i + 1)) repl = &flat[i + 1].elem->plus_lines;
      if (repl) consumed[i + 1] = 1;
      remove(e.term, a, cfg, site.binding, repl);
    }
    for (std::size_t i = 0; i < flat.size(); ++i) {
      if (!is_plus(i) || consumed[i]) continue;
      const auto& lines = flat[i].elem->plus_lines;
      auto anchor_stmt = [&](std::size_t j) -> const Node& {
        return containing_statement(cfg, site.anchors[flat[j].anchor].cfg_node);
      };
      if (is_term(i + 1)) {
        insert(lines, anchor_stmt(i + 1), true, site.binding);
      } else if (i > 0 && is_term(i - 1)) {
        insert(lines, anchor_stmt(i - 1), false, site.binding);
      } else {
        bool done = false;
        for (std::size_t j = i + 1; j < flat.size() && !done; ++j)
          if (is_term(j)) {
            insert(lines, anchor_stmt(j), true, site.binding);
            done = true;
          }
        for (std::size_t j = i; j-- > 0 && !done;)
          if (is_term(j)) {
            insert(lines, anchor_stmt(j), false, site.binding);
            done = true;
          }
      }
    }
  }

  std::string result(std::vector<std::string>& warnings) const {
    auto edits = edits_;
    std::stable_sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
      if (a.begin != b.begin) return a.begin < b.begin;
      return (a.end == a.begin) > (b.end == b.begin);
    });
    std::string out;
    std::size_t cur = 0;
    for (const auto& e : edits) {
      if (e.begin < cur) {
        warnings.push_back("overlapping edit dropped");
        continue;
      }
      out.append(unit_.source, cur, e.begin - cur);
      out += e.text;
      cur = e.end;
    }
    out.append(unit_.source, cur, std::string::npos);
    for (const auto& w : warnings_) warnings.push_back(w);
    return out;
  }

 private:
  const std::string& src() const { return unit_.source; }

  std::size_t line_start(std::size_t off) const {
    auto p = src().rfind('\n', off == 0 ? 0 : off - 1);
    if (off == 0) return 0;
    return p == std::string::npos ? 0 : p + 1;
  }
  std::size_t line_end(std::size_t off) const {
    auto p = src().find('\n', off);
    return p == std::string::npos ? src().size() : p;
  }
  std::string indent_at(std::size_t off) const {
    std::size_t s = line_start(off);
    std::size_t e = s;
    while (e < src().size() && (src()[e] == ' ' || src()[e] == '\t')) ++e;
    return src().substr(s, e - s);
  }
  bool starts_line(std::size_t off) const {
    for (std::size_t i = line_start(off); i < off; ++i)
      if (src()[i] != ' ' && src()[i] != '\t') return false;
    return true;
  }
  bool ends_line(std::size_t off) const {
    for (std::size_t i = off; i < src().size() && src()[i] != '\n'; ++i)
      if (src()[i] != ' ' && src()[i] != '\t' && src()[i] != '\r') return false;
    return true;
  }
  std::size_t after_line(std::size_t off) const {
    std::size_t e = line_end(off);
    return e < src().size() ? e + 1 : e;
  }

  const Node& containing_statement(const Cfg& cfg, int node) const {
    const CfgNode& cn = cfg.nodes[node];
    if (cn.owner) return *cn.owner;
    return *cn.ast;
  }

  bool needs_wrap(const Node& s) const {
    if (s.type == NodeType::CompoundStmt) return false;
    auto it = parents_.find(&s);
    return it != parents_.end() && is_body_slot(*it->second, s);
  }

  std::string instantiate_line(const std::string& line, const Binding& b) const {
    TokenStream ts = tokenize(line, "<plus>");
    std::string out;
    const auto& t = ts.tokens;
    for (std::size_t i = 0; i < t.size(); ++i) {
      out += t[i].trivia;
      const MetavarDecl* m =
          t[i].kind == TokenKind::Identifier ? rule_.find_metavar(t[i].lexeme) : nullptr;
      if (!m) {
        out += t[i].lexeme;
        continue;
      }
      auto it = b.find(m->name);
      if (it == b.end())
        throw Error("validation", "metavariable '" + m->name + "' is unbound in added code");
      const BoundValue& v = it->second;
      if (m->kind == MetavarKind::Statement) {
        out += v.text;
        if (i + 1 < t.size() && t[i + 1].lexeme == ";") ++i;
        continue;
      }
      if (m->kind == MetavarKind::Expression && v.node && needs_parens(*v.node, t, i))
        out += "(" + v.text + ")";
      else
        out += v.text;
    }
    out += ts.trailing;
    return out;
  }

  bool needs_parens(const Node& n, const std::vector<Token>& t, std::size_t i) const {
    switch (n.type) {
      case NodeType::Identifier:
      case NodeType::Literal:
      case NodeType::CallExpr:
      case NodeType::FieldAccess:
      case NodeType::IndexExpr:
        return false;
      default:
        break;
    }
    if (unit_.token(n.first).lexeme == "(" && unit_.token(n.last - 1).lexeme == ")" &&
        n.type != NodeType::UnaryExpr)
      return false;
    static const std::set<std::string> open{"(", ",", "=", "[", "{", ";", "return"};
    static const std::set<std::string> close{")", ",", ";", "]"};
    bool left = i == 0 || open.count(t[i - 1].lexeme);
    bool right = i + 1 >= t.size() || close.count(t[i + 1].lexeme);
    return !(left && right);
  }

  std::vector<std::string> instantiate(const std::vector<std::string>& lines,
                                       const Binding& b) {
    std::vector<std::string> out;
    for (const auto& l : lines) out.push_back(instantiate_line(l, b));
    Fragment frag;
    if (!parse_statement_fragment(join(out, "\n"), frag)) {
      for (auto it = out.rbegin(); it != out.rend(); ++it)
        if (!trim(*it).empty()) {
          std::string fixed = *it + ";";
          std::swap(*it, fixed);
          if (!parse_statement_fragment(join(out, "\n"), frag)) std::swap(*it, fixed);
          break;
        }
    }
    if (non_void_) {
      for (auto& l : out) {
        std::size_t p = 0;
        while ((p = l.find("return", p)) != std::string::npos) {
          std::size_t q = p + 6;
          bool word = (p == 0 || !(std::isalnum(static_cast<unsigned char>(l[p - 1])) ||
                                   l[p - 1] == '_'));
          std::size_t r = q;
          while (r < l.size() && l[r] == ' ') ++r;
          if (word && r < l.size() && l[r] == ';') {
            l.replace(q, r - q, " 0");
            warnings_.push_back("'return;' in a non-void function rewritten as 'return 0;'");
          }
          p = q;
        }
      }
    }
    return out;
  }

  std::string indented(const std::vector<std::string>& lines, const std::string& ind) const {
    std::string out;
    for (const auto& l : lines) out += (l.empty() ? std::string() : ind + l) + "\n";
    return out;
  }

  void insert(const std::vector<std::string>& plus, const Node& s, bool before,
              const Binding& b) {
    auto lines = instantiate(plus, b);
    std::size_t sb = unit_.begin_offset(s);
    std::size_t se = unit_.end_offset(s);
    bool wrap = needs_wrap(s) && !wrapped_.count(&s);
    if (wrap) wrapped_.insert(&s);
    if (starts_line(sb)) {
      std::string ind = indent_at(sb);
      std::string outer = ind;
      if (wrap) outer = indent_at(unit_.token(s.first - 1).offset);
      if (wrap) edits_.push_back({line_start(sb), line_start(sb), outer + "{\n"});
      if (before) {
        edits_.push_back({line_start(sb), line_start(sb), indented(lines, ind)});
      } else {
        std::size_t at = ends_line(se) ? after_line(se) : se;
        std::string text = indented(lines, ind);
        if (!ends_line(se)) text = "\n" + text;
        edits_.push_back({at, at, text});
      }
      if (wrap) {
        std::size_t at = ends_line(se) ? after_line(se) : se;
        edits_.push_back({at, at, outer + "}\n"});
      }
      return;
    }
    std::string outer = indent_at(sb);
    std::string ind = outer + "    ";
    std::string body = indented(lines, ind);
    if (wrap) {
      if (before) {
        edits_.push_back({sb, sb, "{\n" + body + ind});
        edits_.push_back({se, se, "\n" + outer + "}"});
      } else {
        edits_.push_back({sb, sb, "{\n" + ind});
        edits_.push_back({se, se, "\n" + body + outer + "}"});
      }
      return;
    }
    if (before) edits_.push_back({sb, sb, "\n" + body + outer});
    else edits_.push_back({se, se, "\n" + body.substr(0, body.size() - 1)});
  }

  void remove(const Term& term, const Anchor& a, const Cfg& cfg, const Binding& b,
              const std::vector<std::string>* repl) {
    (void)cfg;
    Node span;
    span.first = a.first;
    span.last = a.last;
    std::size_t sb = unit_.begin_offset(span);
    std::size_t se = unit_.end_offset(span);
    if (term.is_expression) {
      std::string text;
      if (repl) {
        std::vector<std::string> parts;
        for (const auto& l : *repl) parts.push_back(trim(instantiate_line(l, b)));
        text = join(parts, " ");
      }
      edits_.push_back({sb, se, text});
      return;
    }
    const Node* stmt = nullptr;
    walk(*cfg.function, [&](const Node& n) {
      if (!stmt && n.first == a.first && n.last == a.last && is_statement(n.type)) stmt = &n;
    });
    bool body_slot = stmt && needs_wrap(*stmt);
    if (starts_line(sb) && ends_line(se)) {
      std::string ind = indent_at(sb);
      std::string text;
      if (repl) text = indented(instantiate(*repl, b), ind);
      else if (body_slot) text = ind + ";\n";
      edits_.push_back({line_start(sb), after_line(se), text});
      return;
    }
    std::string text;
    if (repl) text = join(instantiate(*repl, b), "\n" + indent_at(sb));
    else if (body_slot) text = ";";
    std::size_t e = se;
    if (!repl && !body_slot)
      while (e < src().size() && src()[e] == ' ') ++e;
    edits_.push_back({sb, e, text});
  }

  const GenericPatchRule& rule_;
  const AstUnit& unit_;
  std::vector<Edit> edits_;
  std::map<const Node*, const Node*> parents_;
  std::set<const Node*> wrapped_;
  std::vector<std::string> warnings_;
  bool non_void_ = true;
};

bool reparses(const std::string& before_src, const std::string& after_src, const std::string& path,
              std::vector<std::string>& warnings) {
  try {
    AstUnit b = parse_unit(before_src, path);
    AstUnit a = parse_unit(after_src, path);
    if (count_opaque(*a.root) > count_opaque(*b.root)) {
      warnings.push_back("patched code no longer parses cleanly");
      return false;
    }
    return true;
  } catch (const Error& e) {
    warnings.push_back(std::string("patched code does not parse: ") + e.what());
    return false;
  }
}

}  // namespace

ConcretePatch apply_rule(const GenericPatchRule& rule, const AstUnit& unit, const MatchSite& site,
                         const std::string& patch_id) {
  Applier ap(rule, unit);
  ap.add_site(site);
  ConcretePatch cp;
  cp.target_file = unit.path;
  cp.patch_id = patch_id;
  cp.rule = rule.name;
  cp.site_digest = hex_id(site.key());
  cp.after = ap.result(cp.warnings);
  cp.diff = make_unified_diff(unit.source, cp.after, unit.path);
  cp.reparse_ok = reparses(unit.source, cp.after, unit.path, cp.warnings);
  return cp;
}

PatchsetResult apply_patchset(const GenericPatch& gp, const AstUnit& unit) {
  PatchsetResult res;
  res.before = unit.source;
  std::string text = unit.source;
  for (const auto& rule : gp.rules) {
    AstUnit cur = parse_unit(text, unit.path);
    auto sites = match_rule(rule, cur);
    RuleReport rep;
    rep.rule = rule.name;
    rep.sites = sites.size();
    if (!sites.empty()) {
      Applier ap(rule, cur);
      for (const auto& s : sites) ap.add_site(s);
      text = ap.result(rep.warnings);
    }
    res.rules.push_back(std::move(rep));
  }
  res.after = text;
  res.diff = make_unified_diff(res.before, res.after, unit.path);
  std::vector<std::string> w;
  res.reparse_ok = res.after == res.before || reparses(res.before, res.after, unit.path, w);
  if (!res.rules.empty())
    for (auto& x : w) res.rules.back().warnings.push_back(x);
  return res;
}

}  // namespace genpatch
