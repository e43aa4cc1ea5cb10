#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <set>

#include "antiunify.hpp"
#include "genpatch/common.hpp"
#include "genpatch/inferrer.hpp"

namespace genpatch {

namespace {

using detail::AntiUnifier;
using detail::TermRef;

bool is_simple(NodeType t) {
  return t == NodeType::ExprStmt || t == NodeType::DeclStmt || t == NodeType::ReturnStmt ||
         t == NodeType::BreakStmt || t == NodeType::ContinueStmt;
}

struct StmtInfo {
  const Node* node = nullptr;
  const Node* parent = nullptr;
  int index = 0;
};

void collect(const Node& n, std::vector<StmtInfo>& out) {
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    const Node& c = n.children[i];
    if (is_statement(c.type) && !c.empty_span()) out.push_back({&c, &n, static_cast<int>(i)});
    collect(c, out);
  }
}

const StmtInfo* info_of(const std::vector<StmtInfo>& stmts, const Node* n) {
  for (const auto& s : stmts)
    if (s.node == n) return &s;
  return nullptr;
}

bool contains(const Node& outer, const Node& inner) {
  return outer.first <= inner.first && inner.last <= outer.last;
}

// Maximal non-compound statements lying on lines [lo, hi]. Fails unless they
// cover every token on those lines.
bool statements_on(const AstUnit& u, const std::vector<StmtInfo>& stmts, int lo, int hi,
                   std::vector<const Node*>& out) {
  for (const auto& s : stmts) {
    if (s.node->type == NodeType::CompoundStmt) continue;
    if (!out.empty() && contains(*out.back(), *s.node)) continue;
    if (u.start(*s.node).line >= lo && u.end(*s.node).line <= hi) out.push_back(s.node);
  }
  const auto& toks = u.tokens->tokens;
  for (std::uint32_t i = 0; i < toks.size(); ++i) {
    if (toks[i].pos.line < lo || toks[i].pos.line > hi) continue;
    bool covered = std::any_of(out.begin(), out.end(),
                               [&](const Node* n) { return n->first <= i && i < n->last; });
    if (!covered) return false;
  }
  return true;
}

bool consecutive_siblings(const std::vector<StmtInfo>& stmts, const std::vector<const Node*>& ns) {
  const StmtInfo* prev = nullptr;
  for (const Node* n : ns) {
    const StmtInfo* s = info_of(stmts, n);
    if (!s) return false;
    if (prev && (s->parent != prev->parent || s->index != prev->index + 1)) return false;
    prev = s;
  }
  return true;
}

struct Block {
  std::vector<const Node*> minus;  // before unit
  std::vector<const Node*> plus;   // after unit
  const Node* anchor = nullptr;    // before unit, pure insertions only
  bool anchor_first = false;       // anchor precedes the added lines
};

struct Shape {
  const ExamplePair* ex = nullptr;
  AstUnit bu, au;
  std::vector<StmtInfo> bstmts, astmts;
  std::vector<Block> blocks;
  std::string sig;

  const Node* lead() const {
    const Block& b = blocks.front();
    return b.minus.empty() ? b.anchor : b.minus.front();
  }
};

std::optional<Shape> extract(const ExamplePair& ex) {
  Shape s;
  s.ex = &ex;
  try {
    s.bu = parse_unit(ex.before, ex.path);
    s.au = parse_unit(ex.after, ex.path);
  } catch (const Error&) {
    return std::nullopt;
  }
  auto bf = s.bu.functions(), af = s.au.functions();
  if (bf.size() != 1 || af.size() != 1) return std::nullopt;
  collect(*bf[0], s.bstmts);
  collect(*af[0], s.astmts);
  auto hunks = diff_hunks(ex.before, ex.after, 0);
  auto to_before = [&](int aline) {
    int delta = 0;
    for (const auto& h : hunks) {
      bool earlier = h.new_len ? h.new_start + h.new_len - 1 < aline : h.new_start < aline;
      if (earlier) delta += h.new_len - h.old_len;
    }
    return aline - delta;
  };
  for (const auto& h : hunks) {
    Block b;
    if (h.old_len && !statements_on(s.bu, s.bstmts, h.old_start, h.old_start + h.old_len - 1, b.minus))
      return std::nullopt;
    if (h.new_len && !statements_on(s.au, s.astmts, h.new_start, h.new_start + h.new_len - 1, b.plus))
      return std::nullopt;
    if (b.minus.empty() && b.plus.empty()) continue;
    for (const Node* m : b.minus)
      if (!is_simple(m->type)) return std::nullopt;
    if (!consecutive_siblings(s.bstmts, b.minus) || !consecutive_siblings(s.astmts, b.plus))
      return std::nullopt;
    if (b.minus.empty()) {
      // Anchor the insertion on an unchanged neighbour in the same block.
      const StmtInfo* first = info_of(s.astmts, b.plus.front());
      const StmtInfo* last = info_of(s.astmts, b.plus.back());
      const Node* a = nullptr;
      const auto& sib = last->parent->children;
      if (last->parent->type == NodeType::CompoundStmt && last->index + 1 < static_cast<int>(sib.size()) &&
          is_simple(sib[last->index + 1].type)) {
        a = &sib[last->index + 1];
      } else if (first->parent->type == NodeType::CompoundStmt && first->index > 0 &&
                 is_simple(first->parent->children[first->index - 1].type)) {
        a = &first->parent->children[first->index - 1];
        b.anchor_first = true;
      }
      if (!a) return std::nullopt;
      int line = to_before(s.au.start(*a).line);
      const std::string c = canon(*a);
      for (const auto& st : s.bstmts)
        if (s.bu.start(*st.node).line == line && canon(*st.node) == c) b.anchor = st.node;
      if (!b.anchor) return std::nullopt;
    }
    s.sig += "m" + std::to_string(b.minus.size()) + "p" + std::to_string(b.plus.size()) +
             (b.anchor ? (b.anchor_first ? "<" : ">") : "") + "|";
    s.blocks.push_back(std::move(b));
  }
  if (s.blocks.empty()) return std::nullopt;
  return s;
}

using Group = std::vector<const Shape*>;

struct Built {
  std::string text;
  AntiUnifier au;
  std::vector<std::set<std::string>> ident_values;  // per example
};

std::vector<TermRef> refs(const Group& g, const std::function<std::pair<const AstUnit*, const Node*>(const Shape&)>& get) {
  std::vector<TermRef> out;
  for (const Shape* s : g) {
    auto [u, n] = get(*s);
    out.push_back({u->tokens.get(), n});
  }
  return out;
}

void emit(std::string& out, char prefix, const std::string& text) {
  for (const auto& l : split_lines(text)) out += std::string(1, prefix) + l + "\n";
}

/// Joint generalization of the group; throws Error("no-generalization").
Built build(const Group& g, const std::vector<const Node*>* context, bool adjacent,
            const std::string& name) {
  Built r;
  AntiUnifier& au = r.au;
  int ctx = -1;
  if (context) {
    std::size_t i = 0;
    ctx = au.add(refs(g, [&](const Shape& s) { return std::make_pair(&s.bu, (*context)[i++]); }));
  }
  struct Handles {
    std::vector<int> minus, plus;
    int anchor = -1;
  };
  std::vector<Handles> hs;
  const auto& blocks0 = g.front()->blocks;
  for (std::size_t b = 0; b < blocks0.size(); ++b) {
    Handles h;
    auto anchor = [&] {
      h.anchor = au.add(refs(g, [&](const Shape& s) { return std::make_pair(&s.bu, s.blocks[b].anchor); }));
    };
    if (blocks0[b].anchor && blocks0[b].anchor_first) anchor();
    for (std::size_t k = 0; k < blocks0[b].minus.size(); ++k)
      h.minus.push_back(au.add(refs(g, [&](const Shape& s) { return std::make_pair(&s.bu, s.blocks[b].minus[k]); })));
    for (std::size_t k = 0; k < blocks0[b].plus.size(); ++k)
      h.plus.push_back(au.add(refs(g, [&](const Shape& s) { return std::make_pair(&s.au, s.blocks[b].plus[k]); })));
    if (blocks0[b].anchor && !blocks0[b].anchor_first) anchor();
    hs.push_back(std::move(h));
  }
  au.finalize();

  auto used = [&](const Handles& h) {
    std::set<int> v;
    for (int x : h.minus)
      for (int m : au.vars_of(x)) v.insert(m);
    for (int x : h.plus)
      for (int m : au.vars_of(x)) v.insert(m);
    if (h.anchor >= 0)
      for (int m : au.vars_of(h.anchor)) v.insert(m);
    return v;
  };
  auto dots = [&](const std::set<int>& before, std::size_t from) {
    std::set<int> after;
    for (std::size_t b = from; b < hs.size(); ++b)
      for (int m : used(hs[b])) after.insert(m);
    std::string line = " ...";
    bool first = true;
    for (int m : before) {
      if (!after.count(m) || !au.vars()[m].all_identifiers) continue;
      line += (first ? " " : "\n     ") + std::string("when != ") + au.vars()[m].name + " = rhs";
      first = false;
    }
    return line + "\n";
  };

  std::string& t = r.text;
  t = "@" + name + " exists@\n";
  for (const auto& d : au.decls()) t += std::string(metavar_kind_name(d.kind)) + " " + d.name + ";\n";
  t += "@@\n";
  std::set<int> seen;
  if (ctx >= 0) {
    emit(t, ' ', au.render(ctx));
    for (int m : au.vars_of(ctx)) seen.insert(m);
    if (!adjacent) t += dots(seen, 0);
  }
  for (std::size_t b = 0; b < hs.size(); ++b) {
    if (b > 0) t += dots(seen, b);
    const Handles& h = hs[b];
    if (h.anchor >= 0 && blocks0[b].anchor_first) emit(t, ' ', au.render(h.anchor));
    for (int x : h.minus) emit(t, '-', au.render(x));
    for (int x : h.plus) emit(t, '+', au.render(x));
    if (h.anchor >= 0 && !blocks0[b].anchor_first) emit(t, ' ', au.render(h.anchor));
    for (int m : used(h)) seen.insert(m);
  }
  r.ident_values.resize(g.size());
  for (const auto& v : au.vars())
    if (v.all_identifiers)
      for (std::size_t e = 0; e < g.size(); ++e) r.ident_values[e].insert(v.values[e]);
  return r;
}

bool mentions(const Node& n, const std::set<std::string>& names) {
  bool hit = false;
  walk(n, [&](const Node& k) { hit |= k.type == NodeType::Identifier && names.count(k.label); });
  return hit;
}

// Nearest preceding simple statement sharing a generalized identifier.
std::optional<std::pair<std::vector<const Node*>, bool>> find_context(const Group& g, const Built& plain) {
  std::vector<const Node*> ctx;
  bool adjacent = true;
  for (std::size_t e = 0; e < g.size(); ++e) {
    const Shape& s = *g[e];
    const Node* lead = s.lead();
    const Node* best = nullptr;
    for (const auto& st : s.bstmts) {
      if (!is_simple(st.node->type) || st.node->last > lead->first) continue;
      if (mentions(*st.node, plain.ident_values[e]) && (!best || st.node->first > best->first)) best = st.node;
    }
    if (!best) return std::nullopt;
    const StmtInfo* a = info_of(s.bstmts, best);
    const StmtInfo* b = info_of(s.bstmts, lead);
    adjacent &= a->parent == b->parent && a->index + 1 == b->index;
    ctx.push_back(best);
  }
  return std::make_pair(ctx, adjacent);
}

std::vector<ExamplePair> examples_of(const Group& g) {
  std::vector<ExamplePair> out;
  for (const Shape* s : g) out.push_back(*s->ex);
  return out;
}

GenericPatch single(const GenericPatchRule& r) {
  GenericPatch gp;
  gp.rules = {r};
  return gp;
}

std::optional<GenericPatchRule> parse_rule_text(const std::string& text) {
  try {
    GenericPatch gp = parse_generic_patch(text);
    if (gp.rules.size() == 1) return gp.rules.front();
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

InferenceResult infer(const PatchCluster& cluster, const std::vector<ExamplePair>& examples,
                      const InferOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  InferenceResult res;
  auto expired = [&] {
    double t = std::chrono::duration<double>(Clock::now() - start).count();
    if (t > options.timeout_seconds) res.timed_out = true;
    return res.timed_out;
  };

  // Deterministic order, byte-identical examples collapsed.
  std::vector<const ExamplePair*> order;
  for (const auto& ex : examples) order.push_back(&ex);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* a, const auto* b) { return a->hunk_id < b->hunk_id; });
  std::set<std::string> seen;
  std::vector<Shape> shapes;
  shapes.reserve(order.size());
  for (const ExamplePair* ex : order) {
    if (expired()) break;
    if (!seen.insert(ex->before + '\0' + ex->after).second) continue;
    auto s = extract(*ex);
    if (s)
      shapes.push_back(std::move(*s));
    else
      res.uncovered.push_back(ex->hunk_id);
  }

  // First-fit partition by joint generalizability.
  std::vector<Group> groups;
  for (const Shape& s : shapes) {
    if (expired()) break;
    bool placed = false;
    for (auto& g : groups) {
      if (g.front()->sig != s.sig) continue;
      Group trial = g;
      trial.push_back(&s);
      try {
        build(trial, nullptr, false, "r");
      } catch (const Error&) {
        continue;
      }
      g.push_back(&s);
      placed = true;
      break;
    }
    if (!placed) {
      try {
        build({&s}, nullptr, false, "r");
        groups.push_back({&s});
      } catch (const Error&) {
        res.uncovered.push_back(s.ex->hunk_id);
      }
    }
  }

  GenericPatch gp;
  gp.id = cluster.id;
  for (const auto& g : groups) {
    if (expired()) break;
    const std::string name = "rule" + std::to_string(gp.rules.size());
    auto exs = examples_of(g);
    Built plain = build(g, nullptr, false, name);
    std::optional<GenericPatchRule> best = parse_rule_text(plain.text);
    Score best_score;
    if (best) best_score = score(single(*best), exs);
    if (auto ctx = find_context(g, plain); ctx && !expired()) {
      try {
        Built with = build(g, &ctx->first, ctx->second, name);
        auto rule = parse_rule_text(with.text);
        if (rule) {
          Score sc = score(single(*rule), exs);
          if (!best || sc.recall > best_score.recall ||
              (sc.recall == best_score.recall && sc.precision >= best_score.precision)) {
            best = rule;
            best_score = sc;
          }
        }
      } catch (const Error&) {
      }
    }
    // Only rules finished within the budget count.
    if (expired()) break;
    if (!best || best_score.recall <= 0) {
      for (const Shape* s : g) res.uncovered.push_back(s->ex->hunk_id);
      continue;
    }
    best->recall = best_score.recall;
    best->precision = best_score.precision;
    for (const auto& ex : exs) best->provenance.push_back(ex.provenance);
    gp.provenance.insert(gp.provenance.end(), best->provenance.begin(), best->provenance.end());
    gp.rules.push_back(std::move(*best));
  }
  if (!gp.rules.empty()) {
    std::vector<ExamplePair> all;
    for (const auto& s : shapes) all.push_back(*s.ex);
    Score sc = score(gp, all);
    gp.recall = sc.recall;
    gp.precision = sc.precision;
    gp.frequency = frequency_of(gp.provenance);
    res.patches.push_back(std::move(gp));
  }
  if (res.timed_out) {
    // Everything no kept rule explains, duplicates included.
    std::set<std::string> covered, listed(res.uncovered.begin(), res.uncovered.end());
    for (const auto& p : res.patches)
      for (const auto& pr : p.provenance) covered.insert(pr.hunk_id);
    std::set<std::string> covered_text;
    for (const auto& ex : examples)
      if (covered.count(ex.hunk_id)) covered_text.insert(ex.before + '\0' + ex.after);
    for (const auto& ex : examples)
      if (!covered_text.count(ex.before + '\0' + ex.after) && listed.insert(ex.hunk_id).second)
        res.uncovered.push_back(ex.hunk_id);
  }
  std::sort(res.uncovered.begin(), res.uncovered.end());
  res.elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  return res;
}

}  // namespace genpatch
