#include "generators.hpp"

#include <algorithm>
#include <set>

#include "genpatch/common.hpp"
#include "genpatch/udiff.hpp"

namespace gen {

using namespace genpatch;

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

namespace {

template <class T>
const T& one_of(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(v.size()) - 1))];
}

// ---------------------------------------------------------------- units

const std::vector<std::string> kVars = {"a", "b", "c", "p", "q"};
const std::vector<std::string> kFields = {"f", "g"};
const std::vector<std::string> kCallees = {"foo", "bar", "check", "free"};

std::string expr(Rng& rng, int depth) {
  int k = pick(rng, 0, depth > 0 ? 7 : 2);
  switch (k) {
    case 0:
    case 1: return one_of(rng, kVars);
    case 2: return one_of(rng, std::vector<std::string>{"0", "1", "NULL"});
    case 3: return one_of(rng, kVars) + "->" + one_of(rng, kFields);
    case 4: return one_of(rng, kCallees) + "(" + expr(rng, depth - 1) + ")";
    case 5: return expr(rng, depth - 1) + " + " + expr(rng, depth - 1);
    case 6: return one_of(rng, kVars) + " == NULL";
    default: return "!" + one_of(rng, kVars);
  }
}

std::string cond(Rng& rng) {
  switch (pick(rng, 0, 3)) {
    case 0: return one_of(rng, kVars) + " != NULL";
    case 1: return one_of(rng, kVars) + " == NULL";
    case 2: return one_of(rng, kVars) + " && " + one_of(rng, kVars) + "->" + one_of(rng, kFields);
    default: return one_of(rng, kVars);
  }
}

void stmts(Rng& rng, int& budget, int indent, bool in_loop, std::string& out, int max_here);

void stmt(Rng& rng, int& budget, int indent, bool in_loop, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  --budget;
  int k = pick(rng, 0, in_loop ? 9 : 8);
  switch (k) {
    case 0:
    case 1: out += pad + one_of(rng, kVars) + " = " + expr(rng, 2) + ";\n"; return;
    case 2:
    case 3: out += pad + one_of(rng, kCallees) + "(" + expr(rng, 1) + ");\n"; return;
    case 4: out += pad + "int " + one_of(rng, kVars) + " = " + expr(rng, 1) + ";\n"; return;
    case 5: out += pad + one_of(rng, kVars) + " = " + one_of(rng, kVars) + "->" + one_of(rng, kFields) + ";\n"; return;
    case 6:
      out += pad + "if (" + cond(rng) + ")";
      if (budget > 0 && chance(rng, 0.5)) {
        out += " {\n";
        stmts(rng, budget, indent + 1, in_loop, out, 2);
        out += pad + "}";
        if (budget > 0 && chance(rng, 0.5)) {
          out += " else {\n";
          stmts(rng, budget, indent + 1, in_loop, out, 2);
          out += pad + "}";
        }
        out += "\n";
      } else {
        out += "\n" + pad + "  return " + expr(rng, 0) + ";\n";
      }
      return;
    case 7:
      out += pad + "while (" + cond(rng) + ") {\n";
      stmts(rng, budget, indent + 1, true, out, 3);
      out += pad + "}\n";
      return;
    case 8: out += pad + "return " + expr(rng, 1) + ";\n"; return;
    default: out += pad + (chance(rng, 0.5) ? "break;\n" : "continue;\n"); return;
  }
}

void stmts(Rng& rng, int& budget, int indent, bool in_loop, std::string& out, int max_here) {
  int n = pick(rng, 1, max_here);
  for (int i = 0; i < n && budget > 0; ++i) stmt(rng, budget, indent, in_loop, out);
}

// ---------------------------------------------------------------- rules

struct RuleVocab {
  std::set<std::string> used;
  std::string term(Rng& rng, bool expression) {
    auto E = [&]() {
      std::string m = chance(rng, 0.5) ? "E1" : "E2";
      used.insert(m);
      return m;
    };
    auto I = [&]() {
      used.insert("I1");
      return std::string("I1");
    };
    auto v = [&]() { return chance(rng, 0.8) ? E() : one_of(rng, kVars); };
    if (expression) {
      switch (pick(rng, 0, 3)) {
        case 0: return v() + "->" + (chance(rng, 0.5) ? I() : one_of(rng, kFields));
        case 1: return one_of(rng, kCallees) + "(" + v() + ")";
        case 2: return v() + " == NULL";
        default: return v();
      }
    }
    switch (pick(rng, 0, 6)) {
      case 0: return one_of(rng, kCallees) + "(" + v() + ");";
      case 1: return v() + " = " + v() + ";";
      case 2: return v() + " = " + v() + "->" + (chance(rng, 0.5) ? I() : one_of(rng, kFields)) + ";";
      case 3: return "return " + v() + ";";
      case 4: return "int " + I() + " = " + v() + ";";
      case 5: return v() + " = NULL;";
      default: return one_of(rng, kCallees) + "(" + v() + " + " + v() + ");";
    }
  }
};

// ---------------------------------------------------------------- scripts

const std::vector<std::string> kLexemes = {"x", "foo", "(", ")", "->", "0", ";", "@@", "@TO@", "@AT@",
                                           "---", "\\", "@", "\"a @@ b\"", "'\\n'", "==", "{", "}"};

std::string tokens(Rng& rng) {
  int n = pick(rng, 0, 6);
  std::vector<std::string> parts;
  for (int i = 0; i < n; ++i) parts.push_back(one_of(rng, kLexemes));
  return join(parts, " ");
}

NodeType node_type(Rng& rng) { return static_cast<NodeType>(pick(rng, 0, static_cast<int>(NodeType::PointerType))); }

// ---------------------------------------------------------------- closure

enum class HoleKind { Expr, Ident, Const };

// A statement template: text pieces interleaved with hole references.
struct Piece {
  std::string text;
  int hole = -1;
};
using Shape = std::vector<Piece>;

struct TemplateBuilder {
  Rng& rng;
  std::vector<HoleKind> holes;

  int new_hole(HoleKind k) {
    holes.push_back(k);
    return static_cast<int>(holes.size()) - 1;
  }
  int existing(HoleKind k) {
    std::vector<int> c;
    for (std::size_t i = 0; i < holes.size(); ++i)
      if (holes[i] == k || (k == HoleKind::Expr && holes[i] == HoleKind::Ident)) c.push_back(static_cast<int>(i));
    return c.empty() ? -1 : one_of(rng, c);
  }
  // An argument or right-hand side. `fresh` allows new holes.
  void arg(Shape& s, bool fresh) {
    int k = pick(rng, 0, 5);
    if (k <= 2) {
      int h = (!fresh || chance(rng, 0.3)) ? existing(HoleKind::Expr) : -1;
      if (h < 0 && fresh) h = new_hole(HoleKind::Expr);
      if (h >= 0) {
        s.push_back({"", h});
        return;
      }
    }
    if (k == 3 && fresh) {
      s.push_back({"", new_hole(HoleKind::Const)});
      return;
    }
    s.push_back({one_of(rng, std::vector<std::string>{"0", "1", "ctx", "-1"}), -1});
  }
  void args(Shape& s, bool fresh) {
    int n = pick(rng, 1, 3);
    for (int i = 0; i < n; ++i) {
      if (i) s.push_back({", ", -1});
      arg(s, fresh);
    }
  }
  Shape statement(bool fresh, bool plus) {
    static const std::vector<std::string> callees = {"reset", "setup", "attach", "release", "lookup", "push"};
    Shape s;
    int k = pick(rng, 0, plus ? 5 : 4);
    if (k == 4 && !fresh) k = 0;
    switch (k) {
      case 0:
        s.push_back({one_of(rng, callees) + "(", -1});
        args(s, fresh);
        s.push_back({");", -1});
        break;
      case 1:
        s.push_back({"n = " + one_of(rng, callees) + "(", -1});
        args(s, fresh);
        s.push_back({");", -1});
        break;
      case 2: {
        s.push_back({"n = ", -1});
        arg_base(s, fresh);
        s.push_back({"->", -1});
        if (fresh && chance(rng, 0.5)) s.push_back({"", new_hole(HoleKind::Ident)});
        else s.push_back({one_of(rng, std::vector<std::string>{"size", "next", "len"}), -1});
        s.push_back({";", -1});
        break;
      }
      case 3: {
        int h = fresh && chance(rng, 0.6) ? new_hole(HoleKind::Expr) : existing(HoleKind::Expr);
        if (h < 0) h = new_hole(HoleKind::Expr);
        s.push_back({"", h});
        s.push_back({" = " + one_of(rng, callees) + "(", -1});
        args(s, fresh);
        s.push_back({");", -1});
        break;
      }
      case 4:
        s.push_back({"int ", -1});
        s.push_back({"", new_hole(HoleKind::Ident)});
        s.push_back({" = " + one_of(rng, callees) + "(", -1});
        args(s, fresh);
        s.push_back({");", -1});
        break;
      default: {
        s.push_back({"if (", -1});
        arg_base(s, fresh);
        s.push_back({" == NULL)\n    return -1;", -1});
        break;
      }
    }
    return s;
  }
  void arg_base(Shape& s, bool fresh) {
    int h = existing(HoleKind::Expr);
    if (h < 0 || (fresh && chance(rng, 0.5))) h = fresh ? new_hole(HoleKind::Expr) : h;
    if (h >= 0) s.push_back({"", h});
    else s.push_back({"ctx", -1});
  }
};

std::string render_shape(const Shape& s, const std::vector<std::string>& values) {
  std::string out;
  for (const auto& p : s) out += p.hole < 0 ? p.text : values[static_cast<std::size_t>(p.hole)];
  return out;
}

std::vector<int> holes_of(const Shape& s) {
  std::vector<int> out;
  for (const auto& p : s)
    if (p.hole >= 0) out.push_back(p.hole);
  return out;
}

std::string prefixed(const std::string& text, char prefix) {
  std::string out;
  for (const auto& l : split_lines(text)) out += std::string(1, prefix) + l + "\n";
  return out;
}

}  // namespace

std::string random_unit(Rng& rng, int max_stmts) {
  int budget = pick(rng, 1, max_stmts);
  std::string out = "#include <stdlib.h>\n\n";
  int fns = budget >= 4 && chance(rng, 0.3) ? 2 : 1;
  for (int f = 0; f < fns; ++f) {
    out += "int fn" + std::to_string(f) + "(struct s *p, struct s *q, int a)\n{\n";
    int mine = f + 1 == fns ? budget : budget / 2;
    budget -= mine;
    while (mine > 0) stmt(rng, mine, 1, false, out);
    out += "}\n\n";
  }
  return out;
}

std::string random_rule(Rng& rng, int max_elems) {
  RuleVocab v;
  std::vector<std::string> body;
  int n = std::min(pick(rng, 1, max_elems), pick(rng, 1, max_elems));
  bool prev_dots = true;  // no leading dots
  bool any_term = false;
  for (int i = 0; i < n; ++i) {
    bool last = i + 1 == n;
    int k = pick(rng, 0, 9);
    if (last && !any_term) k = pick(rng, 0, 4);
    if (k <= 2) {
      body.push_back(" " + v.term(rng, chance(rng, 0.2)));
      prev_dots = false, any_term = true;
    } else if (k <= 4) {
      body.push_back("-" + v.term(rng, false));
      prev_dots = false, any_term = true;
    } else if (k <= 6 && !prev_dots && !last) {
      std::string d = "...";
      int w = pick(rng, 0, 3);
      if (w == 1) d += " when != " + v.term(rng, chance(rng, 0.5));
      if (w == 2) d += " when any";
      body.push_back(d);
      prev_dots = true;
    } else if (k == 7 && any_term) {
      body.push_back("+log_event(" + std::string(v.used.count("E1") ? "E1" : "0") + ");");
    } else {
      // disjunction of two context terms
      body.push_back(" (");
      body.push_back(" " + v.term(rng, false));
      body.push_back(" |");
      body.push_back(" " + v.term(rng, false));
      body.push_back(" )");
      prev_dots = false, any_term = true;
    }
  }
  std::string out = "@r " + std::string(chance(rng, 0.7) ? "exists" : "forall") + "@\n";
  for (const char* e : {"E1", "E2"})
    if (v.used.count(e)) out += "expression " + std::string(e) + ";\n";
  if (v.used.count("I1")) out += "identifier I1;\n";
  out += "@@\n";
  for (const auto& l : body) out += l + "\n";
  return out;
}

std::vector<EditAction> random_script(Rng& rng) {
  std::vector<EditAction> out;
  int n = pick(rng, 1, 8);
  int depth = 0;
  for (int i = 0; i < n; ++i) {
    EditAction a;
    a.kind = static_cast<ActionKind>(pick(rng, 0, 3));
    a.depth = i == 0 ? 0 : pick(rng, 0, depth + 1);
    depth = a.depth;
    a.src_type = node_type(rng);
    a.src_tokens = tokens(rng);
    if (a.kind == ActionKind::MOV || a.kind == ActionKind::INS) {
      a.tgt_type = node_type(rng);
      a.tgt_tokens = tokens(rng);
    } else if (a.kind == ActionKind::UPD) {
      a.tgt_tokens = tokens(rng);
    }
    out.push_back(std::move(a));
  }
  return out;
}

ClosureCase closure_case(Rng& rng, int index) {
  for (;;) {
    TemplateBuilder b{rng, {}};
    std::vector<Shape> minus, plus;
    std::optional<Shape> anchor;
    bool insertion = chance(rng, 0.3);
    if (insertion) {
      anchor = b.statement(true, false);
      int np = pick(rng, 1, 2);
      for (int i = 0; i < np; ++i) plus.push_back(b.statement(false, true));
    } else {
      int nm = pick(rng, 1, 2);
      for (int i = 0; i < nm; ++i) minus.push_back(b.statement(true, false));
      int np = pick(rng, 0, 2);
      for (int i = 0; i < np; ++i) plus.push_back(b.statement(false, true));
    }
    // Holes appearing only in added code cannot be inferred; such shapes
    // never come out of statement(false, ...), but check anyway.
    std::set<int> bound;
    for (const auto& s : minus)
      for (int h : holes_of(s)) bound.insert(h);
    if (anchor)
      for (int h : holes_of(*anchor)) bound.insert(h);
    bool ok = !bound.empty() || b.holes.empty();
    for (const auto& s : plus)
      for (int h : holes_of(s)) ok = ok && bound.count(h);
    // Every hole must be used somewhere in the removed or context code.
    for (std::size_t h = 0; h < b.holes.size(); ++h) ok = ok && bound.count(static_cast<int>(h));
    if (!ok) continue;

    // Symbolic names for the template text.
    std::vector<std::string> names;
    int ne = 0, ni = 0, nc = 0;
    for (auto k : b.holes)
      names.push_back(k == HoleKind::Expr ? "E" + std::to_string(ne++)
                                          : k == HoleKind::Ident ? "I" + std::to_string(ni++)
                                                                 : "C" + std::to_string(nc++));
    // Reject templates where an added statement equals a removed or anchor one.
    std::set<std::string> old_side;
    for (const auto& s : minus) old_side.insert(render_shape(s, names));
    if (anchor) old_side.insert(render_shape(*anchor, names));
    bool clash = false;
    std::set<std::string> plus_seen;
    for (const auto& s : plus) {
      std::string t = render_shape(s, names);
      clash = clash || old_side.count(t) || !plus_seen.insert(t).second;
    }
    if (clash || (minus.size() == 2 && render_shape(minus[0], names) == render_shape(minus[1], names))) continue;

    ClosureCase c;
    std::string decls;
    for (std::size_t h = 0; h < b.holes.size(); ++h) {
      const char* kind = b.holes[h] == HoleKind::Expr ? "expression" : b.holes[h] == HoleKind::Ident ? "identifier" : "constant";
      decls += std::string(kind) + " " + names[h] + ";\n";
    }
    std::string body;
    for (const auto& s : minus) body += prefixed(render_shape(s, names), '-');
    for (const auto& s : plus) body += prefixed(render_shape(s, names), '+');
    if (anchor) body += prefixed(render_shape(*anchor, names), ' ');
    c.template_text = "@t" + std::to_string(index) + " exists@\n" + decls + "@@\n" + body;

    const int n = pick(rng, 2, 10);
    c.cluster.id = hex_id("closure-" + std::to_string(index));
    c.cluster.key = "closure";
    std::set<std::string> used_names;
    for (int j = 0; j < n; ++j) {
      std::vector<std::string> values;
      for (std::size_t h = 0; h < b.holes.size(); ++h) {
        if (b.holes[h] == HoleKind::Const) {
          values.push_back(std::to_string(100 + j * 17 + static_cast<int>(h)));
          continue;
        }
        std::string v;
        do {
          static const std::vector<std::string> syl = {"ka", "mo", "ri", "tu", "ze", "lo", "ne", "vi", "sa", "du"};
          v = one_of(rng, syl) + one_of(rng, syl) + one_of(rng, syl) + "_" + std::to_string(j);
        } while (!used_names.insert(v).second);
        values.push_back(v);
      }
      auto indent = [](const std::string& text) {
        std::string out;
        for (const auto& l : split_lines(text)) out += "    " + l + "\n";
        return out;
      };
      std::string head = "void case" + std::to_string(index) + "_" + std::to_string(j) + "(void)\n{\n    trace(" +
                         std::to_string(j) + ");\n";
      std::string tail = "    trace(" + std::to_string(j) + " + 1);\n}\n";
      std::string before = head, after = head;
      for (const auto& s : minus) before += indent(render_shape(s, values));
      for (const auto& s : plus) after += indent(render_shape(s, values));
      if (anchor) {
        before += indent(render_shape(*anchor, values));
        after += indent(render_shape(*anchor, values));
      }
      before += tail;
      after += tail;

      ExamplePair ex;
      ex.hunk_id = hex_id(c.cluster.id + ":" + std::to_string(j));
      ex.path = "src/f" + std::to_string(j % 3) + ".c";
      ex.before = before;
      ex.after = after;
      auto hs = diff_hunks(before, after, 3);
      if (hs.size() != 1) break;
      ex.expected = hs[0];
      ex.provenance = {"proj" + std::to_string(j % 2), "c" + std::to_string(j), ex.path,
                       "case" + std::to_string(index) + "_" + std::to_string(j), ex.hunk_id};
      c.cluster.members.push_back({ex.hunk_id, "c" + std::to_string(j), ex.provenance.project, ex.path,
                                   ex.provenance.function});
      c.examples.push_back(std::move(ex));
    }
    if (static_cast<int>(c.examples.size()) != n) continue;
    return c;
  }
}

}  // namespace gen
