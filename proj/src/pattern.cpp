#include "genpatch/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "genpatch/common.hpp"

namespace genpatch {

namespace {

constexpr std::string_view kKindNames[] = {"type",     "identifier", "expression", "statement",
                                           "constant", "parameter",  "position"};

[[noreturn]] void fail(const std::string& kind, int line, const std::string& msg) {
  throw Error(kind, "line " + std::to_string(line) + ": " + msg);
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<std::string> identifiers_in(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '"' || text[i] == '\'') {
      char q = text[i++];
      while (i < text.size() && text[i] != q) i += text[i] == '\\' ? 2 : 1;
      ++i;
      continue;
    }
    if (is_ident_start(text[i]) && (i == 0 || !is_ident_char(text[i - 1]))) {
      std::size_t s = i;
      while (i < text.size() && is_ident_char(text[i])) ++i;
      out.emplace_back(text.substr(s, i - s));
      continue;
    }
    ++i;
  }
  return out;
}

std::size_t indent_of(std::string_view s) {
  std::size_t n = 0;
  while (n < s.size() && (s[n] == ' ' || s[n] == '\t')) ++n;
  return n;
}

/// Drop the common indentation of non-blank lines.
std::vector<std::string> dedent(const std::vector<std::string>& lines) {
  std::size_t common = std::string::npos;
  for (const auto& l : lines)
    if (!trim(l).empty()) common = std::min(common, indent_of(l));
  if (common == std::string::npos) common = 0;
  std::vector<std::string> out;
  for (const auto& l : lines) out.push_back(rtrim(l.size() >= common ? l.substr(common) : l));
  return out;
}

bool has_nest(std::string_view t) {
  return t.find("<...") != std::string_view::npos || t.find("<+...") != std::string_view::npos ||
         t.find("...>") != std::string_view::npos || t.find("...+>") != std::string_view::npos;
}

struct BodyLine {
  char prefix = ' ';
  std::string content;
  int line = 0;
};

class RuleParser {
 public:
  explicit RuleParser(GenericPatchRule& rule) : rule_(rule) {}

  std::vector<PatternElem> elems(const std::vector<BodyLine>& lines) {
    std::vector<PatternElem> out;
    std::size_t i = 0;
    while (i < lines.size()) {
      const BodyLine& L = lines[i];
      std::string t = trim(L.content);
      if (has_nest(t))
        fail("unsupported", L.line, "nests (<... ...>) are not supported");
      if (L.prefix == '+') {
        std::vector<std::string> block;
        int first = L.line;
        while (i < lines.size() && lines[i].prefix == '+') {
          std::string c = trim(lines[i].content);
          if (starts_with(c, "when"))
            fail("syntax", lines[i].line, "plus line inside a when clause");
          if (c.find("...") != std::string::npos)
            fail("syntax", lines[i].line, "'...' is not allowed in added code");
          if (c.find('@') != std::string::npos)
            fail("syntax", lines[i].line, "position annotations are not allowed in added code");
          block.push_back(lines[i].content);
          ++i;
        }
        PatternElem e;
        e.kind = ElemKind::Plus;
        e.plus_lines = dedent(block);
        e.line = first;
        out.push_back(std::move(e));
        continue;
      }
      if (L.prefix == ' ' && starts_with(t, "...")) {
        PatternElem e;
        e.kind = ElemKind::Dots;
        e.line = L.line;
        e.column = static_cast<int>(indent_of(L.content)) + 1;
        std::string rest = trim(t.substr(3));
        if (!rest.empty()) add_when(e, rest, L.line);
        ++i;
        while (i < lines.size()) {
          std::string c = trim(lines[i].content);
          if (!starts_with(c, "when") || (c.size() > 4 && is_ident_char(c[4]))) break;
          if (lines[i].prefix != ' ')
            fail("syntax", lines[i].line, "plus line inside a when clause");
          add_when(e, c, lines[i].line);
          ++i;
        }
        out.push_back(std::move(e));
        continue;
      }
      if (L.prefix == ' ' && starts_with(t, "when") && (t.size() == 4 || !is_ident_char(t[4])))
        fail("syntax", L.line, "when clause without a preceding '...'");
      if (L.prefix == ' ' && t == "(") {
        out.push_back(disjunction(lines, i));
        continue;
      }
      if (L.prefix == ' ' && (t == "|" || t == ")"))
        fail("syntax", L.line, "unbalanced disjunction");
      // Group consecutive plain lines of one kind into terms.
      char kind = L.prefix;
      std::vector<BodyLine> group;
      while (i < lines.size() && lines[i].prefix == kind) {
        std::string c = trim(lines[i].content);
        if (kind == ' ' && (starts_with(c, "...") || c == "(" || c == "|" || c == ")" ||
                            starts_with(c, "when")))
          break;
        if (kind == '-' && starts_with(c, "..."))
          fail("syntax", lines[i].line, "'...' cannot be removed");
        group.push_back(lines[i]);
        ++i;
      }
      terms(group, kind == '-' ? ElemKind::Minus : ElemKind::Context, out);
    }
    return out;
  }

 private:
  void add_when(PatternElem& dots, const std::string& text, int line) {
    std::string rest = trim(std::string_view(text).substr(4));
    WhenClause w;
    w.line = line;
    if (rest == "any") {
      w.kind = WhenClause::Kind::Any;
      dots.whens.push_back(std::move(w));
      return;
    }
    if (!starts_with(rest, "!="))
      fail("unsupported", line, "only 'when != term' and 'when any' are supported");
    std::string body = trim(std::string_view(rest).substr(2));
    if (!make_term(body, w.term)) fail("syntax", line, "cannot parse when term '" + body + "'");
    if (!w.term.positions.empty())
      fail("syntax", line, "position annotations are not allowed in when clauses");
    // Undeclared identifiers become fresh expression metavariables, except
    // callees and all-caps macro names such as NULL.
    std::set<std::string> seen;
    std::set<std::string> callees;
    walk(w.term.node(), [&](const Node& n) {
      if (n.type == NodeType::CallExpr && n.children[0].type == NodeType::Identifier)
        callees.insert(n.children[0].label);
    });
    walk(w.term.node(), [&](const Node& n) {
      if (n.type != NodeType::Identifier) return;
      const std::string& id = n.label;
      if (rule_.find_metavar(id) || callees.count(id) || seen.count(id)) return;
      bool caps = std::none_of(id.begin(), id.end(),
                               [](char c) { return std::islower(static_cast<unsigned char>(c)); });
      if (caps) return;
      seen.insert(id);
      w.fresh.push_back(id);
    });
    w.kind = WhenClause::Kind::NotMatch;
    dots.whens.push_back(std::move(w));
  }

  PatternElem disjunction(const std::vector<BodyLine>& lines, std::size_t& i) {
    PatternElem e;
    e.kind = ElemKind::Disjunction;
    e.line = lines[i].line;
    int depth = 0;
    std::vector<BodyLine> branch;
    std::size_t start = i;
    for (; i < lines.size(); ++i) {
      std::string t = lines[i].prefix == ' ' ? trim(lines[i].content) : std::string();
      if (t == "(") {
        if (depth++ == 0) continue;
      } else if (t == ")") {
        if (--depth == 0) {
          e.branches.push_back(elems(branch));
          ++i;
          return e;
        }
      } else if (t == "|" && depth == 1) {
        e.branches.push_back(elems(branch));
        branch.clear();
        continue;
      }
      branch.push_back(lines[i]);
    }
    fail("syntax", lines[start].line, "unterminated disjunction");
  }

  void terms(const std::vector<BodyLine>& group, ElemKind kind, std::vector<PatternElem>& out) {
    std::vector<std::string> raw;
    for (const auto& l : group) raw.push_back(l.content);
    auto lines = dedent(raw);
    std::string text = join(lines, "\n");
    // Remove annotations, remembering where they were.
    std::string stripped;
    std::vector<PositionAnnotation> anns;
    for (std::size_t k = 0; k < text.size(); ++k) {
      if (text[k] == '@' && k + 1 < text.size() && is_ident_start(text[k + 1])) {
        std::size_t s = ++k;
        while (k < text.size() && is_ident_char(text[k])) ++k;
        anns.push_back({stripped.size(), text.substr(s, k - s), 0});
        --k;
        continue;
      }
      stripped += text[k];
    }
    auto slice_with_annotations = [&](std::size_t b, std::size_t e) {
      std::string s;
      std::size_t cur = b;
      for (const auto& a : anns)
        if (a.offset >= b && a.offset <= e) {
          s += stripped.substr(cur, a.offset - cur);
          s += "@" + a.name;
          cur = a.offset;
        }
      s += stripped.substr(cur, e - cur);
      return s;
    };
    auto emit = [&](const std::string& src, int line) {
      PatternElem el;
      el.kind = kind;
      el.line = line;
      if (!make_term(src, el.term)) fail("syntax", line, "cannot parse term '" + src + "'");
      out.push_back(std::move(el));
    };
    Fragment frag;
    if (parse_statement_fragment(stripped, frag)) {
      for (const auto& n : frag.nodes) {
        const auto& toks = frag.tokens->tokens;
        std::size_t b = toks[n.first].offset;
        std::size_t e = toks[n.last - 1].offset + toks[n.last - 1].lexeme.size();
        emit(slice_with_annotations(b, e), group.front().line + toks[n.first].pos.line - 1);
      }
      return;
    }
    if (parse_expression_fragment(stripped, frag)) {
      emit(text, group.front().line);
      return;
    }
    // One expression per line.
    for (std::size_t k = 0; k < group.size(); ++k) {
      std::string line_text = trim(lines[k]);
      if (line_text.empty()) continue;
      emit(line_text, group[k].line);
    }
  }

  GenericPatchRule& rule_;
};

bool parse_rule_header(const std::string& line, GenericPatchRule& rule) {
  std::string t = trim(line);
  if (t.size() < 2 || t.front() != '@' || t.back() != '@') return false;
  std::string inner = trim(std::string_view(t).substr(1, t.size() - 2));
  if (inner.find('@') != std::string::npos) return false;
  std::vector<std::string> words;
  std::string w;
  for (char c : inner) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!w.empty()) words.push_back(w);
      w.clear();
    } else {
      w += c;
    }
  }
  if (!w.empty()) words.push_back(w);
  for (const auto& word : words) {
    if (word == "exists") {
      rule.quantifier = Quantifier::Exists;
    } else if (word == "forall") {
      rule.quantifier = Quantifier::Forall;
    } else if (rule.name.empty() && is_ident_start(word[0]) &&
               std::all_of(word.begin(), word.end(), is_ident_char)) {
      rule.name = word;
    } else {
      return false;
    }
  }
  return true;
}

void parse_decls(const std::string& line, int line_no, GenericPatchRule& rule) {
  std::string rest = trim(line);
  if (rest.empty() || starts_with(rest, "//")) return;
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto semi = rest.find(';', pos);
    if (semi == std::string::npos) fail("syntax", line_no, "declaration must end with ';'");
    std::string decl = trim(std::string_view(rest).substr(pos, semi - pos));
    pos = semi + 1;
    if (decl.empty()) continue;
    auto sp = decl.find_first_of(" \t");
    if (sp == std::string::npos) fail("syntax", line_no, "bad declaration '" + decl + "'");
    std::string kind_word = decl.substr(0, sp);
    MetavarKind kind;
    if (!metavar_kind_from_name(kind_word, kind))
      fail("unsupported", line_no, "unknown metavariable kind '" + kind_word + "'");
    std::string names = decl.substr(sp + 1);
    std::size_t s = 0;
    while (s <= names.size()) {
      auto comma = names.find(',', s);
      std::string name = trim(std::string_view(names).substr(
          s, comma == std::string::npos ? std::string::npos : comma - s));
      if (name.empty() || !is_ident_start(name[0]) ||
          !std::all_of(name.begin(), name.end(), is_ident_char))
        fail("syntax", line_no, "bad metavariable name '" + name + "'");
      rule.metavars.push_back({name, kind, line_no});
      if (comma == std::string::npos) break;
      s = comma + 1;
    }
  }
}

bool looks_like_header(const std::string& t) {
  if (t.empty() || t.back() != '{') return false;
  if (t.find('(') == std::string::npos) return false;
  for (std::string_view kw : {"if", "while", "for", "else", "switch"})
    if (starts_with(t, kw) && (t.size() == kw.size() || !is_ident_char(t[kw.size()])))
      return false;
  return true;
}

HeaderTemplate parse_header(const std::string& t, int line) {
  HeaderTemplate h;
  h.line = line;
  std::string s = rtrim(std::string_view(t).substr(0, t.size() - 1));  // drop '{'
  auto open = s.find('(');
  auto close = s.rfind(')');
  if (close == std::string::npos || close < open || trim(s.substr(close + 1)).size())
    fail("syntax", line, "bad function header template");
  std::string before = trim(s.substr(0, open));
  auto sp = before.find_last_of(" \t*");
  if (sp == std::string::npos) {
    h.name = before;
  } else {
    h.name = trim(before.substr(sp + 1));
    h.return_type = trim(before.substr(0, sp + 1));
    Fragment tf;
    if (!parse_param_fragment(h.return_type, tf))
      fail("syntax", line, "bad return type '" + h.return_type + "'");
    h.return_fragment = std::move(tf);
  }
  if (h.name.empty() || !is_ident_start(h.name[0]))
    fail("syntax", line, "bad function name in header template");
  std::string params = s.substr(open + 1, close - open - 1);
  if (trim(params).empty()) return h;
  std::size_t p = 0;
  while (p <= params.size()) {
    auto comma = params.find(',', p);
    std::string slot = trim(std::string_view(params).substr(
        p, comma == std::string::npos ? std::string::npos : comma - p));
    HeaderTemplate::Slot sl;
    if (slot == "..." || slot == "..") {
      sl.dots = true;
      sl.text = "...";
    } else {
      sl.text = slot;
      if (!parse_param_fragment(slot, sl.param))
        fail("syntax", line, "bad parameter template '" + slot + "'");
    }
    h.params.push_back(std::move(sl));
    if (comma == std::string::npos) break;
    p = comma + 1;
  }
  return h;
}

GenericPatchRule parse_rule(const std::vector<std::string>& lines, std::size_t& i,
                            int rule_index) {
  GenericPatchRule rule;
  rule.line = static_cast<int>(i) + 1;
  if (!parse_rule_header(lines[i], rule))
    fail("syntax", rule.line, "expected rule header '@name@'");
  if (rule.name.empty()) rule.name = "rule" + std::to_string(rule_index);
  ++i;
  bool anonymous_header = trim(lines[i - 1]) == "@@";
  if (!anonymous_header) {
    while (true) {
      if (i >= lines.size()) fail("syntax", rule.line, "missing '@@' after declarations");
      if (trim(lines[i]) == "@@") {
        ++i;
        break;
      }
      parse_decls(lines[i], static_cast<int>(i) + 1, rule);
      ++i;
    }
  }
  std::vector<BodyLine> body;
  while (i < lines.size()) {
    std::string t = trim(lines[i]);
    GenericPatchRule probe;
    if (!lines[i].empty() && lines[i][0] == '@' && parse_rule_header(lines[i], probe)) break;
    if (t.empty() || starts_with(t, "//")) {
      ++i;
      continue;
    }
    BodyLine bl;
    bl.line = static_cast<int>(i) + 1;
    const std::string& raw = lines[i];
    if (raw[0] == '-' || raw[0] == '+') {
      bl.prefix = raw[0];
      bl.content = rtrim(raw.substr(1));
    } else {
      bl.content = rtrim(raw);
    }
    body.push_back(std::move(bl));
    ++i;
  }
  if (body.empty()) fail("validation", rule.line, "rule '" + rule.name + "' has an empty body");
  // Function header template and its closing brace.
  if (body.front().prefix == ' ' && looks_like_header(trim(body.front().content))) {
    if (body.size() < 2 || body.back().prefix != ' ' || trim(body.back().content) != "}")
      fail("syntax", body.front().line, "function header template without closing '}'");
    rule.header = parse_header(trim(body.front().content), body.front().line);
    body.erase(body.begin());
    body.pop_back();
  }
  RuleParser rp(rule);
  rule.body = rp.elems(body);
  // Resolve annotation targets now that declarations are known.
  return rule;
}

// ---- rendering ----

void render_elems(const std::vector<PatternElem>& elems, const std::string& indent,
                  std::string& out) {
  for (const auto& e : elems) {
    switch (e.kind) {
      case ElemKind::Context:
      case ElemKind::Minus: {
        char prefix = e.kind == ElemKind::Minus ? '-' : ' ';
        for (const auto& l : split_lines(e.term.annotated())) {
          out += prefix;
          out += indent;
          out += l;
          out += '\n';
        }
        break;
      }
      case ElemKind::Plus:
        for (const auto& l : e.plus_lines) {
          out += '+';
          out += indent;
          out += l;
          out += '\n';
        }
        break;
      case ElemKind::Dots: {
        out += indent + "...";
        bool first = true;
        for (const auto& w : e.whens) {
          std::string clause = w.kind == WhenClause::Kind::Any
                                   ? std::string("when any")
                                   : "when != " + normalize_ws(w.term.text);
          if (first) {
            out += " " + clause + "\n";
          } else {
            out += indent + "    " + clause + "\n";
          }
          first = false;
        }
        if (first) out += "\n";
        break;
      }
      case ElemKind::Disjunction: {
        out += indent + "(\n";
        for (std::size_t b = 0; b < e.branches.size(); ++b) {
          if (b) out += indent + "|\n";
          render_elems(e.branches[b], indent, out);
        }
        out += indent + ")\n";
        break;
      }
    }
  }
}

// ---- signatures ----

void term_sig(const Term& t, std::string& out) {
  out += t.is_expression ? "E:" : "S:";
  out += canon(t.node());
  for (const auto& p : t.positions) out += "@" + std::to_string(p.token) + ":" + p.name;
}

void elems_sig(const std::vector<PatternElem>& elems, std::string& out) {
  for (const auto& e : elems) {
    switch (e.kind) {
      case ElemKind::Context:
        out += "{ctx ";
        term_sig(e.term, out);
        break;
      case ElemKind::Minus:
        out += "{min ";
        term_sig(e.term, out);
        break;
      case ElemKind::Plus:
        out += "{plus ";
        for (const auto& l : e.plus_lines)
          out += std::to_string(indent_of(l)) + "|" + normalize_ws(l) + "\n";
        break;
      case ElemKind::Dots:
        out += "{dots ";
        for (const auto& w : e.whens) {
          if (w.kind == WhenClause::Kind::Any) {
            out += "any;";
          } else {
            term_sig(w.term, out);
            out += "/fresh=" + join(w.fresh, ",") + ";";
          }
        }
        break;
      case ElemKind::Disjunction:
        out += "{disj ";
        for (const auto& b : e.branches) {
          out += "[";
          elems_sig(b, out);
          out += "]";
        }
        break;
    }
    out += "}";
  }
}

std::string header_sig(const HeaderTemplate& h) {
  std::string out = "hdr(" + (h.return_fragment.nodes.empty()
                                  ? std::string()
                                  : canon(h.return_fragment.nodes.front())) +
                    "|" + h.name + "|";
  for (const auto& s : h.params) out += (s.dots ? std::string("...") : canon(s.param.nodes.front())) + ";";
  return out + ")";
}

}  // namespace

std::string_view metavar_kind_name(MetavarKind k) { return kKindNames[static_cast<int>(k)]; }

bool metavar_kind_from_name(std::string_view s, MetavarKind& out) {
  for (std::size_t i = 0; i < std::size(kKindNames); ++i)
    if (kKindNames[i] == s) {
      out = static_cast<MetavarKind>(i);
      return true;
    }
  return false;
}

std::string Term::annotated() const {
  std::string out;
  std::size_t cur = 0;
  for (const auto& a : positions) {
    out += text.substr(cur, a.offset - cur);
    out += "@" + a.name;
    cur = a.offset;
  }
  out += text.substr(cur);
  return out;
}

bool PatternElem::is_any() const {
  return kind == ElemKind::Dots &&
         std::any_of(whens.begin(), whens.end(),
                     [](const WhenClause& w) { return w.kind == WhenClause::Kind::Any; });
}

const MetavarDecl* GenericPatchRule::find_metavar(std::string_view n) const {
  for (const auto& m : metavars)
    if (m.name == n) return &m;
  return nullptr;
}

bool make_term(const std::string& text, Term& out) {
  Term t;
  for (std::size_t k = 0; k < text.size(); ++k) {
    if (text[k] == '@' && k + 1 < text.size() && is_ident_start(text[k + 1])) {
      std::size_t s = ++k;
      while (k < text.size() && is_ident_char(text[k])) ++k;
      t.positions.push_back({t.text.size(), text.substr(s, k - s), 0});
      --k;
      continue;
    }
    t.text += text[k];
  }
  Fragment frag;
  if (parse_statement_fragment(t.text, frag) && frag.nodes.size() == 1) {
    t.is_expression = false;
  } else if (parse_expression_fragment(t.text, frag)) {
    t.is_expression = true;
  } else {
    return false;
  }
  t.fragment = std::move(frag);
  const auto& toks = t.fragment.tokens->tokens;
  for (auto& p : t.positions) {
    bool found = false;
    for (std::size_t i = 0; i < toks.size(); ++i)
      if (toks[i].offset + toks[i].lexeme.size() <= p.offset) {
        p.token = static_cast<std::uint32_t>(i);
        found = true;
      }
    if (!found) return false;
  }
  out = std::move(t);
  return true;
}

GenericPatch parse_generic_patch(const std::string& text, const std::string& id) {
  GenericPatch gp;
  gp.id = id;
  auto lines = split_lines(text);
  for (auto& l : lines)
    if (!l.empty() && l.back() == '\r') l.pop_back();
  std::size_t i = 0;
  int index = 0;
  while (i < lines.size()) {
    std::string t = trim(lines[i]);
    if (t.empty() || starts_with(t, "//")) {
      ++i;
      continue;
    }
    if (t.front() != '@') fail("syntax", static_cast<int>(i) + 1, "expected rule header");
    gp.rules.push_back(parse_rule(lines, i, index++));
  }
  if (gp.rules.empty()) throw Error("validation", "generic patch contains no rules");
  for (const auto& issue : validate(gp))
    if (issue.severity == Issue::Severity::Error)
      fail(issue.message.find("nest") != std::string::npos ? "unsupported" : "validation",
           issue.line, issue.message);
  return gp;
}

std::string render_rule(const GenericPatchRule& rule) {
  std::string out = "@" + rule.name;
  if (rule.quantifier == Quantifier::Exists) out += " exists";
  out += "@\n";
  std::vector<MetavarKind> order;
  for (const auto& m : rule.metavars)
    if (std::find(order.begin(), order.end(), m.kind) == order.end()) order.push_back(m.kind);
  for (auto k : order) {
    std::vector<std::string> names;
    for (const auto& m : rule.metavars)
      if (m.kind == k) names.push_back(m.name);
    out += std::string(metavar_kind_name(k)) + " " + join(names, ", ") + ";\n";
  }
  out += "@@\n";
  std::string indent;
  if (rule.header) {
    const auto& h = *rule.header;
    if (!h.return_type.empty()) out += h.return_type + " ";
    out += h.name + "(";
    for (std::size_t i = 0; i < h.params.size(); ++i) {
      if (i) out += ", ";
      out += h.params[i].dots ? std::string("...") : normalize_ws(h.params[i].text);
    }
    out += ") {\n";
    indent = "    ";
  }
  render_elems(rule.body, indent, out);
  if (rule.header) out += "}\n";
  return out;
}

std::string render_generic_patch(const GenericPatch& gp) {
  std::string out;
  for (std::size_t i = 0; i < gp.rules.size(); ++i) {
    if (i) out += "\n";
    out += render_rule(gp.rules[i]);
  }
  return out;
}

namespace {

void collect_used(const std::vector<PatternElem>& elems, std::set<std::string>& used) {
  auto add_text = [&](const std::string& t) {
    for (auto& id : identifiers_in(t)) used.insert(id);
  };
  for (const auto& e : elems) {
    switch (e.kind) {
      case ElemKind::Context:
      case ElemKind::Minus:
        add_text(e.term.text);
        for (const auto& p : e.term.positions) used.insert(p.name);
        break;
      case ElemKind::Plus:
        for (const auto& l : e.plus_lines) add_text(l);
        break;
      case ElemKind::Dots:
        for (const auto& w : e.whens)
          if (w.kind == WhenClause::Kind::NotMatch) add_text(w.term.text);
        break;
      case ElemKind::Disjunction:
        for (const auto& b : e.branches) collect_used(b, used);
        break;
    }
  }
}

void check_elems(const GenericPatchRule& rule, const std::vector<PatternElem>& elems,
                 bool in_branch, std::vector<Issue>& issues) {
  auto err = [&](int line, std::string msg) {
    issues.push_back({Issue::Severity::Error, std::move(msg), rule.name, line});
  };
  const PatternElem* prev_skeleton = nullptr;
  int branch_terms = 0;
  for (const auto& e : elems) {
    if (e.kind == ElemKind::Plus) continue;
    if (e.kind == ElemKind::Dots) {
      if (in_branch) err(e.line, "'...' is not supported inside a disjunction branch");
      if (prev_skeleton && prev_skeleton->kind == ElemKind::Dots)
        err(e.line, "'...' directly follows '...'");
      for (const auto& w : e.whens)
        if (w.kind == WhenClause::Kind::Any && e.whens.size() > 1)
          err(w.line, "'when any' cannot be combined with other when clauses");
    }
    if (e.kind == ElemKind::Disjunction) {
      if (in_branch) err(e.line, "nested disjunctions are not supported");
      if (e.branches.size() < 2) err(e.line, "a disjunction needs at least two branches");
      for (const auto& b : e.branches) {
        int terms = 0;
        for (const auto& be : b)
          if (be.kind == ElemKind::Context || be.kind == ElemKind::Minus) ++terms;
        if (terms != 1) err(e.line, "each disjunction branch must hold exactly one term");
        check_elems(rule, b, true, issues);
      }
    }
    if (e.kind == ElemKind::Context || e.kind == ElemKind::Minus) {
      ++branch_terms;
      for (const auto& p : e.term.positions) {
        const MetavarDecl* m = rule.find_metavar(p.name);
        if (!m) err(e.line, "undeclared metavariable '" + p.name + "'");
        else if (m->kind != MetavarKind::Position)
          err(e.line, "'" + p.name + "' is used as a position but declared as " +
                          std::string(metavar_kind_name(m->kind)));
      }
    }
    prev_skeleton = &e;
  }
}

bool has_anchor(const std::vector<PatternElem>& elems) {
  for (const auto& e : elems) {
    if (e.kind == ElemKind::Context || e.kind == ElemKind::Minus) return true;
    if (e.kind == ElemKind::Disjunction)
      for (const auto& b : e.branches)
        if (has_anchor(b)) return true;
  }
  return false;
}

}  // namespace

std::vector<Issue> validate(const GenericPatch& gp) {
  std::vector<Issue> issues;
  if (gp.rules.empty())
    issues.push_back({Issue::Severity::Error, "generic patch contains no rules", "", 0});
  for (const auto& rule : gp.rules) {
    std::set<std::string> names;
    for (const auto& m : rule.metavars)
      if (!names.insert(m.name).second)
        issues.push_back({Issue::Severity::Error,
                          "metavariable '" + m.name + "' declared twice", rule.name, m.line});
    if (rule.body.empty())
      issues.push_back({Issue::Severity::Error, "degenerate rule: empty body", rule.name,
                        rule.line});
    else if (!has_anchor(rule.body))
      issues.push_back({Issue::Severity::Error, "no anchor context: the rule only adds code",
                        rule.name, rule.line});
    check_elems(rule, rule.body, false, issues);
    std::set<std::string> used;
    collect_used(rule.body, used);
    if (rule.header) {
      for (auto& id : identifiers_in(rule.header->name)) used.insert(id);
      for (auto& id : identifiers_in(rule.header->return_type)) used.insert(id);
      for (const auto& s : rule.header->params)
        for (auto& id : identifiers_in(s.text)) used.insert(id);
    }
    for (const auto& m : rule.metavars)
      if (!used.count(m.name))
        issues.push_back({Issue::Severity::Warning,
                          "metavariable '" + m.name + "' is declared but never used", rule.name,
                          m.line});
  }
  return issues;
}

std::string signature(const GenericPatchRule& rule) {
  std::string out = "rule " + rule.name + (rule.quantifier == Quantifier::Exists ? " E" : " A");
  out += " mv[";
  for (const auto& m : rule.metavars)
    out += std::string(metavar_kind_name(m.kind)) + ":" + m.name + ",";
  out += "] ";
  if (rule.header) out += header_sig(*rule.header);
  elems_sig(rule.body, out);
  return out;
}

std::string signature(const GenericPatch& gp) {
  std::string out;
  for (const auto& r : gp.rules) out += signature(r) + "\n";
  return out;
}

std::string alpha_signature(const GenericPatchRule& rule) {
  std::string body;
  if (rule.header) body += header_sig(*rule.header);
  elems_sig(rule.body, body);
  std::map<std::string, std::string> rename;
  std::map<std::string, MetavarKind> kinds;
  for (const auto& m : rule.metavars) kinds[m.name] = m.kind;
  std::string out;
  std::size_t i = 0;
  while (i < body.size()) {
    if (is_ident_start(body[i]) && (i == 0 || !is_ident_char(body[i - 1]))) {
      std::size_t s = i;
      while (i < body.size() && is_ident_char(body[i])) ++i;
      std::string word = body.substr(s, i - s);
      auto k = kinds.find(word);
      if (k != kinds.end()) {
        auto r = rename.find(word);
        if (r == rename.end())
          r = rename.emplace(word, std::string(metavar_kind_name(k->second)) + "#" +
                                       std::to_string(rename.size()))
                  .first;
        out += r->second;
      } else {
        out += word;
      }
      continue;
    }
    out += body[i++];
  }
  std::vector<std::string> decls;
  for (const auto& m : rule.metavars) {
    auto r = rename.find(m.name);
    decls.push_back(r == rename.end() ? std::string(metavar_kind_name(m.kind)) + "#unused"
                                      : r->second);
  }
  std::sort(decls.begin(), decls.end());
  return std::string(rule.quantifier == Quantifier::Exists ? "E" : "A") + " mv[" +
         join(decls, ",") + "] " + out;
}

}  // namespace genpatch
