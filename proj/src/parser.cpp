#include <utility>

#include "genpatch/common.hpp"
#include "genpatch/lang.hpp"

namespace genpatch {

namespace {

struct ParseFail {};

constexpr std::string_view kNodeNames[] = {
    "TranslationUnit", "FunctionDef", "ParamList",    "Param",       "CompoundStmt",
    "DeclStmt",        "ExprStmt",    "IfStmt",       "WhileStmt",   "ForStmt",
    "ReturnStmt",      "BreakStmt",   "ContinueStmt", "OpaqueStmt",  "BinaryExpr",
    "UnaryExpr",       "CallExpr",    "FieldAccess",  "IndexExpr",   "AssignExpr",
    "Identifier",      "Literal",     "TypeName",     "PointerType"};

int binary_level(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "|") return 3;
  if (op == "^") return 4;
  if (op == "&") return 5;
  if (op == "==" || op == "!=") return 6;
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 7;
  if (op == "<<" || op == ">>") return 8;
  if (op == "+" || op == "-") return 9;
  if (op == "*" || op == "/" || op == "%") return 10;
  return 0;
}

bool is_assign_op(std::string_view op) {
  return op == "=" || op == "+=" || op == "-=" || op == "*=" || op == "/=" ||
         op == "%=" || op == "&=" || op == "|=" || op == "^=" || op == "<<=" ||
         op == ">>=";
}

bool is_qualifier(std::string_view w) {
  return w == "const" || w == "static" || w == "extern" || w == "volatile" ||
         w == "register" || w == "inline" || w == "restrict" || w == "__inline" ||
         w == "__restrict" || w == "__const";
}

bool is_base_type_word(std::string_view w) {
  return w == "int" || w == "char" || w == "void" || w == "short" || w == "long" ||
         w == "float" || w == "double" || w == "unsigned" || w == "signed" ||
         w == "_Bool" || w == "bool";
}

class Parser {
 public:
  Parser(const TokenStream& ts, bool strict) : ts_(ts), strict_(strict) {}

  Node translation_unit() {
    Node root;
    root.type = NodeType::TranslationUnit;
    root.first = 0;
    while (!at_end()) {
      std::size_t start = pos_;
      if (at_directive()) {
        root.children.push_back(directive());
        continue;
      }
      try {
        root.children.push_back(function_def());
        continue;
      } catch (const ParseFail&) {
        pos_ = start;
      }
      try {
        Node d = declaration();
        expect(";");
        d.last = static_cast<std::uint32_t>(pos_);
        root.children.push_back(std::move(d));
        continue;
      } catch (const ParseFail&) {
        pos_ = start;
      }
      root.children.push_back(opaque(start, true));
    }
    root.last = static_cast<std::uint32_t>(pos_);
    return root;
  }

  bool at_end() const { return pos_ >= ts_.tokens.size(); }
  std::size_t pos() const { return pos_; }

  Node expression() { return assignment(); }

  std::vector<Node> statements_until_end() {
    std::vector<Node> out;
    while (!at_end()) out.push_back(statement());
    return out;
  }

  Node param() {
    std::size_t start = pos_;
    Node p = make(NodeType::Param, "", start);
    p.children.push_back(type());
    if (peek_kind(TokenKind::Identifier)) p.children.push_back(identifier());
    p.last = static_cast<std::uint32_t>(pos_);
    return p;
  }

 private:
  const Token* peek(std::size_t k = 0) const {
    return pos_ + k < ts_.tokens.size() ? &ts_.tokens[pos_ + k] : nullptr;
  }
  bool peek_is(std::string_view lex, std::size_t k = 0) const {
    auto* t = peek(k);
    return t && t->lexeme == lex && t->kind != TokenKind::String &&
           t->kind != TokenKind::Char;
  }
  bool peek_kind(TokenKind kind, std::size_t k = 0) const {
    auto* t = peek(k);
    return t && t->kind == kind;
  }
  void expect(std::string_view lex) {
    if (!peek_is(lex)) throw ParseFail{};
    ++pos_;
  }
  Node make(NodeType type, std::string label, std::size_t first) const {
    Node n;
    n.type = type;
    n.label = std::move(label);
    n.first = static_cast<std::uint32_t>(first);
    return n;
  }
  Node leaf(NodeType type) {
    Node n = make(type, ts_.tokens[pos_].lexeme, pos_);
    ++pos_;
    n.last = static_cast<std::uint32_t>(pos_);
    return n;
  }
  Node identifier() {
    if (!peek_kind(TokenKind::Identifier)) throw ParseFail{};
    return leaf(NodeType::Identifier);
  }

  bool at_directive() const {
    if (!peek_is("#")) return false;
    return pos_ == 0 || ts_.tokens[pos_].trivia.find('\n') != std::string::npos;
  }

  Node directive() {
    std::size_t start = pos_;
    ++pos_;
    while (!at_end()) {
      const Token& t = ts_.tokens[pos_];
      bool new_line = t.trivia.find('\n') != std::string::npos;
      if (new_line && ts_.tokens[pos_ - 1].lexeme != "\\") break;
      ++pos_;
    }
    return opaque_node(start);
  }

  Node opaque_node(std::size_t start) {
    Node n = make(NodeType::OpaqueStmt, "", start);
    n.last = static_cast<std::uint32_t>(pos_);
    for (std::size_t i = start; i < pos_; ++i) {
      if (i > start) n.label += ' ';
      n.label += ts_.tokens[i].lexeme;
    }
    return n;
  }

  // Skip an unparseable region: up to and including a `;` at depth 0, or a
  // balanced `{...}` block. Stops before a closing `}` of the enclosing block.
  Node opaque(std::size_t start, bool top_level) {
    pos_ = start;
    int depth = 0;
    while (!at_end()) {
      const std::string& lx = ts_.tokens[pos_].lexeme;
      bool plain = ts_.tokens[pos_].kind == TokenKind::Punct;
      if (plain && depth == 0 && lx == "}" && pos_ > start) break;
      if (plain && (lx == "(" || lx == "[" || lx == "{")) ++depth;
      if (plain && (lx == ")" || lx == "]" || lx == "}")) {
        if (depth > 0) --depth;
        if (depth == 0 && lx == "}") {
          ++pos_;
          if (peek_is(";")) {
            ++pos_;
          } else if (top_level && !at_end() &&
                     ts_.tokens[pos_].trivia.find('\n') == std::string::npos) {
            while (!at_end() && !peek_is(";") && !peek_is("{") && !at_directive()) ++pos_;
            if (peek_is(";")) ++pos_;
          }
          break;
        }
      }
      ++pos_;
      if (plain && depth == 0 && lx == ";") break;
      if (top_level && depth == 0 && at_directive()) break;
    }
    if (pos_ == start) ++pos_;
    return opaque_node(start);
  }

  bool type_start() const {
    auto* t = peek();
    if (!t) return false;
    if (t->kind == TokenKind::Keyword) return is_type_keyword(t->lexeme);
    return false;
  }

  Node type() {
    std::size_t start = pos_;
    std::string text;
    auto add = [&](const std::string& w) {
      if (!text.empty()) text += ' ';
      text += w;
      ++pos_;
    };
    while (peek() && peek()->kind == TokenKind::Keyword && is_qualifier(peek()->lexeme))
      add(peek()->lexeme);
    if (peek_is("struct") || peek_is("union") || peek_is("enum")) {
      add(peek()->lexeme);
      if (!peek_kind(TokenKind::Identifier)) throw ParseFail{};
      add(peek()->lexeme);
    } else if (peek() && peek()->kind == TokenKind::Keyword &&
               is_base_type_word(peek()->lexeme)) {
      while (peek() && peek()->kind == TokenKind::Keyword &&
             (is_base_type_word(peek()->lexeme) || is_qualifier(peek()->lexeme)))
        add(peek()->lexeme);
    } else if (peek_kind(TokenKind::Identifier)) {
      add(peek()->lexeme);
    } else {
      throw ParseFail{};
    }
    while (peek() && peek()->kind == TokenKind::Keyword && is_qualifier(peek()->lexeme))
      add(peek()->lexeme);
    Node t = make(NodeType::TypeName, text, start);
    t.last = static_cast<std::uint32_t>(pos_);
    while (peek_is("*")) {
      ++pos_;
      Node p = make(NodeType::PointerType, "*", start);
      p.children.push_back(std::move(t));
      p.last = static_cast<std::uint32_t>(pos_);
      t = std::move(p);
    }
    return t;
  }

  Node function_def() {
    std::size_t start = pos_;
    Node fn = make(NodeType::FunctionDef, "", start);
    fn.children.push_back(type());
    fn.children.push_back(identifier());
    fn.label = fn.children.back().label;
    std::size_t plist_start = pos_;
    expect("(");
    Node plist = make(NodeType::ParamList, "", plist_start);
    if (peek_is("void") && peek_is(")", 1)) {
      ++pos_;
    } else if (!peek_is(")")) {
      while (true) {
        plist.children.push_back(param());
        if (peek_is(",")) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect(")");
    plist.last = static_cast<std::uint32_t>(pos_);
    fn.children.push_back(std::move(plist));
    if (!peek_is("{")) throw ParseFail{};
    fn.children.push_back(compound());
    fn.last = static_cast<std::uint32_t>(pos_);
    return fn;
  }

  Node compound() {
    std::size_t start = pos_;
    expect("{");
    Node c = make(NodeType::CompoundStmt, "", start);
    while (true) {
      if (at_end()) throw ParseFail{};
      if (peek_is("}")) break;
      c.children.push_back(statement());
    }
    expect("}");
    c.last = static_cast<std::uint32_t>(pos_);
    return c;
  }

  bool looks_like_decl() const {
    if (type_start()) return true;
    if (!peek_kind(TokenKind::Identifier)) return false;
    if (peek_kind(TokenKind::Identifier, 1)) return true;
    std::size_t k = 1;
    if (!peek_is("*", k)) return false;
    while (peek_is("*", k)) ++k;
    if (!peek_kind(TokenKind::Identifier, k)) return false;
    ++k;
    return peek_is("=", k) || peek_is(";", k) || peek_is(",", k) || peek_is("[", k) ||
           peek_is(")", k);
  }

  // Declaration without the trailing `;`.
  Node declaration() {
    std::size_t start = pos_;
    Node d = make(NodeType::DeclStmt, "", start);
    d.children.push_back(type());
    d.children.push_back(identifier());
    if (peek_is("=")) {
      ++pos_;
      d.children.push_back(assignment());
    }
    d.last = static_cast<std::uint32_t>(pos_);
    return d;
  }

  Node statement() {
    std::size_t start = pos_;
    try {
      return statement_strict();
    } catch (const ParseFail&) {
      if (strict_) throw;
      return opaque(start, false);
    }
  }

  Node statement_strict() {
    std::size_t start = pos_;
    const Token* t = peek();
    if (!t) throw ParseFail{};
    if (peek_is("{")) return compound();
    if (t->kind == TokenKind::Keyword) {
      const std::string& kw = t->lexeme;
      if (kw == "if") {
        ++pos_;
        Node n = make(NodeType::IfStmt, "", start);
        expect("(");
        n.children.push_back(expression());
        expect(")");
        n.children.push_back(statement());
        if (peek_is("else")) {
          ++pos_;
          n.children.push_back(statement());
        }
        n.last = static_cast<std::uint32_t>(pos_);
        return n;
      }
      if (kw == "while") {
        ++pos_;
        Node n = make(NodeType::WhileStmt, "", start);
        expect("(");
        n.children.push_back(expression());
        expect(")");
        if (peek_is(";")) throw ParseFail{};
        n.children.push_back(statement());
        n.last = static_cast<std::uint32_t>(pos_);
        return n;
      }
      if (kw == "for") {
        ++pos_;
        Node n = make(NodeType::ForStmt, "", start);
        expect("(");
        std::size_t init_start = pos_;
        if (looks_like_decl()) {
          Node d = declaration();
          expect(";");
          d.last = static_cast<std::uint32_t>(pos_);
          n.children.push_back(std::move(d));
        } else {
          Node e = make(NodeType::ExprStmt, "", init_start);
          e.children.push_back(expression());
          expect(";");
          e.last = static_cast<std::uint32_t>(pos_);
          n.children.push_back(std::move(e));
        }
        n.children.push_back(expression());
        expect(";");
        n.children.push_back(expression());
        expect(")");
        if (peek_is(";")) throw ParseFail{};
        n.children.push_back(statement());
        n.last = static_cast<std::uint32_t>(pos_);
        return n;
      }
      if (kw == "return") {
        ++pos_;
        Node n = make(NodeType::ReturnStmt, "", start);
        if (!peek_is(";")) n.children.push_back(expression());
        expect(";");
        n.last = static_cast<std::uint32_t>(pos_);
        return n;
      }
      if (kw == "break" || kw == "continue") {
        ++pos_;
        expect(";");
        Node n = make(kw == "break" ? NodeType::BreakStmt : NodeType::ContinueStmt, "",
                      start);
        n.last = static_cast<std::uint32_t>(pos_);
        return n;
      }
    }
    if (looks_like_decl()) {
      Node d = declaration();
      expect(";");
      d.last = static_cast<std::uint32_t>(pos_);
      return d;
    }
    Node n = make(NodeType::ExprStmt, "", start);
    n.children.push_back(expression());
    expect(";");
    n.last = static_cast<std::uint32_t>(pos_);
    return n;
  }

  Node assignment() {
    std::size_t start = pos_;
    Node lhs = binary(1);
    if (peek() && peek()->kind == TokenKind::Operator && is_assign_op(peek()->lexeme)) {
      std::string op = peek()->lexeme;
      ++pos_;
      Node n = make(NodeType::AssignExpr, op, start);
      n.children.push_back(std::move(lhs));
      n.children.push_back(assignment());
      n.last = static_cast<std::uint32_t>(pos_);
      return n;
    }
    if (peek_is("?")) throw ParseFail{};  // conditional operator: not MiniC
    return lhs;
  }

  Node binary(int min_level) {
    std::size_t start = pos_;
    Node lhs = unary();
    while (true) {
      const Token* t = peek();
      if (!t || t->kind != TokenKind::Operator) break;
      int level = binary_level(t->lexeme);
      if (level == 0 || level < min_level) break;
      std::string op = t->lexeme;
      ++pos_;
      Node rhs = binary(level + 1);
      Node n = make(NodeType::BinaryExpr, op, start);
      n.children.push_back(std::move(lhs));
      n.children.push_back(std::move(rhs));
      n.last = static_cast<std::uint32_t>(pos_);
      lhs = std::move(n);
    }
    return lhs;
  }

  bool cast_ahead() const {
    if (!peek_is("(")) return false;
    auto* t = peek(1);
    if (!t) return false;
    if (t->kind == TokenKind::Keyword && is_type_keyword(t->lexeme)) return true;
    if (t->kind == TokenKind::Identifier && peek_is("*", 2)) {
      std::size_t k = 2;
      while (peek_is("*", k)) ++k;
      return peek_is(")", k);
    }
    return false;
  }

  Node unary() {
    std::size_t start = pos_;
    const Token* t = peek();
    if (!t) throw ParseFail{};
    if (t->kind == TokenKind::Operator &&
        (t->lexeme == "-" || t->lexeme == "+" || t->lexeme == "!" || t->lexeme == "~" ||
         t->lexeme == "*" || t->lexeme == "&" || t->lexeme == "++" || t->lexeme == "--")) {
      std::string op = t->lexeme;
      ++pos_;
      Node n = make(NodeType::UnaryExpr, op, start);
      n.children.push_back(unary());
      n.last = static_cast<std::uint32_t>(pos_);
      return n;
    }
    if (peek_is("sizeof")) {
      ++pos_;
      Node n = make(NodeType::UnaryExpr, "sizeof", start);
      if (cast_ahead()) {
        ++pos_;
        n.children.push_back(type());
        expect(")");
      } else {
        n.children.push_back(unary());
      }
      n.last = static_cast<std::uint32_t>(pos_);
      return n;
    }
    if (cast_ahead()) {
      ++pos_;
      Node n = make(NodeType::UnaryExpr, "cast", start);
      n.children.push_back(type());
      expect(")");
      n.children.push_back(unary());
      n.last = static_cast<std::uint32_t>(pos_);
      return n;
    }
    return postfix();
  }

  Node postfix() {
    std::size_t start = pos_;
    Node e = primary();
    while (true) {
      if (peek_is("(")) {
        ++pos_;
        Node call = make(NodeType::CallExpr, "", start);
        call.children.push_back(std::move(e));
        if (!peek_is(")")) {
          while (true) {
            call.children.push_back(assignment());
            if (peek_is(",")) {
              ++pos_;
              continue;
            }
            break;
          }
        }
        expect(")");
        call.last = static_cast<std::uint32_t>(pos_);
        e = std::move(call);
      } else if (peek_is("[")) {
        ++pos_;
        Node idx = make(NodeType::IndexExpr, "", start);
        idx.children.push_back(std::move(e));
        idx.children.push_back(expression());
        expect("]");
        idx.last = static_cast<std::uint32_t>(pos_);
        e = std::move(idx);
      } else if (peek_is("->") || peek_is(".")) {
        std::string op = peek()->lexeme;
        ++pos_;
        Node fa = make(NodeType::FieldAccess, op, start);
        fa.children.push_back(std::move(e));
        fa.children.push_back(identifier());
        fa.last = static_cast<std::uint32_t>(pos_);
        e = std::move(fa);
      } else if (peek_is("++") || peek_is("--")) {
        std::string op = "post" + peek()->lexeme;
        ++pos_;
        Node u = make(NodeType::UnaryExpr, op, start);
        u.children.push_back(std::move(e));
        u.last = static_cast<std::uint32_t>(pos_);
        e = std::move(u);
      } else {
        break;
      }
    }
    return e;
  }

  Node primary() {
    const Token* t = peek();
    if (!t) throw ParseFail{};
    switch (t->kind) {
      case TokenKind::Identifier:
        return leaf(NodeType::Identifier);
      case TokenKind::Number:
      case TokenKind::Char:
        return leaf(NodeType::Literal);
      case TokenKind::String: {
        std::size_t start = pos_;
        Node n = leaf(NodeType::Literal);
        while (peek_kind(TokenKind::String)) {
          n.label += ' ';
          n.label += peek()->lexeme;
          ++pos_;
        }
        n.first = static_cast<std::uint32_t>(start);
        n.last = static_cast<std::uint32_t>(pos_);
        return n;
      }
      default:
        break;
    }
    if (peek_is("(")) {
      std::size_t start = pos_;
      ++pos_;
      Node inner = expression();
      expect(")");
      inner.first = static_cast<std::uint32_t>(start);
      inner.last = static_cast<std::uint32_t>(pos_);
      return inner;
    }
    throw ParseFail{};
  }

  const TokenStream& ts_;
  std::size_t pos_ = 0;
  bool strict_;
};

void canon_into(const Node& n, std::string& out) {
  out += node_type_name(n.type);
  if (!n.label.empty()) {
    out += '[';
    out += n.label;
    out += ']';
  }
  if (!n.children.empty()) {
    out += '(';
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) out += ',';
      canon_into(n.children[i], out);
    }
    out += ')';
  }
}

}  // namespace

std::string_view node_type_name(NodeType t) {
  return kNodeNames[static_cast<std::size_t>(t)];
}

bool node_type_from_name(std::string_view name, NodeType& out) {
  for (std::size_t i = 0; i < std::size(kNodeNames); ++i)
    if (kNodeNames[i] == name) {
      out = static_cast<NodeType>(i);
      return true;
    }
  return false;
}

bool is_expression(NodeType t) {
  switch (t) {
    case NodeType::BinaryExpr:
    case NodeType::UnaryExpr:
    case NodeType::CallExpr:
    case NodeType::FieldAccess:
    case NodeType::IndexExpr:
    case NodeType::AssignExpr:
    case NodeType::Identifier:
    case NodeType::Literal:
      return true;
    default:
      return false;
  }
}

bool is_statement(NodeType t) {
  switch (t) {
    case NodeType::CompoundStmt:
    case NodeType::DeclStmt:
    case NodeType::ExprStmt:
    case NodeType::IfStmt:
    case NodeType::WhileStmt:
    case NodeType::ForStmt:
    case NodeType::ReturnStmt:
    case NodeType::BreakStmt:
    case NodeType::ContinueStmt:
    case NodeType::OpaqueStmt:
      return true;
    default:
      return false;
  }
}

std::string canon(const Node& n) {
  std::string out;
  canon_into(n, out);
  return out;
}

std::size_t node_count(const Node& n) {
  std::size_t c = 1;
  for (const auto& ch : n.children) c += node_count(ch);
  return c;
}

AstUnit parse_unit(std::string source, const std::string& path) {
  AstUnit unit;
  unit.path = path;
  auto ts = std::make_shared<TokenStream>(tokenize(source, path));
  unit.source = std::move(source);
  Parser p(*ts, false);
  auto root = std::make_shared<Node>(p.translation_unit());
  bool all_opaque = !root->children.empty();
  for (const auto& c : root->children)
    if (c.type != NodeType::OpaqueStmt) all_opaque = false;
  // A file of nothing but directives is not degenerate; it simply has no code.
  bool only_directives = true;
  for (const auto& c : root->children)
    if (c.type != NodeType::OpaqueStmt || c.label.empty() || c.label[0] != '#')
      only_directives = false;
  unit.degenerate = all_opaque && !only_directives;
  unit.tokens = std::move(ts);
  unit.root = std::move(root);
  return unit;
}

std::string print_unit(const AstUnit& unit) { return print_tokens(*unit.tokens); }

namespace {

template <class F>
bool parse_fragment(std::string_view text, Fragment& out, F&& body) {
  try {
    auto ts = std::make_shared<TokenStream>(tokenize(text, "<pattern>"));
    Parser p(*ts, true);
    std::vector<Node> nodes;
    bool is_expr = false;
    try {
      body(p, nodes, is_expr);
    } catch (const ParseFail&) {
      return false;
    }
    if (!p.at_end() || nodes.empty()) return false;
    out.tokens = std::move(ts);
    out.nodes = std::move(nodes);
    out.is_expression = is_expr;
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

bool parse_expression_fragment(std::string_view text, Fragment& out) {
  return parse_fragment(text, out, [](Parser& p, std::vector<Node>& nodes, bool& e) {
    nodes.push_back(p.expression());
    e = true;
  });
}

bool parse_statement_fragment(std::string_view text, Fragment& out) {
  return parse_fragment(text, out, [](Parser& p, std::vector<Node>& nodes, bool&) {
    nodes = p.statements_until_end();
  });
}

bool parse_param_fragment(std::string_view text, Fragment& out) {
  return parse_fragment(text, out, [](Parser& p, std::vector<Node>& nodes, bool&) {
    nodes.push_back(p.param());
  });
}

std::string AstUnit::token_text(const Node& n) const {
  std::string out;
  for (auto i = n.first; i < n.last; ++i) {
    if (i > n.first) out += ' ';
    out += tokens->tokens[i].lexeme;
  }
  return out;
}

std::size_t AstUnit::begin_offset(const Node& n) const {
  if (n.first >= tokens->tokens.size()) return source.size();
  return tokens->tokens[n.first].offset;
}

std::size_t AstUnit::end_offset(const Node& n) const {
  if (n.last == 0 || n.empty_span()) return begin_offset(n);
  const Token& t = tokens->tokens[n.last - 1];
  return t.offset + t.lexeme.size();
}

std::string AstUnit::source_text(const Node& n) const {
  auto b = begin_offset(n);
  return source.substr(b, end_offset(n) - b);
}

Position AstUnit::start(const Node& n) const {
  if (n.first >= tokens->tokens.size()) return {};
  return tokens->tokens[n.first].pos;
}

Position AstUnit::end(const Node& n) const {
  if (n.last == 0 || n.empty_span()) return start(n);
  const Token& t = tokens->tokens[n.last - 1];
  return {t.pos.line, t.pos.column + static_cast<int>(t.lexeme.size())};
}

std::vector<const Node*> AstUnit::functions() const {
  std::vector<const Node*> out;
  for (const auto& c : root->children)
    if (c.type == NodeType::FunctionDef) out.push_back(&c);
  return out;
}

}  // namespace genpatch
