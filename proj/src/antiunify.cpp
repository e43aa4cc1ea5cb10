#include "antiunify.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "genpatch/common.hpp"

namespace genpatch::detail {

namespace {

[[noreturn]] void no_gen(const std::string& why) { throw Error("no-generalization", why); }

std::string text_of(const TermRef& t) {
  std::string out;
  for (std::uint32_t i = t.node->first; i < t.node->last; ++i) {
    if (!out.empty()) out += ' ';
    out += t.tokens->tokens[i].lexeme;
  }
  return out;
}

// Lexemes of the node that belong to no child.
std::vector<std::string> skeleton(const TermRef& t) {
  std::vector<std::string> out;
  std::uint32_t i = t.node->first;
  for (const auto& c : t.node->children) {
    if (c.empty_span()) continue;
    for (; i < c.first; ++i) out.push_back(t.tokens->tokens[i].lexeme);
    out.push_back("\x01");
    i = std::max(i, c.last);
  }
  for (; i < t.node->last; ++i) out.push_back(t.tokens->tokens[i].lexeme);
  return out;
}

// Parentheses wrapping the whole span, which the parser folds into the node.
int wrapping_parens(const std::vector<Token>& toks, std::uint32_t first, std::uint32_t last) {
  int k = 0;
  while (last - first >= 2 && toks[first].lexeme == "(" && toks[last - 1].lexeme == ")") {
    int depth = 0;
    std::uint32_t i = first;
    for (; i < last; ++i) {
      if (toks[i].lexeme == "(") ++depth;
      if (toks[i].lexeme == ")" && --depth == 0) break;
    }
    if (i != last - 1) break;
    ++k, ++first, --last;
  }
  return k;
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_type_node(NodeType t) { return t == NodeType::TypeName || t == NodeType::PointerType; }

}  // namespace

int AntiUnifier::add(const std::vector<TermRef>& terms) {
  if (terms.empty()) no_gen("no terms");
  auto saved_nodes = nodes_.size();
  auto saved_vars = vars_;
  try {
    const NodeType t0 = terms[0].node->type;
    for (const auto& t : terms)
      if (t.node->type != t0) no_gen("root node types differ");
    return gen(terms, is_expression(t0) ? Role::Expr : Role::Stmt);
  } catch (...) {
    nodes_.resize(saved_nodes);
    vars_ = std::move(saved_vars);
    throw;
  }
}

int AntiUnifier::bind(const std::vector<TermRef>& terms, MetavarKind kind) {
  std::vector<std::string> canons;
  bool idents = true;
  for (const auto& t : terms) {
    canons.push_back(canon(*t.node));
    idents &= t.node->type == NodeType::Identifier;
  }
  int v = -1;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].canons == canons) v = static_cast<int>(i);
  if (v < 0) {
    Var var;
    var.kind = kind;
    var.canons = std::move(canons);
    var.all_identifiers = idents;
    for (const auto& t : terms) var.values.push_back(text_of(t));
    vars_.push_back(std::move(var));
    v = static_cast<int>(vars_.size()) - 1;
  } else if (vars_[v].kind != kind) {
    // The same values seen in an identifier slot and an expression slot.
    auto& k = vars_[v].kind;
    bool ident_expr = (k == MetavarKind::Identifier && kind == MetavarKind::Expression) ||
                      (k == MetavarKind::Expression && kind == MetavarKind::Identifier);
    if (!ident_expr || !vars_[v].all_identifiers) no_gen("metavariable used in two categories");
    k = MetavarKind::Identifier;
  }
  TNode n;
  n.kind = TNode::Variable;
  n.ref = terms[0];
  n.var = v;
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

int AntiUnifier::gen(const std::vector<TermRef>& terms, Role role) {
  const Node& n0 = *terms[0].node;
  const std::string c0 = canon(n0);
  bool same = true;
  for (const auto& t : terms) same &= canon(*t.node) == c0;
  if (same) {
    TNode n;
    n.ref = terms[0];
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }
  if (role == Role::Callee) no_gen("callees differ: " + text_of(terms[0]) + " / " + text_of(terms[1]));

  bool composite = n0.type != NodeType::Identifier && n0.type != NodeType::Literal &&
                   n0.type != NodeType::TypeName && n0.type != NodeType::OpaqueStmt;
  const auto sk0 = skeleton(terms[0]);
  for (const auto& t : terms) {
    if (!composite) break;
    composite = t.node->type == n0.type && t.node->label == n0.label &&
                t.node->children.size() == n0.children.size() && skeleton(t) == sk0;
    for (std::size_t i = 0; composite && i < n0.children.size(); ++i)
      composite = t.node->children[i].empty_span() == n0.children[i].empty_span();
  }
  if (composite) {
    TNode n;
    n.kind = TNode::Composite;
    n.ref = terms[0];
    for (std::size_t i = 0; i < n0.children.size(); ++i) {
      std::vector<TermRef> kids;
      for (const auto& t : terms) kids.push_back({t.tokens, &t.node->children[i]});
      const Node& k0 = n0.children[i];
      Role r = is_expression(k0.type) ? Role::Expr
               : is_type_node(k0.type) ? Role::Type
                                       : Role::Stmt;
      if (n0.type == NodeType::CallExpr && i == 0 && k0.type == NodeType::Identifier)
        r = Role::Callee;
      else if ((n0.type == NodeType::FieldAccess && i == 1) ||
               (n0.type == NodeType::DeclStmt && i == 1) || (n0.type == NodeType::Param && i == 1))
        r = Role::Ident;
      n.children.push_back(gen(kids, r));
    }
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  auto all = [&](auto pred) {
    return std::all_of(terms.begin(), terms.end(), [&](const TermRef& t) { return pred(t.node->type); });
  };
  switch (role) {
    case Role::Ident:
      if (!all([](NodeType t) { return t == NodeType::Identifier; })) no_gen("identifier slot");
      return bind(terms, MetavarKind::Identifier);
    case Role::Type:
      if (!all(is_type_node)) no_gen("type slot");
      return bind(terms, MetavarKind::Type);
    case Role::Expr:
      if (!all(is_expression)) no_gen("expression slot");
      return bind(terms, all([](NodeType t) { return t == NodeType::Literal; })
                             ? MetavarKind::Constant
                             : MetavarKind::Expression);
    default:
      no_gen("statements differ: " + text_of(terms[0]) + " / " + text_of(terms[1]));
  }
}

void AntiUnifier::finalize() {
  std::map<MetavarKind, int> counters;
  std::vector<int> order;
  // First use is the order of appearance in the templates.
  for (const auto& n : nodes_)
    if (n.kind == TNode::Variable && std::find(order.begin(), order.end(), n.var) == order.end())
      order.push_back(n.var);
  for (int v : order) {
    auto& var = vars_[v];
    char prefix = var.kind == MetavarKind::Identifier ? 'I'
                  : var.kind == MetavarKind::Constant ? 'C'
                  : var.kind == MetavarKind::Type     ? 'T'
                                                      : 'E';
    var.name = std::string(1, prefix) + std::to_string(counters[var.kind]++);
  }
}

std::vector<MetavarDecl> AntiUnifier::decls() const {
  std::vector<MetavarDecl> out;
  std::vector<int> order;
  for (const auto& n : nodes_)
    if (n.kind == TNode::Variable && std::find(order.begin(), order.end(), n.var) == order.end())
      order.push_back(n.var);
  for (int v : order) out.push_back({vars_[v].name, vars_[v].kind, 0});
  return out;
}

std::vector<int> AntiUnifier::vars_of(int handle) const {
  std::vector<int> out;
  std::vector<int> stack{handle};
  while (!stack.empty()) {
    const TNode& n = nodes_[stack.back()];
    stack.pop_back();
    if (n.kind == TNode::Variable && std::find(out.begin(), out.end(), n.var) == out.end())
      out.push_back(n.var);
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::string AntiUnifier::render(int handle) const {
  std::string out;
  const TNode& root = nodes_[handle];
  int base = root.ref.tokens->tokens[root.ref.node->first].pos.column;
  render(handle, base, true, out);
  return out;
}

void AntiUnifier::render(int h, int base_col, bool first, std::string& out) const {
  const TNode& n = nodes_[h];
  const auto& toks = n.ref.tokens->tokens;
  auto sep = [&](std::uint32_t i) {
    if (first && out.empty()) return;
    const Token& t = toks[i];
    if (t.trivia.find('\n') != std::string::npos)
      out += "\n" + std::string(static_cast<std::size_t>(std::max(0, t.pos.column - base_col)), ' ');
    else if (!t.trivia.empty() || (word_char(out.back()) && !t.lexeme.empty() && word_char(t.lexeme[0])))
      out += ' ';
  };
  const Node& node = *n.ref.node;
  if (node.empty_span()) return;
  if (n.kind == TNode::Variable) {
    sep(node.first);
    const int k = wrapping_parens(toks, node.first, node.last);
    out += std::string(k, '(') + vars_[n.var].name + std::string(k, ')');
    return;
  }
  std::uint32_t i = node.first;
  if (n.kind == TNode::Composite) {
    for (int c : n.children) {
      const Node& cn = *nodes_[c].ref.node;
      if (cn.empty_span()) continue;
      for (; i < cn.first; ++i) {
        sep(i);
        out += toks[i].lexeme;
      }
      render(c, base_col, first, out);
      i = std::max(i, cn.last);
    }
  }
  for (; i < node.last; ++i) {
    sep(i);
    out += toks[i].lexeme;
  }
}

}  // namespace genpatch::detail
