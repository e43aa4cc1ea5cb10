#pragma once

// MiniC: the C subset the toolchain understands. Anything outside it is kept
// verbatim as OpaqueStmt so that printing stays lossless.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace genpatch {

enum class TokenKind { Keyword, Identifier, Number, String, Char, Operator, Punct };

struct Position {
  int line = 1;
  int column = 1;
  bool operator==(const Position&) const = default;
};

struct Token {
  TokenKind kind = TokenKind::Punct;
  std::string lexeme;
  std::string trivia;  // whitespace and comments preceding the token
  Position pos;
  std::size_t offset = 0;  // byte offset of the lexeme in the source
};

struct TokenStream {
  std::string path;
  std::vector<Token> tokens;
  std::string trailing;  // trivia after the last token
};

/// Throws Error("lexical") on unterminated strings, chars or comments.
TokenStream tokenize(std::string_view source, const std::string& path = "<input>");
std::string print_tokens(const TokenStream& ts);
bool is_type_keyword(std::string_view word);

enum class NodeType : std::uint8_t {
  TranslationUnit,
  FunctionDef,
  ParamList,
  Param,
  CompoundStmt,
  DeclStmt,
  ExprStmt,
  IfStmt,
  WhileStmt,
  ForStmt,
  ReturnStmt,
  BreakStmt,
  ContinueStmt,
  OpaqueStmt,
  BinaryExpr,
  UnaryExpr,
  CallExpr,
  FieldAccess,
  IndexExpr,
  AssignExpr,
  Identifier,
  Literal,
  TypeName,
  PointerType,
};

std::string_view node_type_name(NodeType t);
/// Inverse of node_type_name; returns false for unknown names.
bool node_type_from_name(std::string_view name, NodeType& out);
bool is_expression(NodeType t);
bool is_statement(NodeType t);

/// AST node. `label` carries the operator for Binary/Unary/Assign/FieldAccess,
/// the name for Identifier, the text for Literal/TypeName/OpaqueStmt.
/// Tokens covered: [first, last) in the owning TokenStream. Parentheses
/// around an expression belong to the expression's token range.
struct Node {
  NodeType type = NodeType::OpaqueStmt;
  std::string label;
  std::vector<Node> children;
  std::uint32_t first = 0;
  std::uint32_t last = 0;

  bool empty_span() const { return first >= last; }
};

/// Immutable parsed file. Node addresses are stable for the unit's lifetime,
/// so CFGs and match sites may hold `const Node*`.
struct AstUnit {
  std::string path;
  std::string source;
  std::shared_ptr<const TokenStream> tokens;
  std::shared_ptr<const Node> root;
  bool degenerate = false;  // non-empty file whose top level is all opaque

  const Token& token(std::uint32_t i) const { return tokens->tokens[i]; }
  /// Lexemes of [first,last) joined by single spaces (no trivia).
  std::string token_text(const Node& n) const;
  /// Exact source bytes of the node, interior trivia included.
  std::string source_text(const Node& n) const;
  std::size_t begin_offset(const Node& n) const;
  std::size_t end_offset(const Node& n) const;
  Position start(const Node& n) const;
  Position end(const Node& n) const;
  std::vector<const Node*> functions() const;
};

AstUnit parse_unit(std::string source, const std::string& path = "<input>");
std::string print_unit(const AstUnit& unit);

/// Parse a standalone expression or statement sequence (used for pattern
/// terms). Returns nullptr-equivalent (empty optional-like) on failure.
struct Fragment {
  std::shared_ptr<const TokenStream> tokens;
  std::vector<Node> nodes;  // one expression, or one node per statement
  bool is_expression = false;
};
bool parse_expression_fragment(std::string_view text, Fragment& out);
bool parse_statement_fragment(std::string_view text, Fragment& out);
/// Parameter text such as "T *param".
bool parse_param_fragment(std::string_view text, Fragment& out);

/// Canonical structural rendering: node types, labels and shape; parentheses
/// and layout are invisible. Two nodes are structurally equal iff their
/// canonical strings are equal.
std::string canon(const Node& n);

/// Visit every node in preorder.
template <class F>
void walk(const Node& n, F&& f) {
  f(n);
  for (const auto& c : n.children) walk(c, f);
}

std::size_t node_count(const Node& n);

}  // namespace genpatch
