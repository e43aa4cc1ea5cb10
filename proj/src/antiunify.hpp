#pragma once

// Anti-unification over aligned AST terms, one term per example.

#include <string>
#include <vector>

#include "genpatch/lang.hpp"
#include "genpatch/pattern.hpp"

namespace genpatch::detail {

struct TermRef {
  const TokenStream* tokens = nullptr;
  const Node* node = nullptr;
};

class AntiUnifier {
 public:
  struct Var {
    MetavarKind kind = MetavarKind::Expression;
    std::vector<std::string> values;  // token text per example
    std::vector<std::string> canons;
    bool all_identifiers = true;
    std::string name;
  };

  /// Generalize one aligned root term. Returns a template handle or throws
  /// Error("no-generalization"). A failed call leaves no trace.
  int add(const std::vector<TermRef>& terms);
  /// Assign metavariable names (E0, I0, C0, T0, ...) in order of first use.
  void finalize();
  std::string render(int handle) const;
  std::vector<MetavarDecl> decls() const;
  const std::vector<Var>& vars() const { return vars_; }
  /// Metavariables used by the template `handle`.
  std::vector<int> vars_of(int handle) const;

 private:
  enum class Role { Stmt, Expr, Callee, Ident, Type };
  struct TNode {
    enum Kind { Concrete, Variable, Composite } kind = Concrete;
    TermRef ref;  // first example's node
    int var = -1;
    std::vector<int> children;
  };

  int gen(const std::vector<TermRef>& terms, Role role);
  int bind(const std::vector<TermRef>& terms, MetavarKind kind);
  void render(int h, int base_col, bool first, std::string& out) const;

  std::vector<TNode> nodes_;
  std::vector<Var> vars_;
};

}  // namespace genpatch::detail
