#pragma once

// Generic patches: a subset of the Coccinelle semantic-patch language.
// See docs/pattern-grammar.md for the accepted syntax.

#include <optional>
#include <string>
#include <vector>

#include "genpatch/lang.hpp"

namespace genpatch {

enum class MetavarKind { Type, Identifier, Expression, Statement, Constant, Parameter, Position };
std::string_view metavar_kind_name(MetavarKind k);
bool metavar_kind_from_name(std::string_view s, MetavarKind& out);

struct MetavarDecl {
  std::string name;
  MetavarKind kind = MetavarKind::Expression;
  int line = 0;
};

/// `@p` placed after a token of a term: binds p to that token's position.
struct PositionAnnotation {
  std::size_t offset = 0;  // byte offset in Term::text where "@name" is inserted
  std::string name;
  std::uint32_t token = 0;  // index of the annotated token in the term fragment
};

/// A MiniC statement or expression template. Leaves named after a declared
/// metavariable stand for that metavariable.
struct Term {
  std::string text;  // annotations removed; lines keep relative indentation
  std::vector<PositionAnnotation> positions;
  Fragment fragment;  // exactly one node
  bool is_expression = false;

  const Node& node() const { return fragment.nodes.front(); }
  /// text with the `@name` annotations re-inserted
  std::string annotated() const;
};

struct WhenClause {
  enum class Kind { NotMatch, Any };
  Kind kind = Kind::NotMatch;
  Term term;                        // NotMatch only
  std::vector<std::string> fresh;   // undeclared identifiers, matched as fresh expressions
  int line = 0;
};

enum class ElemKind { Context, Minus, Plus, Dots, Disjunction };

struct PatternElem {
  ElemKind kind = ElemKind::Context;
  Term term;                                       // Context, Minus
  std::vector<std::string> plus_lines;             // Plus, relative indentation kept
  std::vector<WhenClause> whens;                   // Dots
  std::vector<std::vector<PatternElem>> branches;  // Disjunction
  int line = 0;
  int column = 1;

  bool is_any() const;  // Dots carrying `when any`
};

/// `fn(..., T *param, ...)` on the first body line, closed by `}`.
struct HeaderTemplate {
  struct Slot {
    bool dots = false;
    std::string text;
    Fragment param;  // Param node when !dots
  };
  std::string return_type;  // optional, kept as text ("" when absent)
  Fragment return_fragment;
  std::string name;
  std::vector<Slot> params;
  int line = 0;
};

enum class Quantifier { Forall, Exists };

struct Frequency {
  long hunk = 0;
  long function = 0;
  long file = 0;
  long patch = 0;
  long project = 0;
  bool operator==(const Frequency&) const = default;
};

struct Provenance {
  std::string project;
  std::string commit;
  std::string file;
  std::string function;
  std::string hunk_id;
  bool operator==(const Provenance&) const = default;
};

struct GenericPatchRule {
  std::string name;
  Quantifier quantifier = Quantifier::Forall;
  std::vector<MetavarDecl> metavars;
  std::optional<HeaderTemplate> header;
  std::vector<PatternElem> body;
  int line = 0;

  // Inference bookkeeping, not part of the rule text.
  std::vector<Provenance> provenance;
  double recall = 0.0;
  double precision = 0.0;

  const MetavarDecl* find_metavar(std::string_view name) const;
};

struct GenericPatch {
  std::string id;
  std::vector<GenericPatchRule> rules;
  std::vector<Provenance> provenance;
  double recall = 0.0;
  double precision = 0.0;
  Frequency frequency;

  bool atomic() const { return rules.size() == 1; }
};

struct Issue {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
  std::string rule;
  int line = 0;
};

/// Throws Error("syntax" | "unsupported" | "validation") with a line number.
/// Warnings are not fatal; fetch them with validate().
GenericPatch parse_generic_patch(const std::string& text, const std::string& id = "");
std::string render_generic_patch(const GenericPatch& gp);
std::string render_rule(const GenericPatchRule& rule);
std::vector<Issue> validate(const GenericPatch& gp);

/// Deterministic dump of the model (not the text). Two rules are structurally
/// equal iff their signatures are equal.
std::string signature(const GenericPatchRule& rule);
std::string signature(const GenericPatch& gp);

/// Signature after renaming metavariables to their order of first use, so
/// rules that differ only by metavariable names compare equal.
std::string alpha_signature(const GenericPatchRule& rule);

/// Build a Term from source text; returns false if it is neither a single
/// statement nor an expression.
bool make_term(const std::string& text, Term& out);

}  // namespace genpatch
