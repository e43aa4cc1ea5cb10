#pragma once

// Rich AST edit scripts: tree diffs in the MOV/DEL/INS/UPD notation.

#include <optional>
#include <string>
#include <vector>

#include "genpatch/lang.hpp"

namespace genpatch {

enum class ActionKind { MOV, DEL, INS, UPD };
std::string_view action_kind_name(ActionKind k);

struct EditAction {
  ActionKind kind = ActionKind::DEL;
  int depth = 0;
  NodeType src_type = NodeType::OpaqueStmt;
  std::string src_tokens;
  std::optional<NodeType> tgt_type;        // MOV, INS
  std::optional<std::string> tgt_tokens;   // MOV, INS, UPD

  // Replay data, present on actions produced by diff_trees (not serialized).
  const Node* before = nullptr;  // DEL/UPD/MOV: node in the before tree
  const Node* after = nullptr;   // INS/MOV/UPD: node in the after tree
  const Node* host = nullptr;    // INS/MOV: before-tree counterpart of the new parent
  int index = -1;                // INS/MOV: position among the new parent's children

  /// Compares the serialized fields only.
  bool operator==(const EditAction& o) const {
    return kind == o.kind && depth == o.depth && src_type == o.src_type &&
           src_tokens == o.src_tokens && tgt_type == o.tgt_type && tgt_tokens == o.tgt_tokens;
  }
};

struct RichEditScript {
  std::string hunk_id;
  std::vector<EditAction> actions;
};

/// GumTree-style diff: exact subtree matching, then top-down matching of
/// same-type containers whose descendant overlap is at least 0.5.
std::vector<EditAction> diff_trees(const AstUnit& before_unit, const Node& before,
                                   const AstUnit& after_unit, const Node& after);

/// Rebuild the after tree from `before` using the replay data of `actions`.
Node replay(const Node& before, const std::vector<EditAction>& actions);

/// One action per line. Throws Error("validation") on an empty list.
std::string serialize_script(const std::vector<EditAction>& actions);
/// Inverse of serialize_script. Throws Error("syntax").
std::vector<EditAction> parse_script(const std::string& text);

/// Serialization with every token field replaced by `_`.
std::string shape_key(const std::vector<EditAction>& actions);

}  // namespace genpatch
