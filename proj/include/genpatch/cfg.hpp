#pragma once

#include <cstddef>
#include <vector>

#include "genpatch/lang.hpp"

namespace genpatch {

enum class CfgNodeKind { Entry, Exit, Stmt, Cond, Step };
enum class EdgeLabel { Seq, True, False };

/// A statement, a condition atom, or a for-loop step. Conditions are split
/// at `&&`/`||` so each atom is its own node with one true and one false edge.
struct CfgNode {
  CfgNodeKind kind = CfgNodeKind::Stmt;
  const Node* ast = nullptr;        // statement, condition atom or step expression
  const Node* owner = nullptr;      // If/While/For statement for Cond/Step/for-init
  const Node* cond_root = nullptr;  // whole condition expression (Cond only)
  bool chain_head = false;          // first atom evaluated for its condition
};

struct CfgEdge {
  int from = 0;
  int to = 0;
  EdgeLabel label = EdgeLabel::Seq;
  bool back = false;  // enters a loop header from inside that loop
};

/// Per-function control-flow graph. Node 0 is Entry, node 1 is Exit; every
/// other node is reachable from Entry.
///
/// Matching works on the acyclic view (`dag_succ`): each back edge is
/// redirected to the exit of the loop it closes, so a loop body is traversed
/// at most once per path and every path is finite.
struct Cfg {
  const Node* function = nullptr;
  std::vector<CfgNode> nodes;
  std::vector<CfgEdge> edges;
  std::vector<std::vector<int>> succ;
  std::vector<std::vector<int>> dag_succ;
  std::vector<std::vector<int>> dag_pred;

  static constexpr int kEntry = 0;
  static constexpr int kExit = 1;

  std::size_t size() const { return nodes.size(); }
  /// Topological order of the acyclic view, Entry first.
  std::vector<int> topo_order() const;
  /// Every Entry-to-Exit path of the acyclic view, up to `limit` paths.
  /// Sets `truncated` when the limit was hit.
  std::vector<std::vector<int>> paths(std::size_t limit, bool* truncated = nullptr) const;
  std::size_t back_edge_count() const;
};

Cfg build_cfg(const Node& function_def);

}  // namespace genpatch
