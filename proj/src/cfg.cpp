#include "genpatch/cfg.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "genpatch/common.hpp"

namespace genpatch {

namespace {

constexpr int kPending = -2;

struct Loop {
  int head = -1;
  int exit = -1;
  int continue_target = -1;
  int region_lo = 0;  // node ids allocated while building this loop
  int region_hi = 0;
  std::vector<int> region_ids;  // after pruning
};

class Builder {
 public:
  Cfg run(const Node& fn) {
    if (fn.type != NodeType::FunctionDef)
      throw Error("cfg", "build_cfg expects a FunctionDef");
    cfg_.function = &fn;
    add_node({CfgNodeKind::Entry});
    add_node({CfgNodeKind::Exit});
    int first = build(fn.children.back(), Cfg::kExit);
    add_edge(Cfg::kEntry, first, EdgeLabel::Seq);
    mark_back_edges();
    prune();
    derive();
    return std::move(cfg_);
  }

 private:
  int add_node(CfgNode n) {
    cfg_.nodes.push_back(n);
    return static_cast<int>(cfg_.nodes.size()) - 1;
  }
  void add_edge(int from, int to, EdgeLabel label) { cfg_.edges.push_back({from, to, label}); }

  int simple(const Node& s, int next, const Node* owner = nullptr) {
    int id = add_node({CfgNodeKind::Stmt, &s, owner});
    add_edge(id, next, EdgeLabel::Seq);
    return id;
  }

  int chain(const Node& e, int on_true, int on_false, const Node& owner, const Node& root) {
    if (e.type == NodeType::BinaryExpr && (e.label == "&&" || e.label == "||")) {
      int right = chain(e.children[1], on_true, on_false, owner, root);
      if (e.label == "&&") return chain(e.children[0], right, on_false, owner, root);
      return chain(e.children[0], on_true, right, owner, root);
    }
    int id = add_node({CfgNodeKind::Cond, &e, &owner, &root});
    add_edge(id, on_true, EdgeLabel::True);
    add_edge(id, on_false, EdgeLabel::False);
    return id;
  }

  int condition(const Node& e, int on_true, int on_false, const Node& owner) {
    int head = chain(e, on_true, on_false, owner, e);
    cfg_.nodes[head].chain_head = true;
    return head;
  }

  void resolve_pending(int target, std::size_t from_edge) {
    for (std::size_t i = from_edge; i < cfg_.edges.size(); ++i)
      if (cfg_.edges[i].to == kPending) cfg_.edges[i].to = target;
  }

  int build(const Node& s, int next) {
    switch (s.type) {
      case NodeType::CompoundStmt: {
        for (auto it = s.children.rbegin(); it != s.children.rend(); ++it)
          next = build(*it, next);
        return next;
      }
      case NodeType::IfStmt: {
        int then_entry = build(s.children[1], next);
        int else_entry = s.children.size() > 2 ? build(s.children[2], next) : next;
        return condition(s.children[0], then_entry, else_entry, s);
      }
      case NodeType::WhileStmt: {
        Loop loop;
        loop.exit = next;
        loop.region_lo = static_cast<int>(cfg_.nodes.size());
        std::size_t edge_mark = cfg_.edges.size();
        loop.head = condition(s.children[0], kPending, next, s);
        loop.continue_target = loop.head;
        loops_.push_back(loop);
        int body = build(s.children[1], loop.head);
        loops_.pop_back();
        resolve_pending(body, edge_mark);
        loop.region_hi = static_cast<int>(cfg_.nodes.size());
        finished_.push_back(loop);
        return loop.head;
      }
      case NodeType::ForStmt: {
        Loop loop;
        loop.exit = next;
        loop.region_lo = static_cast<int>(cfg_.nodes.size());
        std::size_t edge_mark = cfg_.edges.size();
        loop.head = condition(s.children[1], kPending, next, s);
        int step = add_node({CfgNodeKind::Step, &s.children[2], &s});
        add_edge(step, loop.head, EdgeLabel::Seq);
        loop.continue_target = step;
        loops_.push_back(loop);
        int body = build(s.children[3], step);
        loops_.pop_back();
        resolve_pending(body, edge_mark);
        loop.region_hi = static_cast<int>(cfg_.nodes.size());
        finished_.push_back(loop);
        return simple(s.children[0], loop.head, &s);
      }
      case NodeType::ReturnStmt:
        return simple(s, Cfg::kExit);
      case NodeType::BreakStmt:
        return simple(s, loops_.empty() ? next : loops_.back().exit);
      case NodeType::ContinueStmt:
        return simple(s, loops_.empty() ? next : loops_.back().continue_target);
      default:
        return simple(s, next);
    }
  }

  const Loop* loop_with_head(int head) const {
    for (const auto& l : finished_)
      if (l.head == head) return &l;
    return nullptr;
  }
  static bool in_region(const Loop& l, int id) { return id >= l.region_lo && id < l.region_hi; }

  void mark_back_edges() {
    for (auto& e : cfg_.edges) {
      const Loop* l = loop_with_head(e.to);
      if (l && in_region(*l, e.from)) e.back = true;
    }
  }

  void prune() {
    const int n = static_cast<int>(cfg_.nodes.size());
    std::vector<std::vector<int>> out(n);
    for (const auto& e : cfg_.edges) out[e.from].push_back(e.to);
    std::vector<char> seen(n, 0);
    std::vector<int> stack{Cfg::kEntry};
    seen[Cfg::kEntry] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : out[u])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
    seen[Cfg::kExit] = 1;
    std::vector<int> remap(n, -1);
    std::vector<CfgNode> kept;
    for (int i = 0; i < n; ++i)
      if (seen[i]) {
        remap[i] = static_cast<int>(kept.size());
        kept.push_back(cfg_.nodes[i]);
      }
    std::vector<CfgEdge> edges;
    for (auto e : cfg_.edges)
      if (seen[e.from]) {
        e.from = remap[e.from];
        e.to = remap[e.to];
        edges.push_back(e);
      }
    // Loop bookkeeping follows the renumbering; heads of dead loops vanish.
    std::vector<Loop> loops;
    for (auto l : finished_) {
      if (l.head < 0 || !seen[l.head]) continue;
      Loop r = l;
      r.head = remap[l.head];
      r.exit = remap[l.exit];
      r.region_ids.clear();
      for (int id = l.region_lo; id < l.region_hi; ++id)
        if (seen[id]) r.region_ids.push_back(remap[id]);
      loops.push_back(r);
    }
    cfg_.nodes = std::move(kept);
    cfg_.edges = std::move(edges);
    kept_loops_ = std::move(loops);
  }

  bool in_kept_region(const Loop& l, int id) const {
    return std::find(l.region_ids.begin(), l.region_ids.end(), id) != l.region_ids.end();
  }

  void derive() {
    const auto n = cfg_.nodes.size();
    cfg_.succ.assign(n, {});
    cfg_.dag_succ.assign(n, {});
    cfg_.dag_pred.assign(n, {});
    auto push_unique = [](std::vector<int>& v, int x) {
      if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
    };
    for (const auto& e : cfg_.edges) {
      push_unique(cfg_.succ[e.from], e.to);
      int target = e.to;
      if (e.back) {
        // Leave the loop instead; keep leaving while that lands on the head
        // of another loop that also encloses the source.
        const Loop* l = nullptr;
        for (const auto& k : kept_loops_)
          if (k.head == target) l = &k;
        while (l) {
          target = l->exit;
          const Loop* outer = nullptr;
          for (const auto& k : kept_loops_)
            if (k.head == target && in_kept_region(k, e.from)) outer = &k;
          l = outer;
        }
      }
      push_unique(cfg_.dag_succ[e.from], target);
    }
    for (std::size_t u = 0; u < n; ++u)
      for (int v : cfg_.dag_succ[u]) cfg_.dag_pred[v].push_back(static_cast<int>(u));
  }

  Cfg cfg_;
  std::vector<Loop> loops_;
  std::vector<Loop> finished_;
  std::vector<Loop> kept_loops_;
};

}  // namespace

std::vector<int> Cfg::topo_order() const {
  std::vector<int> indeg(nodes.size(), 0);
  for (const auto& s : dag_succ)
    for (int v : s) ++indeg[v];
  std::vector<int> order;
  std::vector<int> ready{kEntry};
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (indeg[i] == 0 && static_cast<int>(i) != kEntry) ready.push_back(static_cast<int>(i));
  while (!ready.empty()) {
    int u = ready.front();
    ready.erase(ready.begin());
    order.push_back(u);
    for (int v : dag_succ[u])
      if (--indeg[v] == 0) ready.push_back(v);
  }
  return order;
}

std::vector<std::vector<int>> Cfg::paths(std::size_t limit, bool* truncated) const {
  std::vector<std::vector<int>> out;
  std::vector<int> cur{kEntry};
  bool hit = false;
  auto dfs = [&](auto&& self, int u) -> void {
    if (out.size() >= limit) {
      hit = true;
      return;
    }
    if (u == kExit) {
      out.push_back(cur);
      return;
    }
    for (int v : dag_succ[u]) {
      cur.push_back(v);
      self(self, v);
      cur.pop_back();
    }
  };
  dfs(dfs, kEntry);
  if (truncated) *truncated = hit;
  return out;
}

std::size_t Cfg::back_edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [](const CfgEdge& e) { return e.back; }));
}

Cfg build_cfg(const Node& function_def) { return Builder().run(function_def); }

}  // namespace genpatch
