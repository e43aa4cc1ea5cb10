#include <algorithm>
#include <deque>

#include "match_internal.hpp"

namespace genpatch {

namespace {

using detail::GapKind;
using detail::RuleContext;

class FunctionMatcher {
 public:
  FunctionMatcher(const RuleContext& ctx, const Node& fn, const Cfg& cfg)
      : ctx_(ctx), fn_(fn), cfg_(cfg), n_(static_cast<int>(cfg.size())) {
    reach_.assign(n_, std::vector<char>(n_, 0));
    auto order = cfg_.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int u = *it;
      for (int v : cfg_.dag_succ[u]) {
        reach_[u][v] = 1;
        for (int w = 0; w < n_; ++w)
          if (reach_[v][w]) reach_[u][w] = 1;
      }
    }
  }

  void run(std::vector<MatchSite>& out) {
    for (auto& hb : ctx_.header_bindings(fn_)) {
      std::vector<Anchor> anchors;
      dfs(0, Cfg::kEntry, hb, anchors, out);
    }
  }

 private:
  void dfs(std::size_t i, int prev, const Binding& b, std::vector<Anchor>& anchors,
           std::vector<MatchSite>& out) {
    if (i == ctx_.atom_count()) {
      finish(b, anchors, out);
      return;
    }
    const auto& gap = ctx_.gap(i);
    for (int v = 2; v < n_; ++v) {
      bool cand = false;
      switch (gap.kind) {
        case GapKind::Float: cand = true; break;
        case GapKind::Adjacent: cand = has_edge(prev, v); break;
        case GapKind::Dots: cand = reach_[prev][v] != 0; break;
      }
      if (!cand) continue;
      int branch = 0;
      for (auto& m : ctx_.atom_matches(i, cfg_, v, b, branch)) {
        anchors.push_back({v, m.first, m.last, branch});
        dfs(i + 1, v, m.binding, anchors, out);
        anchors.pop_back();
      }
    }
  }

  bool has_edge(int u, int v) const {
    const auto& s = cfg_.dag_succ[u];
    return std::find(s.begin(), s.end(), v) != s.end();
  }

  // Path from `from` to `to` whose interior satisfies gap g; empty if none.
  std::vector<int> segment_path(std::size_t g, int from, int to, const Binding& b) const {
    std::vector<int> parent(n_, -1);
    std::deque<int> q{from};
    parent[from] = from;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : cfg_.dag_succ[u]) {
        if (parent[v] != -1) continue;
        if (v == to) {
          parent[v] = u;
          std::vector<int> path{to};
          for (int w = u; w != from; w = parent[w]) path.push_back(w);
          path.push_back(from);
          std::reverse(path.begin(), path.end());
          return path;
        }
        if (!reach_[v][to] || !ctx_.gap_ok(g, cfg_, v, b)) continue;
        parent[v] = u;
        q.push_back(v);
      }
    }
    return {};
  }

  bool postdominates(int u, int v) const {
    if (v == Cfg::kExit) return true;
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{u};
    seen[u] = 1;
    while (!stack.empty()) {
      int w = stack.back();
      stack.pop_back();
      if (w == Cfg::kExit) return false;
      for (int x : cfg_.dag_succ[w])
        if (x != v && !seen[x]) {
          seen[x] = 1;
          stack.push_back(x);
        }
    }
    return true;
  }

  void finish(const Binding& b, const std::vector<Anchor>& anchors, std::vector<MatchSite>& out) {
    const std::size_t k = anchors.size();
    const bool forall = ctx_.rule().quantifier == Quantifier::Forall;
    std::vector<int> witness{Cfg::kEntry};
    for (std::size_t g = 0; g <= k; ++g) {
      int from = g == 0 ? Cfg::kEntry : anchors[g - 1].cfg_node;
      int to = g == k ? Cfg::kExit : anchors[g].cfg_node;
      const auto& gap = ctx_.gap(g);
      std::vector<int> seg;
      if (gap.kind == GapKind::Adjacent) {
        if (!has_edge(from, to)) return;
        seg = {from, to};
      } else {
        seg = segment_path(g, from, to, b);
        if (seg.empty()) return;
      }
      if (forall && gap.kind != GapKind::Float) {
        for (int w = 2; w < n_; ++w) {
          if (w == from || w == to || !reach_[from][w] || !reach_[w][to]) continue;
          if (gap.kind == GapKind::Adjacent || !ctx_.gap_ok(g, cfg_, w, b)) return;
        }
        if (g > 0 && g < k && !postdominates(from, to)) return;
      }
      witness.insert(witness.end(), seg.begin() + 1, seg.end());
    }
    out.push_back(detail::make_site(ctx_, fn_, anchors, b, std::move(witness)));
  }

  const RuleContext& ctx_;
  const Node& fn_;
  const Cfg& cfg_;
  int n_;
  std::vector<std::vector<char>> reach_;
};

}  // namespace

std::vector<MatchSite> match_rule(const GenericPatchRule& rule, const AstUnit& unit) {
  RuleContext ctx(rule, unit);
  std::vector<MatchSite> sites;
  for (auto& [fn, cfg] : detail::function_cfgs(unit)) FunctionMatcher(ctx, *fn, cfg).run(sites);
  return resolve_overlaps(std::move(sites));
}

}  // namespace genpatch
