// Reference matcher: explicit path enumeration, no reachability shortcuts.

#include <algorithm>
#include <map>

#include "genpatch/common.hpp"
#include "match_internal.hpp"

namespace genpatch {

namespace {

using detail::GapKind;
using detail::RuleContext;

struct Candidate {
  std::vector<Anchor> anchors;
  Binding binding;
  std::vector<int> path;
};

class Oracle {
 public:
  Oracle(const RuleContext& ctx, const Cfg& cfg, std::vector<std::vector<int>> paths)
      : ctx_(ctx), cfg_(cfg), paths_(std::move(paths)) {}

  std::vector<Candidate> exists_candidates(const Binding& header) {
    std::vector<Candidate> out;
    for (const auto& p : paths_) {
      std::vector<std::size_t> idx;
      std::vector<Anchor> anchors;
      embed(p, 0, 0, header, idx, anchors, out);
    }
    return out;
  }

  bool forall_holds(const Candidate& c) const {
    const std::size_t k = c.anchors.size();
    for (const auto& q : paths_) {
      auto pos = [&](int node) -> long {
        auto it = std::find(q.begin(), q.end(), node);
        return it == q.end() ? -1 : it - q.begin();
      };
      for (std::size_t g = 0; g <= k; ++g) {
        const auto& gap = ctx_.gap(g);
        if (gap.kind == GapKind::Float) continue;
        long from = g == 0 ? 0 : pos(c.anchors[g - 1].cfg_node);
        if (from < 0) continue;
        long to;
        if (g == k) {
          to = static_cast<long>(q.size()) - 1;
        } else {
          to = pos(c.anchors[g].cfg_node);
          if (g > 0 && to < 0) return false;  // a path from the anchor avoids the next one
          if (to < 0) continue;
        }
        if (to <= from) return false;
        for (long m = from + 1; m < to; ++m)
          if (gap.kind == GapKind::Adjacent || !ctx_.gap_ok(g, cfg_, q[m], c.binding))
            return false;
      }
    }
    return true;
  }

 private:
  void embed(const std::vector<int>& p, std::size_t i, std::size_t prev, const Binding& b,
             std::vector<std::size_t>& idx, std::vector<Anchor>& anchors,
             std::vector<Candidate>& out) {
    const std::size_t last = p.size() - 1;
    if (i == ctx_.atom_count()) {
      if (!gaps_hold(p, idx, b)) return;
      out.push_back({anchors, b, p});
      return;
    }
    const auto& gap = ctx_.gap(i);
    std::size_t lo = i == 0 ? 1 : prev + 1;
    std::size_t hi = last - 1;
    if (gap.kind == GapKind::Adjacent) hi = std::min(hi, lo);
    for (std::size_t q = lo; q <= hi && q < last; ++q) {
      int branch = 0;
      for (auto& m : ctx_.atom_matches(i, cfg_, p[q], b, branch)) {
        idx.push_back(q);
        anchors.push_back({p[q], m.first, m.last, branch});
        embed(p, i + 1, q, m.binding, idx, anchors, out);
        anchors.pop_back();
        idx.pop_back();
      }
    }
  }

  bool gaps_hold(const std::vector<int>& p, const std::vector<std::size_t>& idx,
                 const Binding& b) const {
    const std::size_t k = idx.size();
    for (std::size_t g = 0; g <= k; ++g) {
      std::size_t from = g == 0 ? 0 : idx[g - 1];
      std::size_t to = g == k ? p.size() - 1 : idx[g];
      const auto& gap = ctx_.gap(g);
      if (gap.kind == GapKind::Float) continue;
      if (gap.kind == GapKind::Adjacent) {
        if (to != from + 1) return false;
        continue;
      }
      for (std::size_t m = from + 1; m < to; ++m)
        if (!ctx_.gap_ok(g, cfg_, p[m], b)) return false;
    }
    return true;
  }

  const RuleContext& ctx_;
  const Cfg& cfg_;
  std::vector<std::vector<int>> paths_;
};

}  // namespace

std::vector<MatchSite> brute_force_match(const GenericPatchRule& rule, const AstUnit& unit,
                                         std::size_t max_path_length) {
  RuleContext ctx(rule, unit);
  std::vector<MatchSite> sites;
  for (auto& [fn, cfg] : detail::function_cfgs(unit)) {
    bool truncated = false;
    auto paths = cfg.paths(1000000, &truncated);
    if (truncated) throw Error("validation", "oracle bound exceeded: too many paths");
    for (const auto& p : paths)
      if (p.size() > max_path_length)
        throw Error("validation", "oracle bound exceeded: path of " + std::to_string(p.size()) +
                                      " nodes");
    Oracle oracle(ctx, cfg, std::move(paths));
    for (auto& hb : ctx.header_bindings(*fn)) {
      std::map<std::string, Candidate> unique;
      for (auto& c : oracle.exists_candidates(hb)) {
        MatchSite probe = detail::make_site(ctx, *fn, c.anchors, c.binding, {});
        unique.emplace(probe.key(), std::move(c));
      }
      for (auto& [key, c] : unique) {
        if (rule.quantifier == Quantifier::Forall && !oracle.forall_holds(c)) continue;
        sites.push_back(detail::make_site(ctx, *fn, std::move(c.anchors), std::move(c.binding),
                                          std::move(c.path)));
      }
    }
  }
  return resolve_overlaps(std::move(sites));
}

}  // namespace genpatch
