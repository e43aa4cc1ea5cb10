#include "genpatch/edit_script.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "genpatch/common.hpp"

namespace genpatch {

namespace {

struct Tree {
  std::vector<const Node*> pre;
  std::vector<int> parent;
  std::vector<std::vector<int>> kids;
  std::vector<std::string> canon;
  std::vector<int> size;
  std::unordered_map<const Node*, int> index;

  explicit Tree(const Node& root) { add(root, -1); }

  int add(const Node& n, int par) {
    int id = static_cast<int>(pre.size());
    pre.push_back(&n);
    parent.push_back(par);
    kids.emplace_back();
    canon.emplace_back();
    size.push_back(1);
    index[&n] = id;
    for (const auto& c : n.children) {
      int cid = add(c, id);
      kids[id].push_back(cid);
      size[id] += size[cid];
    }
    canon[id] = genpatch::canon(n);
    return id;
  }
};

std::string node_key(const Node& n) { return std::string(node_type_name(n.type)) + "[" + n.label + "]"; }

class Differ {
 public:
  Differ(const AstUnit& bu, const Node& b, const AstUnit& au, const Node& a)
      : bu_(bu), au_(au), B_(b), A_(a) {
    mb_.assign(B_.pre.size(), -1);
    ma_.assign(A_.pre.size(), -1);
    moved_.assign(B_.pre.size(), 0);
  }

  std::vector<EditAction> run() {
    exact_unique();
    if (mb_[0] == -1 && ma_[0] == -1) link(0, 0);
    top_down(0, mb_[0]);
    mark_reordered();
    return actions();
  }

 private:
  void link(int b, int a) {
    mb_[b] = a;
    ma_[a] = b;
  }

  void link_subtree(int b, int a) {
    link(b, a);
    for (std::size_t i = 0; i < B_.kids[b].size(); ++i) link_subtree(B_.kids[b][i], A_.kids[a][i]);
  }

  // Identical subtrees of at least two nodes that occur once on each side.
  void exact_unique() {
    std::unordered_map<std::string, std::vector<int>> in_b, in_a;
    for (std::size_t i = 0; i < B_.pre.size(); ++i)
      if (B_.size[i] >= 2) in_b[B_.canon[i]].push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < A_.pre.size(); ++i)
      if (A_.size[i] >= 2) in_a[A_.canon[i]].push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < B_.pre.size(); ++i) {
      if (mb_[i] != -1 || B_.size[i] < 2) continue;
      const auto& bs = in_b[B_.canon[i]];
      auto it = in_a.find(B_.canon[i]);
      if (bs.size() != 1 || it == in_a.end() || it->second.size() != 1) continue;
      int a = it->second.front();
      if (ma_[a] != -1) continue;
      link_subtree(static_cast<int>(i), a);
    }
  }

  double similarity(int b, int a) const {
    if (B_.size[b] == 1 && A_.size[a] == 1) return 1.0;
    if (B_.size[b] == 1 || A_.size[a] == 1) return 0.0;
    std::map<std::string, int> bag;
    for (int i = b + 1; i < b + B_.size[b]; ++i) ++bag[node_key(*B_.pre[i])];
    int common = 0;
    for (int i = a + 1; i < a + A_.size[a]; ++i) {
      auto it = bag.find(node_key(*A_.pre[i]));
      if (it != bag.end() && it->second > 0) {
        --it->second;
        ++common;
      }
    }
    return 2.0 * common / ((B_.size[b] - 1) + (A_.size[a] - 1));
  }

  void top_down(int b, int a) {
    const auto& cb = B_.kids[b];
    const auto& ca = A_.kids[a];
    // Identical unmatched children, order preserving.
    std::vector<int> ub, ua;
    for (int c : cb)
      if (mb_[c] == -1) ub.push_back(c);
    for (int c : ca)
      if (ma_[c] == -1) ua.push_back(c);
    std::vector<std::vector<int>> lcs(ub.size() + 1, std::vector<int>(ua.size() + 1, 0));
    for (std::size_t i = ub.size(); i-- > 0;)
      for (std::size_t j = ua.size(); j-- > 0;)
        lcs[i][j] = B_.canon[ub[i]] == A_.canon[ua[j]]
                        ? lcs[i + 1][j + 1] + 1
                        : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    for (std::size_t i = 0, j = 0; i < ub.size() && j < ua.size();) {
      if (B_.canon[ub[i]] == A_.canon[ua[j]]) {
        link_subtree(ub[i], ua[j]);
        ++i;
        ++j;
      } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
        ++i;
      } else {
        ++j;
      }
    }
    // Similar containers and same-type leaves, between already matched neighbours.
    auto pos_in_a = [&](int bc) -> int {
      int m = mb_[bc];
      if (m == -1 || A_.parent[m] != a) return -1;
      return static_cast<int>(std::find(ca.begin(), ca.end(), m) - ca.begin());
    };
    for (std::size_t i = 0; i < cb.size(); ++i) {
      if (mb_[cb[i]] != -1) continue;
      int floor = -1;
      for (std::size_t k = 0; k < i; ++k) floor = std::max(floor, pos_in_a(cb[k]));
      int ceil = static_cast<int>(ca.size());
      for (std::size_t k = i + 1; k < cb.size(); ++k) {
        int p = pos_in_a(cb[k]);
        if (p > floor) {
          ceil = p;
          break;
        }
      }
      for (int j = floor + 1; j < ceil; ++j) {
        int ac = ca[j];
        if (ma_[ac] != -1 || B_.pre[cb[i]]->type != A_.pre[ac]->type) continue;
        if (similarity(cb[i], ac) < 0.5) continue;
        link(cb[i], ac);
        break;
      }
    }
    for (int c : cb)
      if (mb_[c] != -1 && A_.parent[mb_[c]] == a) top_down(c, mb_[c]);
  }

  // Matched siblings whose relative order changed count as moves.
  void mark_reordered() {
    for (std::size_t b = 0; b < B_.pre.size(); ++b) {
      if (mb_[b] == -1) continue;
      int a = mb_[b];
      std::vector<int> seq, who;
      for (int c : B_.kids[b]) {
        int m = mb_[c];
        if (m == -1 || A_.parent[m] != a) continue;
        const auto& ca = A_.kids[a];
        seq.push_back(static_cast<int>(std::find(ca.begin(), ca.end(), m) - ca.begin()));
        who.push_back(c);
      }
      // Longest increasing subsequence; the rest moved.
      std::vector<int> len(seq.size(), 1), prev(seq.size(), -1);
      int best = -1;
      for (std::size_t i = 0; i < seq.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
          if (seq[j] < seq[i] && len[j] + 1 > len[i]) {
            len[i] = len[j] + 1;
            prev[i] = static_cast<int>(j);
          }
        if (best == -1 || len[i] > len[best]) best = static_cast<int>(i);
      }
      std::vector<char> keep(seq.size(), 0);
      for (int i = best; i != -1; i = prev[i]) keep[i] = 1;
      for (std::size_t i = 0; i < seq.size(); ++i)
        if (!keep[i]) moved_[who[i]] = 1;
    }
  }

  struct Pending {
    EditAction act;
    int anchor = 0;  // before-tree preorder index
    int group = 0;   // 0 MOV, 1 UPD/DEL, 2 INS
    int order = 0;   // after-tree preorder for INS
    bool ins = false;
  };

  std::vector<EditAction> actions() {
    std::vector<Pending> out;
    auto child_index = [&](int a) {
      const auto& sib = A_.kids[A_.parent[a]];
      return static_cast<int>(std::find(sib.begin(), sib.end(), a) - sib.begin());
    };
    for (std::size_t i = 0; i < B_.pre.size(); ++i) {
      const Node& bn = *B_.pre[i];
      int par = B_.parent[i];
      if (mb_[i] == -1) {
        if (par == -1 || mb_[par] != -1) {
          Pending p;
          p.act.kind = ActionKind::DEL;
          p.act.src_type = bn.type;
          p.act.src_tokens = bu_.token_text(bn);
          p.act.before = &bn;
          p.anchor = static_cast<int>(i);
          p.group = 1;
          out.push_back(std::move(p));
        }
        continue;
      }
      int a = mb_[i];
      const Node& an = *A_.pre[a];
      if (par != -1) {
        int apar = A_.parent[a];
        bool moved = apar == -1 || mb_[par] != apar || moved_[i];
        if (moved && apar != -1) {
          Pending p;
          p.act.kind = ActionKind::MOV;
          p.act.src_type = bn.type;
          p.act.src_tokens = bu_.token_text(bn);
          p.act.tgt_type = A_.pre[apar]->type;
          p.act.tgt_tokens = au_.token_text(*A_.pre[apar]);
          p.act.before = &bn;
          p.act.after = &an;
          p.act.host = ma_[apar] == -1 ? nullptr : B_.pre[ma_[apar]];
          p.act.index = child_index(a);
          p.anchor = static_cast<int>(i);
          p.group = 0;
          out.push_back(std::move(p));
        }
      }
      if (bn.label != an.label) {
        Pending p;
        p.act.kind = ActionKind::UPD;
        p.act.src_type = bn.type;
        p.act.src_tokens = bu_.token_text(bn);
        p.act.tgt_tokens = au_.token_text(an);
        p.act.before = &bn;
        p.act.after = &an;
        p.anchor = static_cast<int>(i);
        p.group = 1;
        out.push_back(std::move(p));
      }
    }
    for (std::size_t j = 1; j < A_.pre.size(); ++j) {
      if (ma_[j] != -1) continue;
      int apar = A_.parent[j];
      if (ma_[apar] == -1) continue;
      Pending p;
      p.act.kind = ActionKind::INS;
      p.act.src_type = A_.pre[j]->type;
      p.act.src_tokens = au_.token_text(*A_.pre[j]);
      p.act.tgt_type = A_.pre[apar]->type;
      p.act.tgt_tokens = au_.token_text(*A_.pre[apar]);
      p.act.after = A_.pre[j];
      p.act.host = B_.pre[ma_[apar]];
      p.act.index = child_index(static_cast<int>(j));
      p.anchor = ma_[apar];
      p.group = 2;
      p.order = static_cast<int>(j);
      p.ins = true;
      out.push_back(std::move(p));
    }
    std::stable_sort(out.begin(), out.end(), [](const Pending& x, const Pending& y) {
      if (x.anchor != y.anchor) return x.anchor < y.anchor;
      if (x.group != y.group) return x.group < y.group;
      return x.order < y.order;
    });
    // Depth: nearest enclosing action in the before tree.
    std::vector<int> depth_at(B_.pre.size(), -1);
    std::vector<EditAction> result;
    for (auto& p : out) {
      int d = 0;
      int start = p.ins ? p.anchor : B_.parent[p.anchor];
      for (int n = start; n != -1; n = B_.parent[n])
        if (depth_at[n] != -1) {
          d = depth_at[n] + 1;
          break;
        }
      p.act.depth = d;
      if (!p.ins && depth_at[p.anchor] == -1) depth_at[p.anchor] = d;
      result.push_back(std::move(p.act));
    }
    return result;
  }

  const AstUnit& bu_;
  const AstUnit& au_;
  Tree B_;
  Tree A_;
  std::vector<int> mb_, ma_;
  std::vector<char> moved_;
};

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\\') out += "\\\\";
    else if (c == '@') out += "\\@";
    else if (c == '\n') out += "\\n";
    else out += c;
  }
  return out;
}

std::string unescape(std::string_view s, int line) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      if (s[i] == '@') throw Error("syntax", "script line " + std::to_string(line) + ": stray '@'");
      out += s[i];
      continue;
    }
    if (++i >= s.size()) throw Error("syntax", "script line " + std::to_string(line) + ": dangling escape");
    out += s[i] == 'n' ? '\n' : s[i];
  }
  return out;
}

std::string render(const std::vector<EditAction>& actions, bool elide) {
  if (actions.empty()) throw Error("validation", "empty edit script");
  auto toks = [&](const std::string& t) {
    if (elide) return std::string(" _");
    return t.empty() ? std::string() : " " + escape(t);
  };
  std::string out;
  for (const auto& a : actions) {
    for (int d = 0; d < a.depth; ++d) out += "---";
    out += action_kind_name(a.kind);
    out += ' ';
    out += node_type_name(a.src_type);
    out += " @@" + toks(a.src_tokens);
    if (a.kind == ActionKind::MOV || a.kind == ActionKind::INS) {
      out += " @TO@ ";
      out += node_type_name(a.tgt_type.value_or(NodeType::OpaqueStmt));
      out += " @@" + toks(a.tgt_tokens.value_or(""));
    } else if (a.kind == ActionKind::UPD) {
      out += " @TO@" + toks(a.tgt_tokens.value_or(""));
    }
    out += " @AT@\n";
  }
  return out;
}

}  // namespace

std::string_view action_kind_name(ActionKind k) {
  switch (k) {
    case ActionKind::MOV: return "MOV";
    case ActionKind::DEL: return "DEL";
    case ActionKind::INS: return "INS";
    case ActionKind::UPD: return "UPD";
  }
  return "";
}

std::vector<EditAction> diff_trees(const AstUnit& before_unit, const Node& before,
                                   const AstUnit& after_unit, const Node& after) {
  return Differ(before_unit, before, after_unit, after).run();
}

Node replay(const Node& before, const std::vector<EditAction>& actions) {
  std::unordered_map<const Node*, const Node*> updated;
  std::unordered_map<const Node*, char> gone;
  std::unordered_map<const Node*, std::vector<const EditAction*>> arrivals;
  for (const auto& a : actions) {
    switch (a.kind) {
      case ActionKind::DEL: gone[a.before] = 1; break;
      case ActionKind::UPD: updated[a.before] = a.after; break;
      case ActionKind::MOV:
        gone[a.before] = 1;
        if (a.host) arrivals[a.host].push_back(&a);
        break;
      case ActionKind::INS: arrivals[a.host].push_back(&a); break;
    }
  }
  auto build = [&](auto&& self, const Node& b) -> Node {
    Node n;
    n.type = b.type;
    auto u = updated.find(&b);
    n.label = u != updated.end() ? u->second->label : b.label;
    for (const auto& c : b.children)
      if (!gone.count(&c)) n.children.push_back(self(self, c));
    auto it = arrivals.find(&b);
    if (it != arrivals.end()) {
      auto list = it->second;
      std::stable_sort(list.begin(), list.end(),
                       [](const EditAction* x, const EditAction* y) { return x->index < y->index; });
      for (const EditAction* a : list) {
        Node child;
        if (a->kind == ActionKind::INS) child = *a->after;
        else child = self(self, *a->before);
        auto at = std::min<std::size_t>(static_cast<std::size_t>(a->index), n.children.size());
        n.children.insert(n.children.begin() + static_cast<long>(at), std::move(child));
      }
    }
    return n;
  };
  return build(build, before);
}

std::string serialize_script(const std::vector<EditAction>& actions) { return render(actions, false); }

std::string shape_key(const std::vector<EditAction>& actions) { return render(actions, true); }

std::vector<EditAction> parse_script(const std::string& text) {
  std::vector<EditAction> out;
  int line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    if (raw.empty()) continue;
    auto bad = [&](const std::string& why) {
      return Error("syntax", "script line " + std::to_string(line_no) + ": " + why);
    };
    std::string_view s = raw;
    EditAction a;
    while (starts_with(s, "---")) {
      ++a.depth;
      s.remove_prefix(3);
    }
    if (s.size() < 4 || s[3] != ' ') throw bad("missing action kind");
    std::string_view kind = s.substr(0, 3);
    if (kind == "MOV") a.kind = ActionKind::MOV;
    else if (kind == "DEL") a.kind = ActionKind::DEL;
    else if (kind == "INS") a.kind = ActionKind::INS;
    else if (kind == "UPD") a.kind = ActionKind::UPD;
    else throw bad("unknown action '" + std::string(kind) + "'");
    s.remove_prefix(4);
    auto read_type = [&](NodeType& t) {
      auto sp = s.find(" @@");
      if (sp == std::string_view::npos || !node_type_from_name(s.substr(0, sp), t))
        throw bad("bad node type");
      s.remove_prefix(sp + 3);
    };
    auto read_tokens = [&]() {
      auto to = s.find(" @TO@");
      auto at = s.find(" @AT@");
      auto f = std::min(to, at);
      if (f == std::string_view::npos) throw bad("missing @AT@");
      std::string t = f == 0 ? std::string() : unescape(s.substr(1, f - 1), line_no);
      if (f != 0 && s[0] != ' ') throw bad("bad token field");
      s.remove_prefix(f);
      return t;
    };
    read_type(a.src_type);
    a.src_tokens = read_tokens();
    if (a.kind != ActionKind::DEL) {
      if (!starts_with(s, " @TO@")) throw bad("missing @TO@");
      s.remove_prefix(5);
      if (a.kind == ActionKind::UPD) {
        a.tgt_tokens = read_tokens();
      } else {
        if (s.empty() || s[0] != ' ') throw bad("missing target type");
        s.remove_prefix(1);
        NodeType t;
        read_type(t);
        a.tgt_type = t;
        a.tgt_tokens = read_tokens();
      }
    }
    if (s != " @AT@") throw bad("trailing text after @AT@");
    if (a.depth > (out.empty() ? 0 : out.back().depth + 1)) throw bad("depth jumps");
    out.push_back(std::move(a));
  }
  if (out.empty()) throw Error("syntax", "empty edit script");
  return out;
}

}  // namespace genpatch
