#include "genpatch/udiff.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "genpatch/common.hpp"

namespace genpatch {

namespace {

struct Lines {
  std::vector<std::string> lines;
  bool trailing_newline = true;
};

Lines to_lines(std::string_view text) {
  Lines out;
  out.lines = split_lines(text);
  out.trailing_newline = text.empty() || text.back() == '\n';
  return out;
}

std::string from_lines(const std::vector<std::string>& lines, bool trailing_newline) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out += lines[i];
    if (i + 1 < lines.size() || trailing_newline) out += '\n';
  }
  return out;
}

bool parse_range(std::string_view s, int& start, int& len) {
  // "12,3" or "12"
  auto comma = s.find(',');
  try {
    if (comma == std::string_view::npos) {
      start = std::stoi(std::string(s));
      len = 1;
    } else {
      start = std::stoi(std::string(s.substr(0, comma)));
      len = std::stoi(std::string(s.substr(comma + 1)));
    }
  } catch (const std::exception&) {
    return false;
  }
  return start >= 0 && len >= 0;
}

std::string strip_path_prefix(std::string p) {
  auto tab = p.find('\t');
  if (tab != std::string::npos) p.resize(tab);
  p = trim(p);
  if (starts_with(p, "a/") || starts_with(p, "b/")) p = p.substr(2);
  return p;
}

// Edit script over lines: 0 = keep, 1 = delete (from a), 2 = insert (from b).
struct Op {
  int kind;
  int a;
  int b;
};

std::vector<Op> line_ops(const std::vector<std::string>& a,
                         const std::vector<std::string>& b) {
  // Trim the common prefix/suffix, then LCS on the middle.
  std::size_t pre = 0;
  while (pre < a.size() && pre < b.size() && a[pre] == b[pre]) ++pre;
  std::size_t suf = 0;
  while (suf < a.size() - pre && suf < b.size() - pre &&
         a[a.size() - 1 - suf] == b[b.size() - 1 - suf])
    ++suf;
  const std::size_t n = a.size() - pre - suf;
  const std::size_t m = b.size() - pre - suf;
  std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      lcs[i][j] = a[pre + i] == b[pre + j]
                      ? lcs[i + 1][j + 1] + 1
                      : std::max(lcs[i + 1][j], lcs[i][j + 1]);
  std::vector<Op> ops;
  for (std::size_t k = 0; k < pre; ++k)
    ops.push_back({0, static_cast<int>(k), static_cast<int>(k)});
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[pre + i] == b[pre + j]) {
      ops.push_back({0, static_cast<int>(pre + i), static_cast<int>(pre + j)});
      ++i;
      ++j;
    } else if (i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1])) {
      ops.push_back({1, static_cast<int>(pre + i), static_cast<int>(pre + j)});
      ++i;
    } else {
      ops.push_back({2, static_cast<int>(pre + i), static_cast<int>(pre + j)});
      ++j;
    }
  }
  for (std::size_t k = 0; k < suf; ++k)
    ops.push_back({0, static_cast<int>(a.size() - suf + k),
                   static_cast<int>(b.size() - suf + k)});
  return ops;
}

}  // namespace

std::vector<std::string> DiffHunk::old_side() const {
  std::vector<std::string> out;
  for (const auto& l : lines)
    if (l.op != '+') out.push_back(l.text);
  return out;
}

std::vector<std::string> DiffHunk::new_side() const {
  std::vector<std::string> out;
  for (const auto& l : lines)
    if (l.op != '-') out.push_back(l.text);
  return out;
}

std::vector<FileDiff> parse_unified_diff(std::string_view text) {
  std::vector<FileDiff> files;
  auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size()) {
    const std::string& line = lines[i];
    if (starts_with(line, "--- ") && i + 1 < lines.size() &&
        starts_with(lines[i + 1], "+++ ")) {
      FileDiff fd;
      fd.old_path = strip_path_prefix(line.substr(4));
      fd.new_path = strip_path_prefix(lines[i + 1].substr(4));
      files.push_back(std::move(fd));
      i += 2;
      continue;
    }
    if (starts_with(line, "@@ ")) {
      if (files.empty()) throw Error("malformed-diff", "hunk before file header");
      auto close = line.find(" @@", 3);
      if (close == std::string::npos)
        throw Error("malformed-diff", "bad hunk header '" + line + "'");
      std::istringstream hs(line.substr(3, close - 3));
      std::string old_r, new_r;
      hs >> old_r >> new_r;
      DiffHunk h;
      if (old_r.size() < 2 || new_r.size() < 2 || old_r[0] != '-' || new_r[0] != '+' ||
          !parse_range(std::string_view(old_r).substr(1), h.old_start, h.old_len) ||
          !parse_range(std::string_view(new_r).substr(1), h.new_start, h.new_len))
        throw Error("malformed-diff", "bad hunk header '" + line + "'");
      h.section = trim(line.substr(close + 3));
      const std::string name = files.back().new_path + " hunk " +
                               std::to_string(files.back().hunks.size() + 1) +
                               " (" + line + ")";
      int old_seen = 0, new_seen = 0;
      ++i;
      while (i < lines.size() && (old_seen < h.old_len || new_seen < h.new_len)) {
        const std::string& body = lines[i];
        if (starts_with(body, "\\")) {  // "\ No newline at end of file"
          ++i;
          continue;
        }
        char op = body.empty() ? ' ' : body[0];
        if (op != ' ' && op != '-' && op != '+') break;
        h.lines.push_back({op, body.empty() ? std::string() : body.substr(1)});
        if (op != '+') ++old_seen;
        if (op != '-') ++new_seen;
        ++i;
      }
      while (i < lines.size() && starts_with(lines[i], "\\")) ++i;
      if (old_seen != h.old_len || new_seen != h.new_len)
        throw Error("malformed-diff",
                    name + ": header claims -" + std::to_string(h.old_len) + "/+" +
                        std::to_string(h.new_len) + " lines, body has -" +
                        std::to_string(old_seen) + "/+" + std::to_string(new_seen));
      files.back().hunks.push_back(std::move(h));
      continue;
    }
    ++i;  // preamble: "diff --git", "index", commit messages, ...
  }
  return files;
}

std::vector<DiffHunk> diff_hunks(std::string_view before, std::string_view after,
                                 int context) {
  auto a = to_lines(before);
  auto b = to_lines(after);
  auto ops = line_ops(a.lines, b.lines);
  std::vector<DiffHunk> hunks;
  std::size_t k = 0;
  while (k < ops.size()) {
    if (ops[k].kind == 0) {
      ++k;
      continue;
    }
    // Extend a group while gaps of unchanged lines stay within 2*context.
    std::size_t first = k, last = k;
    std::size_t scan = k;
    while (scan < ops.size()) {
      if (ops[scan].kind != 0) {
        last = scan;
        ++scan;
        continue;
      }
      std::size_t run = scan;
      while (run < ops.size() && ops[run].kind == 0) ++run;
      if (run < ops.size() && static_cast<int>(run - scan) <= 2 * context) {
        scan = run;
        continue;
      }
      break;
    }
    std::size_t lo = first >= static_cast<std::size_t>(context) ? first - context : 0;
    while (lo < first && ops[lo].kind != 0) ++lo;
    std::size_t hi = std::min(ops.size(), last + 1 + context);
    DiffHunk h;
    int old_first = -1, new_first = -1;
    for (std::size_t t = lo; t < hi; ++t) {
      const Op& op = ops[t];
      if (op.kind == 0) {
        h.lines.push_back({' ', a.lines[op.a]});
        if (old_first < 0) old_first = op.a;
        if (new_first < 0) new_first = op.b;
        ++h.old_len;
        ++h.new_len;
      } else if (op.kind == 1) {
        h.lines.push_back({'-', a.lines[op.a]});
        if (old_first < 0) old_first = op.a;
        ++h.old_len;
      } else {
        h.lines.push_back({'+', b.lines[op.b]});
        if (new_first < 0) new_first = op.b;
        ++h.new_len;
      }
    }
    // Empty sides use the line before the hunk, as GNU diff does.
    h.old_start = h.old_len ? old_first + 1 : (ops[lo].a);
    h.new_start = h.new_len ? new_first + 1 : (ops[lo].b);
    hunks.push_back(std::move(h));
    k = hi;
  }
  return hunks;
}

std::string render_hunk(const DiffHunk& h) {
  auto range = [](int start, int len) {
    return len == 1 ? std::to_string(start)
                    : std::to_string(start) + "," + std::to_string(len);
  };
  std::string out = "@@ -" + range(h.old_start, h.old_len) + " +" +
                    range(h.new_start, h.new_len) + " @@";
  if (!h.section.empty()) out += " " + h.section;
  out += "\n";
  for (const auto& l : h.lines) {
    out += l.op;
    out += l.text;
    out += '\n';
  }
  return out;
}

std::string make_unified_diff(std::string_view before, std::string_view after,
                              const std::string& path, int context) {
  if (before == after) return {};
  auto hunks = diff_hunks(before, after, context);
  if (hunks.empty()) {
    // Only the trailing newline differs; express it as a last-line rewrite.
    auto a = to_lines(before);
    auto b = to_lines(after);
    DiffHunk h;
    h.old_start = static_cast<int>(a.lines.size());
    h.new_start = static_cast<int>(b.lines.size());
    h.old_len = h.new_len = 1;
    h.lines = {{'-', a.lines.empty() ? "" : a.lines.back()},
               {'+', b.lines.empty() ? "" : b.lines.back()}};
    hunks.push_back(h);
  }
  std::string out = "--- a/" + path + "\n+++ b/" + path + "\n";
  for (const auto& h : hunks) out += render_hunk(h);
  return out;
}

int locate_hunk(std::string_view text, const DiffHunk& hunk) {
  auto doc = to_lines(text);
  auto old_side = hunk.old_side();
  const int n = static_cast<int>(doc.lines.size());
  const int want = static_cast<int>(old_side.size());
  auto fits = [&](int at) {
    if (at < 0 || at + want > n) return false;
    for (int k = 0; k < want; ++k)
      if (doc.lines[at + k] != old_side[k]) return false;
    return true;
  };
  int expected = hunk.old_len == 0 ? hunk.old_start : hunk.old_start - 1;
  for (int off = 0; off <= n + std::abs(expected); ++off) {
    if (fits(expected - off)) return expected - off;
    if (off && fits(expected + off)) return expected + off;
  }
  throw Error("stale-hunk", "context of hunk at line " + std::to_string(hunk.old_start) +
                                " does not match the file");
}

std::string apply_hunk(std::string_view text, const DiffHunk& hunk) {
  int found = locate_hunk(text, hunk);
  auto doc = to_lines(text);
  auto new_side = hunk.new_side();
  const int want = static_cast<int>(hunk.old_side().size());
  std::vector<std::string> out(doc.lines.begin(), doc.lines.begin() + found);
  out.insert(out.end(), new_side.begin(), new_side.end());
  out.insert(out.end(), doc.lines.begin() + found + want, doc.lines.end());
  return from_lines(out, doc.trailing_newline);
}

std::string apply_file_diff(std::string_view text, const FileDiff& diff) {
  // Apply bottom-up so earlier hunks keep their recorded positions.
  std::string cur(text);
  for (auto it = diff.hunks.rbegin(); it != diff.hunks.rend(); ++it)
    cur = apply_hunk(cur, *it);
  return cur;
}

ChangedLines changed_lines(std::string_view before, std::string_view after) {
  ChangedLines out;
  for (const auto& h : diff_hunks(before, after, 0))
    for (const auto& l : h.lines) {
      if (l.op == '-') out.removed.push_back(normalize_ws(l.text));
      if (l.op == '+') out.added.push_back(normalize_ws(l.text));
    }
  return out;
}

}  // namespace genpatch
