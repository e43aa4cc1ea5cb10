#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace genpatch {

/// One body line of a unified-diff hunk: op is ' ', '-' or '+'.
struct DiffLine {
  char op = ' ';
  std::string text;
  bool operator==(const DiffLine&) const = default;
};

struct DiffHunk {
  int old_start = 0;
  int old_len = 0;
  int new_start = 0;
  int new_len = 0;
  std::string section;  // text after the closing "@@", usually a function name
  std::vector<DiffLine> lines;

  std::vector<std::string> old_side() const;
  std::vector<std::string> new_side() const;
  bool operator==(const DiffHunk&) const = default;
};

struct FileDiff {
  std::string old_path;
  std::string new_path;
  std::vector<DiffHunk> hunks;
};

/// Parse a (possibly multi-file) unified diff. Hunk bodies are checked against
/// their headers; a mismatch throws Error("malformed-diff").
std::vector<FileDiff> parse_unified_diff(std::string_view text);

/// Minimal line diff of `before` against `after` with `context` lines of
/// context. Returns "" when the texts are equal.
std::string make_unified_diff(std::string_view before, std::string_view after,
                              const std::string& path, int context = 3);

/// Same, returning structured hunks.
std::vector<DiffHunk> diff_hunks(std::string_view before, std::string_view after,
                                 int context = 3);

std::string render_hunk(const DiffHunk& hunk);

/// Apply one hunk. The old side is searched for at the recorded position
/// first, then at increasing offsets; no fuzz. Throws Error("stale-hunk").
std::string apply_hunk(std::string_view text, const DiffHunk& hunk);
/// 0-based line where the hunk's old side sits in `text`. Throws like apply_hunk.
int locate_hunk(std::string_view text, const DiffHunk& hunk);
std::string apply_file_diff(std::string_view text, const FileDiff& diff);

/// Lines removed/added between two texts, after whitespace normalization.
struct ChangedLines {
  std::vector<std::string> removed;
  std::vector<std::string> added;
};
ChangedLines changed_lines(std::string_view before, std::string_view after);

}  // namespace genpatch
