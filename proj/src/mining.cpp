#include "genpatch/mining.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <filesystem>

#include "genpatch/common.hpp"
#include "genpatch/lang.hpp"
#include "genpatch/process.hpp"

namespace genpatch {

namespace fs = std::filesystem;

namespace {

bool is_c_path(const std::string& p) { return ends_with(p, ".c") || ends_with(p, ".h"); }

std::string file_path(const FileDiff& fd) {
  return fd.new_path == "/dev/null" ? fd.old_path : fd.new_path;
}

std::string function_from_section(const std::string& section) {
  auto open = section.find('(');
  if (open == std::string::npos) return "";
  std::size_t e = open;
  while (e > 0 && section[e - 1] == ' ') --e;
  std::size_t s = e;
  while (s > 0 && (std::isalnum(static_cast<unsigned char>(section[s - 1])) || section[s - 1] == '_'))
    --s;
  return section.substr(s, e - s);
}

void keep_c_files(PatchRecord& rec) {
  std::vector<FileDiff> kept;
  for (auto& f : rec.files)
    if (is_c_path(file_path(f)) && !f.hunks.empty()) kept.push_back(std::move(f));
  rec.files = std::move(kept);
}

std::vector<std::string> lines_with(const DiffHunk& h, char op) {
  std::vector<std::string> out;
  for (const auto& l : h.lines)
    if (l.op == op) out.push_back(l.text);
  return out;
}

std::string wrap(const std::vector<std::string>& body) {
  std::string out = std::string("void ") + kSyntheticFunction + "(void) {\n";
  for (const auto& l : body) out += l + "\n";
  return out + "}\n";
}

Fragments synthetic(const Hunk& h) {
  Fragments f;
  f.synthetic = true;
  f.before = wrap(h.diff.old_side());
  f.after = wrap(h.diff.new_side());
  f.hunk = h.diff;
  f.hunk.old_start = h.diff.old_len == 0 ? 1 : 2;
  f.hunk.new_start = h.diff.new_len == 0 ? 1 : 2;
  return f;
}

}  // namespace

std::vector<std::string> Hunk::removed() const { return lines_with(diff, '-'); }
std::vector<std::string> Hunk::added() const { return lines_with(diff, '+'); }
std::vector<std::string> Hunk::context() const { return lines_with(diff, ' '); }

int PatchRecord::changed_lines() const {
  int n = 0;
  for (const auto& f : files)
    for (const auto& h : f.hunks)
      for (const auto& l : h.lines) n += l.op != ' ';
  return n;
}

int PatchRecord::hunk_count() const {
  int n = 0;
  for (const auto& f : files) n += static_cast<int>(f.hunks.size());
  return n;
}

std::vector<Hunk> PatchRecord::hunks() const {
  std::vector<Hunk> out;
  for (const auto& f : files) {
    std::string path = file_path(f);
    for (std::size_t i = 0; i < f.hunks.size(); ++i) {
      Hunk h;
      h.patch_id = id;
      h.project = project;
      h.commit = commit;
      h.file = path;
      h.diff = f.hunks[i];
      h.function = function_from_section(f.hunks[i].section);
      h.id = hex_id(id + "\n" + path + "\n" + std::to_string(i) + "\n" + render_hunk(h.diff));
      out.push_back(std::move(h));
    }
  }
  return out;
}

PatchRecord parse_patch(std::string_view diff_text, const std::string& project,
                        const std::string& commit) {
  PatchRecord rec;
  rec.files = parse_unified_diff(diff_text);
  rec.project = project;
  rec.commit = commit;
  rec.id = commit.empty() ? hex_id(diff_text) : commit;
  return rec;
}

FilterDecision filter_patch(const PatchRecord& record, const MiningFilter& filter) {
  if (record.changed_lines() > filter.max_changed_lines)
    return {false, "size: " + std::to_string(record.changed_lines()) + " changed lines > " +
                       std::to_string(filter.max_changed_lines)};
  if (record.hunk_count() > filter.max_hunks)
    return {false, "spread: " + std::to_string(record.hunk_count()) + " hunks > " +
                       std::to_string(filter.max_hunks)};
  if (record.hunk_count() == 0) return {false, "empty: no hunks"};
  return {true, ""};
}

std::vector<PatchRecord> mine_repository(const std::string& repo_path, const MiningFilter& filter,
                                         const VcsConfig& vcs,
                                         std::vector<std::pair<std::string, std::string>>* dropped) {
  if (!fs::is_directory(repo_path)) throw Error("input", "not a directory: " + repo_path);
  auto probe = run_process({vcs.executable, "-C", repo_path, "rev-parse", "--git-dir"}, "",
                           vcs.timeout_seconds);
  if (probe.exit_code == 127) throw Error("mining", "cannot run '" + vcs.executable + "'");
  if (probe.exit_code != 0)
    throw Error("input", "not a repository: " + repo_path + ": " + trim(probe.err));
  std::vector<std::string> argv{vcs.executable, "-C", repo_path};
  argv.insert(argv.end(), vcs.log_args.begin(), vcs.log_args.end());
  argv.push_back("--");
  argv.insert(argv.end(), vcs.pathspec.begin(), vcs.pathspec.end());
  auto log = run_process(argv, "", vcs.timeout_seconds);
  if (log.exit_code != 0)
    throw Error("mining", vcs.executable + " log failed: " + trim(log.err));
  std::string project = fs::weakly_canonical(fs::path(repo_path)).filename().string();
  std::vector<PatchRecord> out;
  std::size_t pos = 0;
  while ((pos = log.out.find('\x01', pos)) != std::string::npos) {
    std::size_t next = log.out.find('\x01', pos + 1);
    std::string chunk = log.out.substr(pos + 1, next == std::string::npos ? std::string::npos
                                                                           : next - pos - 1);
    pos = next == std::string::npos ? log.out.size() : next;
    auto nl = chunk.find('\n');
    std::string hash = trim(chunk.substr(0, nl));
    std::string body = nl == std::string::npos ? "" : chunk.substr(nl + 1);
    PatchRecord rec = parse_patch(body, project, hash);
    keep_c_files(rec);
    if (rec.files.empty()) continue;
    auto dec = filter_patch(rec, filter);
    if (!dec.keep) {
      if (dropped) dropped->emplace_back(rec.id, dec.reason);
      continue;
    }
    for (const auto& f : rec.files) {
      if (f.old_path == "/dev/null") continue;
      auto show = run_process({vcs.executable, "-C", repo_path, "show", hash + "^:" + f.old_path},
                              "", vcs.timeout_seconds);
      if (show.exit_code == 0) rec.before_files[f.old_path] = show.out;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<PatchRecord> load_patch_dir(const std::string& dir, const std::string& project,
                                        const MiningFilter& filter,
                                        std::vector<std::pair<std::string, std::string>>* dropped) {
  if (!fs::is_directory(dir)) throw Error("input", "not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    if (ext == ".diff" || ext == ".patch") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<PatchRecord> out;
  for (const auto& p : files) {
    std::string text = read_file(p.string());
    PatchRecord rec = parse_patch(text, project);
    rec.commit = p.stem().string();
    keep_c_files(rec);
    if (rec.files.empty()) {
      if (dropped) dropped->emplace_back(rec.id, "language: no C files");
      continue;
    }
    auto dec = filter_patch(rec, filter);
    if (!dec.keep) {
      if (dropped) dropped->emplace_back(rec.id, dec.reason);
      continue;
    }
    for (const auto& f : rec.files) {
      fs::path before = p.parent_path() / p.stem() / f.old_path;
      if (f.old_path != "/dev/null" && fs::is_regular_file(before))
        rec.before_files[f.old_path] = read_file(before.string());
    }
    out.push_back(std::move(rec));
  }
  return out;
}

Fragments reconstitute(const Hunk& hunk, const std::string& before_file) {
  if (before_file.empty()) return synthetic(hunk);
  const int pos = locate_hunk(before_file, hunk.diff);
  const std::string after_file = apply_hunk(before_file, hunk.diff);
  // Before-file lines the change touches; an insertion touches both neighbours.
  int lo = INT_MAX, hi = -1;
  int k = pos;
  for (const auto& l : hunk.diff.lines) {
    if (l.op == '-') {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    } else if (l.op == '+') {
      lo = std::min(lo, k - 1);
      hi = std::max(hi, k);
    }
    if (l.op != '+') ++k;
  }
  if (hi < 0) return synthetic(hunk);
  try {
    AstUnit unit = parse_unit(before_file);
    for (const Node* f : unit.functions()) {
      int s = unit.start(*f).line - 1;
      int e = unit.end(*f).line - 1;
      if (s <= lo && hi <= e) {
        const int fs_line = s, fe_line = e;
        Fragments out;
        out.function = f->children[1].label;
        auto before_lines = split_lines(before_file);
        auto after_lines = split_lines(after_file);
        int delta = hunk.diff.new_len - hunk.diff.old_len;
        for (int i = fs_line; i <= fe_line; ++i) out.before += before_lines[i] + "\n";
        for (int i = fs_line; i <= fe_line + delta; ++i) out.after += after_lines[i] + "\n";
        // Relocate the hunk, trimming context that falls outside the function.
        DiffHunk h;
        h.section = hunk.diff.section;
        int bi = pos, ai = pos;
        int first_old = -1, first_new = -1, ins_old = -1, ins_new = -1;
        for (const auto& l : hunk.diff.lines) {
          bool inside = bi >= fs_line && bi <= fe_line;
          if (l.op == ' ' && !inside) {
            ++bi;
            ++ai;
            continue;
          }
          if (ins_old < 0) {
            ins_old = bi - fs_line;
            ins_new = ai - fs_line;
          }
          h.lines.push_back(l);
          if (l.op != '+') {
            if (first_old < 0) first_old = bi - fs_line;
            ++h.old_len;
            ++bi;
          }
          if (l.op != '-') {
            if (first_new < 0) first_new = ai - fs_line;
            ++h.new_len;
            ++ai;
          }
        }
        h.old_start = h.old_len ? first_old + 1 : ins_old;
        h.new_start = h.new_len ? first_new + 1 : ins_new;
        out.hunk = std::move(h);
        return out;
      }
    }
  } catch (const Error&) {
  }
  return synthetic(hunk);
}

}  // namespace genpatch
