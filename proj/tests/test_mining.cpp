#include <doctest.h>

#include "genpatch/common.hpp"
#include "genpatch/mining.hpp"
#include "genpatch/process.hpp"
#include "genpatch/udiff.hpp"
#include "support.hpp"

using namespace genpatch;
using testing_support::TempDir;
using testing_support::write;

namespace {

const char* kOneHunk =
    "--- a/src/x.c\n"
    "+++ b/src/x.c\n"
    "@@ -1,3 +1,3 @@ int f(void)\n"
    " int f(void) {\n"
    "-  return 0;\n"
    "+  return 1;\n"
    " }\n";

std::string hunk(int start, const std::string& old_line, const std::string& new_line) {
  return "@@ -" + std::to_string(start) + ",1 +" + std::to_string(start) + ",1 @@\n-" + old_line + "\n+" +
         new_line + "\n";
}

PatchRecord record_with(int changed, int hunks) {
  std::string d = "--- a/a.c\n+++ b/a.c\n";
  int line = 1;
  for (int h = 0; h < hunks; ++h) {
    int pairs = changed / 2 / hunks + (h < (changed / 2) % hunks ? 1 : 0);
    d += "@@ -" + std::to_string(line) + "," + std::to_string(pairs) + " +" + std::to_string(line) + "," +
         std::to_string(pairs) + " @@\n";
    for (int i = 0; i < pairs; ++i) d += "-old" + std::to_string(i) + "\n";
    for (int i = 0; i < pairs; ++i) d += "+new" + std::to_string(i) + "\n";
    line += 100;
  }
  if (changed % 2) d += "@@ -900,0 +900,1 @@\n+extra\n";
  return parse_patch(d, "p");
}

void sh(const std::string& cmd, const std::string& cwd) {
  auto r = run_shell(cmd, cwd, 60);
  REQUIRE_MESSAGE(r.exit_code == 0, cmd << ": " << r.err);
}

std::string git_commit(const std::string& repo, const std::string& msg) {
  sh("git add -A && git -c user.name=t -c user.email=t@example.com commit -q -m '" + msg + "'", repo);
  return trim(run_shell("git rev-parse HEAD", repo, 60).out);
}

}  // namespace

TEST_SUITE("mining") {

TEST_CASE("one-file one-hunk diff") {
  PatchRecord r = parse_patch(kOneHunk, "proj");
  CHECK(r.hunk_count() == 1);
  CHECK(r.changed_lines() == 2);
  CHECK(r.id == hex_id(kOneHunk));
  auto hs = r.hunks();
  REQUIRE(hs.size() == 1);
  CHECK(hs[0].file == "src/x.c");
  CHECK(hs[0].removed() == std::vector<std::string>{"  return 0;"});
  CHECK(hs[0].added() == std::vector<std::string>{"  return 1;"});
  CHECK(hs[0].context().size() == 2);
  CHECK(hs[0].patch_id == r.id);
}

TEST_CASE("two-file diff with 2+1 hunks") {
  std::string d = std::string("--- a/a.c\n+++ b/a.c\n") + hunk(3, "x", "y") + hunk(40, "p", "q") +
                  "--- a/b.c\n+++ b/b.c\n" + hunk(7, "m", "n");
  PatchRecord r = parse_patch(d);
  CHECK(r.files.size() == 2);
  CHECK(r.hunk_count() == 3);
  CHECK(r.changed_lines() == 6);
}

TEST_CASE("header/body mismatch is malformed") {
  std::string d = "--- a/a.c\n+++ b/a.c\n@@ -1,3 +1,0 @@\n-a\n-b\n";
  try {
    parse_patch(d);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == "malformed-diff");
  }
}

TEST_CASE("filter bounds are inclusive") {
  MiningFilter f;
  auto size = filter_patch(record_with(51, 1), f);
  CHECK_FALSE(size.keep);
  CHECK(starts_with(size.reason, "size"));
  auto spread = filter_patch(record_with(8, 4), f);
  CHECK_FALSE(spread.keep);
  CHECK(starts_with(spread.reason, "spread"));
  CHECK(record_with(50, 3).changed_lines() == 50);
  CHECK(record_with(50, 3).hunk_count() == 3);
  CHECK(filter_patch(record_with(50, 3), f).keep);
}

TEST_CASE("filter monotonicity") {
  for (int lines : {2, 10, 30, 50, 60})
    for (int hunks : {1, 2, 3, 4}) {
      PatchRecord r = record_with(lines, hunks);
      for (int lim = 1; lim <= 60; lim += 7)
        if (!filter_patch(r, {lim, 3}).keep) CHECK_FALSE(filter_patch(r, {lim - 1 > 0 ? lim - 1 : 1, 3}).keep);
    }
}

TEST_CASE("reconstitute a deletion inside listing 2") {
  std::string file = testing_support::source_file("data/listings/get_age.c");
  auto lines = split_lines(file);
  std::string after;
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (i != 5) after += lines[i] + "\n";
  auto hs = diff_hunks(file, after, 3);
  REQUIRE(hs.size() == 1);
  Hunk h;
  h.id = "h";
  h.file = "get_age.c";
  h.diff = hs[0];
  Fragments f = reconstitute(h, file);
  CHECK_FALSE(f.synthetic);
  CHECK(f.function == "get_age");
  CHECK(f.before == file);
  CHECK(f.after == after);
  CHECK(apply_hunk(f.before, f.hunk) == f.after);
}

TEST_CASE("reconstitute a top-level hunk") {
  std::string file = "#include <a.h>\nint x = 1;\n\nint f(void)\n{\n  return x;\n}\n";
  std::string after = "#include <a.h>\nint x = 2;\n\nint f(void)\n{\n  return x;\n}\n";
  Hunk h;
  h.diff = diff_hunks(file, after, 1).at(0);
  Fragments f = reconstitute(h, file);
  CHECK(f.synthetic);
  CHECK(f.function.empty());
  CHECK(f.before.find(kSyntheticFunction) != std::string::npos);
  CHECK(f.before.find("int x = 1;") != std::string::npos);
  CHECK(f.after.find("int x = 2;") != std::string::npos);
  CHECK(apply_hunk(f.before, f.hunk) == f.after);
}

TEST_CASE("reconstitute with disagreeing context is stale") {
  Hunk h;
  h.diff = parse_unified_diff(kOneHunk).at(0).hunks.at(0);
  try {
    reconstitute(h, "int g(void) {\n  return 7;\n}\n");
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == "stale-hunk");
  }
}

TEST_CASE("mining a synthetic git repository") {
  TempDir tmp;
  const std::string repo = (tmp.path / "demo").string();
  write(tmp.path / "demo" / "m.c", "int f(void)\n{\n  return 0;\n}\n");
  sh("git init -q .", repo);
  git_commit(repo, "init");
  write(tmp.path / "demo" / "m.c", "int f(void)\n{\n  return 1;\n}\n");
  std::string small = git_commit(repo, "small");
  std::string big_body = "int f(void)\n{\n";
  for (int i = 0; i < 60; ++i) big_body += "  g(" + std::to_string(i) + ");\n";
  big_body += "  return 1;\n}\n";
  write(tmp.path / "demo" / "m.c", big_body);
  git_commit(repo, "big");
  write(tmp.path / "demo" / "README", "docs\n");
  git_commit(repo, "docs only");

  std::vector<std::pair<std::string, std::string>> dropped;
  auto recs = mine_repository(repo, {}, {}, &dropped);
  // init (creation) and small survive; big is over 50 lines; docs has no C file
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].commit == small);
  CHECK(recs[0].id == small);
  CHECK(recs[0].project == "demo");
  CHECK(recs[0].before_files.at("m.c") == "int f(void)\n{\n  return 0;\n}\n");
  REQUIRE(dropped.size() == 1);
  CHECK(starts_with(dropped[0].second, "size"));
  CHECK(mine_repository(repo, {}).size() == 2);
}

TEST_CASE("ten single-hunk commits give ten records with commit ids") {
  TempDir tmp;
  const std::string repo = tmp.str();
  sh("git init -q .", repo);
  std::vector<std::string> hashes;
  for (int i = 0; i < 10; ++i) {
    write(tmp.path / "a.c", "int v(void)\n{\n  return " + std::to_string(i) + ";\n}\n");
    hashes.insert(hashes.begin(), git_commit(repo, "c" + std::to_string(i)));
  }
  auto recs = mine_repository(repo, {});
  REQUIRE(recs.size() == 10);
  auto direct = split_lines(trim(run_shell("git log --format=%H", repo, 60).out));
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].id == hashes[i]);
    CHECK(recs[i].id == direct[i]);
  }
}

TEST_CASE("mining errors") {
  TempDir tmp;
  try {
    mine_repository(tmp.str(), {});
    FAIL("accepted a non-repository");
  } catch (const Error& e) {
    CHECK(e.kind() == "input");
  }
  VcsConfig broken;
  broken.executable = "genpatch-no-such-vcs";
  try {
    mine_repository(tmp.str(), {}, broken);
    FAIL("accepted a missing tool");
  } catch (const Error& e) {
    CHECK(e.kind() == "mining");
  }
}

TEST_CASE("diff directories keep C files and pre-images") {
  TempDir tmp;
  write(tmp.path / "p1.diff", kOneHunk);
  write(tmp.path / "p1" / "src" / "x.c", "int f(void) {\n  return 0;\n}\n");
  write(tmp.path / "p2.patch", "--- a/doc.txt\n+++ b/doc.txt\n@@ -1 +1 @@\n-a\n+b\n");
  std::vector<std::pair<std::string, std::string>> dropped;
  auto recs = load_patch_dir(tmp.str(), "proj", {}, &dropped);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].commit == "p1");
  CHECK(recs[0].before_files.count("src/x.c") == 1);
  REQUIRE(dropped.size() == 1);
  CHECK(starts_with(dropped[0].second, "language"));
}

}  // TEST_SUITE
