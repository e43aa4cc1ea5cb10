#include <doctest.h>

#include <filesystem>
#include <set>

#include "genpatch/cfg.hpp"
#include "genpatch/common.hpp"
#include "genpatch/lang.hpp"
#include "support.hpp"

using namespace genpatch;
using testing_support::source_file;
using testing_support::source_path;

namespace {

std::vector<std::pair<TokenKind, std::string>> lex(const std::string& s) {
  std::vector<std::pair<TokenKind, std::string>> out;
  for (const auto& t : tokenize(s).tokens) out.emplace_back(t.kind, t.lexeme);
  return out;
}

const Node* find(const Node& root, NodeType type, const std::string& label = "") {
  const Node* hit = nullptr;
  walk(root, [&](const Node& n) {
    if (!hit && n.type == type && (label.empty() || n.label == label)) hit = &n;
  });
  return hit;
}

}  // namespace

TEST_SUITE("lang") {

TEST_CASE("tokenize basics") {
  using K = TokenKind;
  CHECK(lex("int x;") == decltype(lex("")){{K::Keyword, "int"}, {K::Identifier, "x"}, {K::Punct, ";"}});
  CHECK(lex("").empty());
  CHECK(lex("pers->age") == decltype(lex("")){{K::Identifier, "pers"}, {K::Operator, "->"}, {K::Identifier, "age"}});
  CHECK(lex("a<<=b")[1].second == "<<=");
  CHECK(lex("'\\''")[0].first == K::Char);
}

TEST_CASE("tokens carry positions and trivia") {
  auto ts = tokenize("int\n  /* c */ x;\n");
  REQUIRE(ts.tokens.size() == 3);
  CHECK(ts.tokens[1].pos == Position{2, 11});
  CHECK(ts.tokens[1].trivia == "\n  /* c */ ");
  CHECK(ts.trailing == "\n");
  CHECK(print_tokens(ts) == "int\n  /* c */ x;\n");
}

TEST_CASE("unterminated input is a lexical error") {
  for (const char* bad : {"char *s = \"abc;", "int x; /* open", "char c = 'a;"}) {
    try {
      tokenize(bad);
      FAIL("no error for " << bad);
    } catch (const Error& e) {
      CHECK(e.kind() == "lexical");
    }
  }
}

TEST_CASE("listing 2 parses into the expected function") {
  AstUnit u = parse_unit(source_file("data/listings/get_age.c"), "get_age.c");
  auto fns = u.functions();
  REQUIRE(fns.size() == 1);
  const Node& fn = *fns[0];
  CHECK(fn.type == NodeType::FunctionDef);
  CHECK(fn.label == "get_age");
  const Node* params = find(fn, NodeType::ParamList);
  REQUIRE(params);
  std::vector<std::string> names;
  for (const auto& p : params->children) names.push_back(p.children.at(1).label);
  CHECK(names == std::vector<std::string>{"alive", "pers", "context"});
  const Node* body = find(fn, NodeType::CompoundStmt);
  REQUIRE(body);
  REQUIRE(body->children.size() == 3);
  CHECK(body->children[0].type == NodeType::DeclStmt);
  CHECK(body->children[1].type == NodeType::IfStmt);
  CHECK(body->children[1].children.size() == 3);
  CHECK(body->children[2].type == NodeType::ReturnStmt);
  CHECK_FALSE(u.degenerate);
}

TEST_CASE("empty and preprocessor-only files") {
  AstUnit empty = parse_unit("");
  CHECK(empty.root->children.empty());
  CHECK_FALSE(empty.degenerate);
  AstUnit inc = parse_unit("#include <stdio.h>\n");
  REQUIRE(inc.root->children.size() == 1);
  CHECK(inc.root->children[0].type == NodeType::OpaqueStmt);
  CHECK_FALSE(inc.degenerate);
  CHECK(print_unit(inc) == "#include <stdio.h>\n");
  AstUnit junk = parse_unit("@@ ?? @@\n");
  CHECK(junk.degenerate);
  CHECK(print_unit(junk) == "@@ ?? @@\n");
}

TEST_CASE("print_unit reproduces every corpus file") {
  int files = 0;
  for (const char* dir : {"data/corpus", "data/listings", "data/toy_corpus", "benchmarks/toy"}) {
    for (const auto& e : std::filesystem::recursive_directory_iterator(source_path(dir))) {
      auto ext = e.path().extension();
      if (!e.is_regular_file() || (ext != ".c" && ext != ".h")) continue;
      std::string src = read_file(e.path().string());
      CHECK_MESSAGE(print_unit(parse_unit(src, e.path().string())) == src, e.path().string());
      ++files;
    }
  }
  CHECK(files >= 20);
}

TEST_CASE("spans slice the source exactly") {
  std::string src = source_file("data/corpus/list.c");
  AstUnit u = parse_unit(src, "list.c");
  walk(*u.root, [&](const Node& n) {
    if (n.empty_span()) return;
    std::string text = u.source_text(n);
    CHECK(normalize_ws(text).size() >= 1);
    CHECK(src.substr(u.begin_offset(n), u.end_offset(n) - u.begin_offset(n)) == text);
    std::uint32_t prev = n.first;
    for (const auto& c : n.children) {
      if (c.empty_span()) continue;
      CHECK(c.first >= prev);
      CHECK(c.last <= n.last);
      prev = c.last;
    }
  });
}

TEST_CASE("canon ignores layout and parentheses") {
  AstUnit a = parse_unit("int f(void){ return (a+b)*c; }");
  AstUnit b = parse_unit("int f(void)\n{\n  return ((a + b)) * c;\n}\n");
  CHECK(canon(*a.root) == canon(*b.root));
  AstUnit c = parse_unit("int f(void){ return a+b*c; }");
  CHECK(canon(*a.root) != canon(*c.root));
}

TEST_CASE("operator precedence") {
  AstUnit u = parse_unit("void f(void){ x = a || b && c == d + e * f; }");
  const Node* assign = find(*u.root, NodeType::AssignExpr);
  REQUIRE(assign);
  const Node& rhs = assign->children[1];
  CHECK(rhs.label == "||");
  CHECK(rhs.children[1].label == "&&");
  CHECK(rhs.children[1].children[1].label == "==");
  CHECK(rhs.children[1].children[1].children[1].label == "+");
  CHECK(rhs.children[1].children[1].children[1].children[1].label == "*");
}

TEST_CASE("parsing never aborts") {
  std::string src = "int f(void) { switch (x) { case 1: y(); } return @@; }\nint g(void) { return 1; }\n";
  AstUnit u = parse_unit(src);
  CHECK(print_unit(u) == src);
  CHECK(find(*u.root, NodeType::OpaqueStmt));
  CHECK(find(*u.root, NodeType::FunctionDef, "g"));
}

TEST_CASE("cfg of a straight body") {
  AstUnit u = parse_unit("void f(void) { s1(); s2(); }");
  Cfg g = build_cfg(*u.functions()[0]);
  CHECK(g.size() == 4);
  auto paths = g.paths(100);
  REQUIRE(paths.size() == 1);
  REQUIRE(paths[0].size() == 4);
  CHECK(paths[0].front() == Cfg::kEntry);
  CHECK(paths[0].back() == Cfg::kExit);
  CHECK(u.token_text(*g.nodes[paths[0][1]].ast) == "s1 ( ) ;");
  CHECK(u.token_text(*g.nodes[paths[0][2]].ast) == "s2 ( ) ;");
}

TEST_CASE("cfg of if/else has two paths") {
  AstUnit u = parse_unit("void f(int c) { if (c) a(); else b(); }");
  Cfg g = build_cfg(*u.functions()[0]);
  CHECK(g.paths(100).size() == 2);
  int trues = 0, falses = 0;
  for (const auto& e : g.edges) {
    if (g.nodes[e.from].kind != CfgNodeKind::Cond) continue;
    trues += e.label == EdgeLabel::True;
    falses += e.label == EdgeLabel::False;
  }
  CHECK(trues == 1);
  CHECK(falses == 1);
}

TEST_CASE("cfg loops, break and continue") {
  AstUnit u = parse_unit("void f(int n) { while (n) { if (n == 3) break; if (n == 5) continue; n--; } done(); }");
  Cfg g = build_cfg(*u.functions()[0]);
  CHECK(g.back_edge_count() >= 1);
  auto order = g.topo_order();
  CHECK(order.front() == Cfg::kEntry);
  CHECK(order.size() == g.size());
  for (const auto& p : g.paths(1000)) {
    CHECK(p.front() == Cfg::kEntry);
    CHECK(p.back() == Cfg::kExit);
  }
  // every node reachable from Entry
  std::set<int> seen{Cfg::kEntry};
  std::vector<int> stack{Cfg::kEntry};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    for (int s : g.succ[n])
      if (seen.insert(s).second) stack.push_back(s);
  }
  CHECK(seen.size() == g.size());
}

TEST_CASE("listing 2 has a path to the dereference that never checks pers") {
  AstUnit u = parse_unit(source_file("data/listings/get_age.c"), "get_age.c");
  Cfg g = build_cfg(*u.functions()[0]);
  bool found = false;
  for (const auto& p : g.paths(100)) {
    bool checked = false;
    for (int n : p) {
      const auto& node = g.nodes[n];
      if (!node.ast) continue;
      std::string text = u.token_text(*node.ast);
      if (node.kind == CfgNodeKind::Cond && text.find("pers") != std::string::npos) checked = true;
      if (node.kind == CfgNodeKind::Stmt && text == "age = pers -> age ;" && !checked) found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("degenerate function body") {
  AstUnit u = parse_unit("void f(void) { }");
  Cfg g = build_cfg(*u.functions()[0]);
  CHECK(g.size() == 2);
  CHECK(g.paths(10) == std::vector<std::vector<int>>{{Cfg::kEntry, Cfg::kExit}});
}

}  // TEST_SUITE
