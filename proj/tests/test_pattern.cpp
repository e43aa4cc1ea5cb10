#include <doctest.h>

#include "generators.hpp"
#include "genpatch/common.hpp"
#include "genpatch/pattern.hpp"
#include "support.hpp"

using namespace genpatch;
using testing_support::source_file;

namespace {

std::string error_kind(const std::string& text) {
  try {
    parse_generic_patch(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

bool has_issue(const std::vector<Issue>& issues, Issue::Severity sev, const std::string& needle) {
  for (const auto& i : issues)
    if (i.severity == sev && i.message.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_SUITE("pattern") {

TEST_CASE("listing 1 parses into the expected model") {
  GenericPatch gp = parse_generic_patch(source_file("data/listings/unsafe_dereference.cocci"));
  REQUIRE(gp.rules.size() == 1);
  const auto& r = gp.rules[0];
  CHECK(r.name == "unsafe_dereference");
  CHECK(r.quantifier == Quantifier::Exists);
  std::vector<std::pair<std::string, MetavarKind>> mv;
  for (const auto& m : r.metavars) mv.emplace_back(m.name, m.kind);
  CHECK(mv == decltype(mv){{"T", MetavarKind::Type},
                           {"p", MetavarKind::Position},
                           {"fn", MetavarKind::Identifier},
                           {"param", MetavarKind::Identifier},
                           {"fld", MetavarKind::Identifier}});
  REQUIRE(r.header);
  CHECK(r.header->name == "fn");
  REQUIRE(r.header->params.size() == 3);
  CHECK(r.header->params[0].dots);
  CHECK_FALSE(r.header->params[1].dots);
  CHECK(r.header->params[2].dots);

  REQUIRE(r.body.size() == 4);
  CHECK(r.body[0].kind == ElemKind::Dots);
  CHECK(r.body[0].whens.size() == 4);
  CHECK(r.body[0].whens[0].fresh == std::vector<std::string>{"new_val"});
  CHECK(r.body[1].kind == ElemKind::Plus);
  CHECK(r.body[1].plus_lines.size() == 2);
  CHECK(r.body[2].kind == ElemKind::Context);
  CHECK(r.body[2].term.is_expression);
  REQUIRE(r.body[2].term.positions.size() == 1);
  CHECK(r.body[2].term.positions[0].name == "p");
  CHECK(r.body[2].term.annotated() == "param->fld@p");
  CHECK(r.body[3].is_any());
  CHECK(validate(gp).empty());
}

TEST_CASE("rendering is a fixpoint of parsing") {
  std::string text = source_file("data/listings/unsafe_dereference.cocci");
  GenericPatch gp = parse_generic_patch(text);
  std::string once = render_generic_patch(gp);
  GenericPatch again = parse_generic_patch(once);
  CHECK(signature(again) == signature(gp));
  CHECK(render_generic_patch(again) == once);
}

TEST_CASE("random rules survive a render round-trip") {
  gen::Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    std::string text = gen::random_rule(rng);
    GenericPatch gp;
    try {
      gp = parse_generic_patch(text);
    } catch (const Error& e) {
      FAIL_CHECK(e.what() << "\n" << text);
      continue;
    }
    std::string r = render_generic_patch(gp);
    CHECK_MESSAGE(signature(parse_generic_patch(r)) == signature(gp), text << "----\n" << r);
  }
}

TEST_CASE("multi-rule patches keep rule order") {
  GenericPatch gp = parse_generic_patch(
      "@one@\nexpression E;\n@@\n-foo(E);\n+bar(E);\n\n@two exists@\n@@\n bar(x);\n+baz();\n", "gp");
  REQUIRE(gp.rules.size() == 2);
  CHECK(gp.id == "gp");
  CHECK(gp.rules[0].name == "one");
  CHECK(gp.rules[0].quantifier == Quantifier::Forall);
  CHECK(gp.rules[1].name == "two");
  CHECK_FALSE(gp.atomic());
}

TEST_CASE("disjunction branches") {
  GenericPatch gp = parse_generic_patch("@d@\nexpression E;\n@@\n (\n-foo(E);\n |\n-bar(E);\n )\n+baz(E);\n");
  const auto& body = gp.rules[0].body;
  REQUIRE(body.size() == 2);
  REQUIRE(body[0].kind == ElemKind::Disjunction);
  CHECK(body[0].branches.size() == 2);
  CHECK(body[0].branches[1][0].kind == ElemKind::Minus);
}

TEST_CASE("alpha signatures ignore metavariable and rule names") {
  auto a = parse_generic_patch("@a@\nexpression X;\n@@\n-free(X);\n+kfree(X);\n");
  auto b = parse_generic_patch("@b@\nexpression Q;\n@@\n-free(Q);\n+kfree(Q);\n");
  auto c = parse_generic_patch("@c exists@\nexpression Q;\n@@\n-free(Q);\n+kfree(Q);\n");
  auto d = parse_generic_patch("@d@\nidentifier Q;\n@@\n-free(Q);\n+kfree(Q);\n");
  CHECK(alpha_signature(a.rules[0]) == alpha_signature(b.rules[0]));
  CHECK(signature(a.rules[0]) != signature(b.rules[0]));
  CHECK(alpha_signature(a.rules[0]) != alpha_signature(c.rules[0]));
  CHECK(alpha_signature(a.rules[0]) != alpha_signature(d.rules[0]));
}

TEST_CASE("syntax, unsupported and validation errors") {
  CHECK(error_kind("") == "validation");
  CHECK(error_kind("rule\n@@\n foo();\n") == "syntax");
  CHECK(error_kind("@r@\nexpression E\n@@\n foo(E);\n") == "syntax");
  CHECK(error_kind("@r@\nwidget W;\n@@\n foo(W);\n") == "unsupported");
  CHECK(error_kind("@r@\n@@\n foo(\n") == "syntax");
  CHECK(error_kind("@r@\n@@\n<... foo(); ...>\n") == "unsupported");
  CHECK(error_kind("@r@\n@@\n foo();\n... when == x\n") == "unsupported");
  CHECK(error_kind("@r@\n@@\n (\n foo();\n") == "syntax");
  CHECK(error_kind("@r@\n@@\n+foo();\n") == "validation");
  CHECK(error_kind("@r@\n@@\n foo();\n...\n...\n bar();\n") == "validation");
  CHECK(error_kind("@r@\nexpression E;\nexpression E;\n@@\n foo(E);\n") == "validation");
  CHECK(error_kind("@r@\n@@\n foo();\n+a ... b;\n") == "syntax");
}

TEST_CASE("errors name the offending line") {
  try {
    parse_generic_patch("@r@\nexpression E;\n@@\n foo(E);\n+bar(E);\n)\n");
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 6") != std::string::npos);
  }
}

TEST_CASE("unused declarations are warnings") {
  auto gp = parse_generic_patch("@r@\nexpression E, F;\n@@\n-foo(E);\n");
  auto issues = validate(gp);
  CHECK(has_issue(issues, Issue::Severity::Warning, "'F'"));
  CHECK_FALSE(has_issue(issues, Issue::Severity::Error, ""));
}

TEST_CASE("make_term accepts statements and expressions only") {
  Term t;
  CHECK(make_term("x = f(a);", t));
  CHECK_FALSE(t.is_expression);
  CHECK(make_term("p->q", t));
  CHECK(t.is_expression);
  CHECK_FALSE(make_term("x = 1; y = 2;", t));
  CHECK_FALSE(make_term("", t));
}

}  // TEST_SUITE
