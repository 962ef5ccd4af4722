#include <doctest.h>

#include <string>

#include "support/corpus.hpp"
#include "tml/format.hpp"
#include "tml/parser.hpp"

using namespace tml;

namespace {

std::string format_source(std::string_view source) {
  Ast ast = parse(source);
  REQUIRE(ast.diagnostics.empty());
  auto text = format(ast);
  REQUIRE(text.has_value());
  return *text;
}

}  // namespace

TEST_CASE("canonical layout of a full model") {
  std::string out = format_source(
      "machine  Vendor\"v\"{create process\"p\" store   S\n"
      "machine Inner{transfer}}\n"
      "flow Vendor.create->Vendor.process as step \"walk\"\n"
      "trigger Vendor.process=>Vendor.Inner.transfer\n"
      "event E1\"first\"{region:[Vendor.create,step] time:\"dawn\"}\n"
      "event E2 { region: [Vendor.process] }\n"
      "behavior{E1->E2}\n");
  CHECK(out ==
        "machine Vendor \"v\" {\n"
        "  create\n"
        "  process \"p\"\n"
        "  store S\n"
        "  machine Inner {\n"
        "    transfer\n"
        "  }\n"
        "}\n"
        "flow Vendor.create -> Vendor.process as step \"walk\"\n"
        "trigger Vendor.process => Vendor.Inner.transfer\n"
        "event E1 \"first\" {\n"
        "  region: [Vendor.create, step]\n"
        "  time: \"dawn\"\n"
        "}\n"
        "event E2 {\n"
        "  region: [Vendor.process]\n"
        "}\n"
        "behavior {\n"
        "  E1 -> E2\n"
        "}\n");
}

TEST_CASE("empty machine and behavior bodies collapse to braces") {
  CHECK(format_source("machine M {\n}\n") == "machine M {}\n");
  CHECK(format_source("behavior {\n}\n") == "behavior {}\n");
}

TEST_CASE("formatting is idempotent") {
  std::string once = format_source(
      "machine A{create release transfer}machine B{transfer receive}\n"
      "flow A.create->A.release flow A.release->A.transfer\n"
      "flow A.transfer->B.transfer as hop\n"
      "event E1{region:[A.create]}behavior{}");
  CHECK(format_source(once) == once);
}

TEST_CASE("formatting strips comments") {
  std::string out = format_source("// top\nmachine M { create // tail\n }\n");
  CHECK(out.find("//") == std::string::npos);
  CHECK(out.find("top") == std::string::npos);
}

TEST_CASE("string escapes survive a format round trip") {
  std::string src =
      "machine M \"quote \\\" slash \\\\ nl \\n tab \\t cr \\r\" { create }\n";
  Ast first = parse(src);
  REQUIRE(first.diagnostics.empty());
  auto out = format(first);
  REQUIRE(out.has_value());
  Ast second = parse(*out);
  REQUIRE(second.diagnostics.empty());
  CHECK(ast_equal(first, second));
  CHECK(std::get<AstMachine>(second.decls[0]).label ==
        std::string("quote \" slash \\ nl \n tab \t cr \r"));
}

TEST_CASE("quote_string escapes everything the lexer understands") {
  CHECK(quote_string("plain") == "\"plain\"");
  CHECK(quote_string("a\"b") == "\"a\\\"b\"");
  CHECK(quote_string("a\\b") == "\"a\\\\b\"");
  CHECK(quote_string("a\nb\tc\rd") == "\"a\\nb\\tc\\rd\"");
  CHECK(quote_string("") == "\"\"");
}

TEST_CASE("format refuses an ast that carries errors") {
  Ast broken = parse("machine { create }");
  REQUIRE(has_errors(broken.diagnostics));
  CHECK(!format(broken).has_value());
}

TEST_CASE("the corpus round-trips structurally and then verbatim") {
  for (const char* name :
       {"stock_goods.tm", "railway.tm", "script.tm", "propp.tm"}) {
    CAPTURE(name);
    std::string source = testsupport::read_corpus(name);
    Ast original = parse(source);
    REQUIRE(original.diagnostics.empty());
    auto formatted = format(original);
    REQUIRE(formatted.has_value());
    Ast reparsed = parse(*formatted);
    REQUIRE(reparsed.diagnostics.empty());
    CHECK(ast_equal(original, reparsed));
    auto again = format(reparsed);
    REQUIRE(again.has_value());
    CHECK(*again == *formatted);
  }
}
