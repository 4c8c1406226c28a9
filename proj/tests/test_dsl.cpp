#include <doctest.h>

#include "helpers.hpp"
#include "tmkit/dsl.hpp"

using namespace tmkit;

TEST_CASE("parse: minimal model") {
  ParseResult result = parse("model \"m\"\n");
  REQUIRE(result.ok());
  CHECK(result.doc.model.name == "m");
  CHECK(result.doc.model.thimacs.empty());
  CHECK_FALSE(result.doc.partition.has_value());
}

TEST_CASE("parse: heart corpus declares four regions") {
  Document doc = testutil::load_corpus("heart.tm");
  REQUIRE(doc.partition.has_value());
  REQUIRE(doc.partition->regions.size() == 4);
  CHECK(doc.partition->regions[0].id == "C1");
  CHECK(doc.partition->regions[3].id == "C4");
  CHECK(doc.events.size() == 4);
}

TEST_CASE("parse: undeclared flow endpoint is reported") {
  ParseResult result = parse(
      "model \"m\"\n"
      "thimac B { receive }\n"
      "flow A.create -> B.receive\n");
  CHECK_FALSE(result.ok());
  bool found = false;
  for (const auto& diag : result.build_errors)
    if (diag.code == "UnknownReference") found = true;
  CHECK(found);
}

TEST_CASE("parse: comments and whitespace do not change the result") {
  std::string bare =
      "model \"m\"\nthimac A { create\nrelease }\nflow A.create -> A.release\n";
  std::string noisy =
      "# leading comment\nmodel   \"m\"   # trailing\n\n\n"
      "thimac A {\n  create   # one\n  release\n}\n"
      "flow A.create -> A.release\n";
  ParseResult a = parse(bare);
  ParseResult b = parse(noisy);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a.doc == b.doc);
}

TEST_CASE("parse: error recovery reports multiple errors, capped at 20") {
  std::string text = "model \"m\"\n";
  for (int i = 0; i < 30; ++i) text += "flow -> ->\n";
  ParseResult result = parse(text);
  CHECK_FALSE(result.ok());
  CHECK(result.errors.size() > 1);
  CHECK(result.errors.size() <= 20);
}

TEST_CASE("parse: total on garbage, spans are 1-based") {
  ParseResult result = parse("model \"m\"\n}{%$\x01");
  CHECK_FALSE(result.errors.empty());
  for (const auto& error : result.errors) {
    CHECK(error.span.line >= 1);
    CHECK(error.span.column >= 1);
  }
}

TEST_CASE("serialize: empty model is a canonical short text") {
  ParseResult result = parse("model \"m\"\n");
  REQUIRE(result.ok());
  std::string text = serialize(result.doc);
  CHECK(text == "model \"m\"\n");
  CHECK(serialize(result.doc) == text);  // deterministic
}

TEST_CASE("serialize/parse round-trip on every corpus model") {
  for (const char* name : {"heart.tm", "car.tm", "airbag.tm"}) {
    CAPTURE(name);
    Document doc = testutil::load_corpus(name);
    std::string text = serialize(doc);
    ParseResult reparsed = parse(text, name);
    REQUIRE(reparsed.ok());
    CHECK(reparsed.doc == doc);
    // A second round is byte-identical: serialize is a canonical form.
    CHECK(serialize(reparsed.doc) == text);
  }
}

TEST_CASE("parse: scenario ticks must increase, measurements stay consistent") {
  std::string base =
      "model \"m\"\nthimac A { create\nrelease }\nflow A.create -> A.release\n";
  ParseResult bad_time = parse(base +
                               "scenario s { tick 5 ms { }\n tick 2 ms { } }\n");
  CHECK_FALSE(bad_time.ok());
  ParseResult bad_keys = parse(
      base + "scenario s { tick 0 ms { a = 1 }\n tick 2 ms { b = 1 } }\n");
  CHECK_FALSE(bad_keys.ok());
}

TEST_CASE("parse: airbag behavior block is fully captured") {
  Document doc = testutil::load_corpus("airbag.tm");
  CHECK(doc.has_behavior);
  CHECK(doc.repeats == std::set<std::string>{"E1", "E2", "E3"});
  REQUIRE(doc.branches.size() == 1);
  const Branch& branch = doc.branches[0];
  CHECK(branch.at == "E1");
  REQUIRE(branch.arms.size() == 1);
  CHECK(branch.arms[0].to == "E4");
  REQUIRE(branch.arms[0].guard.terms.size() == 3);
  CHECK(branch.arms[0].guard.terms[0].measurement == "speed_drop");
  CHECK(branch.arms[0].guard.terms[0].op == CompareOp::Ge);
  CHECK(branch.arms[0].guard.terms[0].threshold == 20);
  CHECK(branch.else_skip);
  REQUIRE(doc.constraints.size() == 3);
  CHECK(doc.constraints[0].max_separation == TimeValue::ms(5));
  CHECK(doc.constraints[0].warning_id == "E6");
  CHECK(doc.scenarios.size() == 4);
}
