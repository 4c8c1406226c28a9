#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "tmkit/events.hpp"
#include "tmkit/toolkit.hpp"

using namespace tmkit;

namespace {

// Trivial one-event-per-node lift over a bare DAG, for property tests.
DynamicModel identity_dynamic(const PrecedenceDag& dag) {
  DynamicModel dynamic;
  for (const auto& node : dag.nodes) dynamic.events.push_back({node, node, {}});
  return dynamic;
}

}  // namespace

TEST_CASE("TimeValue: normalization is exact and display never rounds") {
  CHECK(TimeValue::ms(5).micros == 5000);
  CHECK(TimeValue::sec(2).micros == 2000000);
  CHECK(TimeValue::ms(5).display() == std::pair<std::int64_t, TimeUnit>{5, TimeUnit::Ms});
  CHECK(TimeValue::us(5001).display() ==
        std::pair<std::int64_t, TimeUnit>{5001, TimeUnit::Us});
  CHECK(TimeValue::us(3000000).display() ==
        std::pair<std::int64_t, TimeUnit>{3, TimeUnit::S});
  CHECK(TimeValue::ms(5).text() == "5 ms");
  CHECK(TimeValue::us(0).text() == "0 us");
}

TEST_CASE("lift_to_events: heart regions map to E1..E4") {
  Document doc = testutil::load_corpus("heart.tm");
  DynamicModel dynamic = lift_to_events(*doc.partition, doc.events);
  REQUIRE(dynamic.events.size() == 4);
  auto mapping = dynamic.region_to_event();
  CHECK(mapping.at("C1") == "E1");
  CHECK(mapping.at("C4") == "E4");
}

TEST_CASE("lift_to_events: empty spec list, duplicates, unknown region") {
  Document doc = testutil::load_corpus("heart.tm");
  CHECK(lift_to_events(*doc.partition, {}).events.empty());
  CHECK_THROWS_AS(
      lift_to_events(*doc.partition, {{"E1", "C1", {}}, {"E2", "C1", {}}}),
      AnalysisError);
  CHECK_THROWS_AS(lift_to_events(*doc.partition, {{"E1", "C9", {}}}),
                  AnalysisError);
}

TEST_CASE("build_behavior: heart edges are the transitive reduction") {
  Document doc = testutil::load_corpus("heart.tm");
  Analysis analysis = analyze(doc);
  std::vector<std::pair<std::string, std::string>> expected = {
      {"E1", "E3"}, {"E2", "E4"}, {"E3", "E4"}};
  CHECK(analysis.behavior.edges == expected);  // E1->E4 dropped
}

TEST_CASE("build_behavior: empty dynamic model gives empty behavior") {
  BehaviorModel behavior = build_behavior({}, {}, {}, {});
  CHECK(behavior.events.empty());
  CHECK(behavior.edges.empty());
}

TEST_CASE("build_behavior: airbag repeats and branch survive") {
  Document doc = testutil::load_corpus("airbag.tm");
  Analysis analysis = analyze(doc);
  CHECK(analysis.behavior.repeats == std::set<std::string>{"E1", "E2", "E3"});
  REQUIRE(analysis.behavior.branch_at("E1"));
  CHECK(analysis.behavior.branch_at("E1")->arms[0].to == "E4");
  CHECK(analysis.behavior.events.size() == 8);
}

TEST_CASE("build_behavior: unknown repeat or branch target is rejected") {
  Document doc = testutil::load_corpus("heart.tm");
  Analysis base = analyze(doc);
  DynamicModel dynamic = lift_to_events(*doc.partition, doc.events);
  CHECK_THROWS_AS(build_behavior(dynamic, base.dag, {"E9"}, {}),
                  AnalysisError);
  Branch branch{"E1", {{GuardExpr{{{"x", CompareOp::Lt, 1}}}, "E9"}}, true};
  CHECK_THROWS_AS(build_behavior(dynamic, base.dag, {}, {branch}),
                  AnalysisError);
}

TEST_CASE("transitive reduction preserves reachability on random DAGs") {
  std::mt19937 rng(13);
  for (int round = 0; round < 100; ++round) {
    PrecedenceDag dag = oracle::random_dag(rng, 1 + rng() % 8);
    BehaviorModel behavior = build_behavior(identity_dynamic(dag), dag, {}, {});
    std::vector<oracle::Edge> reduced(behavior.edges.begin(),
                                      behavior.edges.end());
    CHECK(oracle::reachability(dag.nodes, reduced) ==
          oracle::reachability(dag.nodes, oracle::plain_edges(dag)));
  }
}

TEST_CASE("check_isomorphism: corpus and random models hold") {
  for (const char* name : {"heart.tm", "car.tm", "airbag.tm"}) {
    CAPTURE(name);
    Document doc = testutil::load_corpus(name);
    Analysis analysis = analyze(doc);
    CHECK(check_isomorphism(analysis.dag, analysis.behavior,
                            analysis.region_to_event)
              .ok);
  }
  std::mt19937 rng(17);
  for (int round = 0; round < 100; ++round) {
    PrecedenceDag dag = oracle::random_dag(rng, 1 + rng() % 8);
    DynamicModel dynamic = identity_dynamic(dag);
    BehaviorModel behavior = build_behavior(dynamic, dag, {}, {});
    CHECK(check_isomorphism(dag, behavior, dynamic.region_to_event()).ok);
  }
}

TEST_CASE("check_isomorphism: an extra edge is caught with a counterexample") {
  Document doc = testutil::load_corpus("heart.tm");
  Analysis analysis = analyze(doc);
  BehaviorModel broken = analysis.behavior;
  broken.edges.push_back({"E2", "E3"});
  std::sort(broken.edges.begin(), broken.edges.end());
  IsomorphismResult result =
      check_isomorphism(analysis.dag, broken, analysis.region_to_event);
  CHECK_FALSE(result.ok);
  REQUIRE(result.counterexample.has_value());
  CHECK(*result.counterexample == std::pair<std::string, std::string>{"C2", "C3"});
}

TEST_CASE("check_isomorphism: empty models agree") {
  CHECK(check_isomorphism({}, {}, {}).ok);
}

TEST_CASE("GuardExpr text round-trips numbers exactly") {
  GuardExpr guard{{{"speed_drop", CompareOp::Ge, 20},
                   {"ratio", CompareOp::Lt, 0.5}}};
  CHECK(guard.text() == "speed_drop >= 20 and ratio < 0.5");
}
