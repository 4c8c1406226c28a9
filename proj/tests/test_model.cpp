#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "tmkit/model.hpp"

using namespace tmkit;

namespace {

ModelDecls tiny_chain() {
  ModelDecls decls;
  decls.name = "tiny";
  decls.thimacs.push_back({"A", "A", std::nullopt});
  decls.thimacs.push_back({"B", "B", std::nullopt});
  decls.stages.push_back({"A.create", StageKind::Create, "A", "", std::nullopt});
  decls.stages.push_back({"A.release", StageKind::Release, "A", "", std::nullopt});
  decls.stages.push_back({"A.transfer", StageKind::Transfer, "A", "", std::nullopt});
  decls.stages.push_back({"B.receive", StageKind::Receive, "B", "", std::nullopt});
  decls.stages.push_back({"B.process", StageKind::Process, "B", "", std::nullopt});
  decls.flows.push_back({"A.create", "A.release"});
  decls.flows.push_back({"A.release", "A.transfer"});
  decls.flows.push_back({"A.transfer", "B.receive"});
  decls.flows.push_back({"B.receive", "B.process"});
  return decls;
}

}  // namespace

TEST_CASE("build_model: empty declarations give an empty valid model") {
  BuildResult result = build_model({});
  CHECK(result.ok());
  CHECK(result.model.thimacs.empty());
  CHECK(result.model.stages.empty());
  CHECK(validate(result.model).empty());
}

TEST_CASE("build_model: heart corpus has two roots, each with a Heart child") {
  Document doc = testutil::load_corpus("heart.tm");
  auto roots = doc.model.roots();
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == "Living");
  CHECK(roots[1] == "Deceased");
  for (const auto& root : roots) {
    const Thimac* thimac = doc.model.find_thimac(root);
    REQUIRE(thimac);
    REQUIRE(thimac->children.size() == 1);
    CHECK(thimac->children[0] == root + ".Heart");
  }
}

TEST_CASE("build_model: Transfer->Create flow is IllegalFlow") {
  ModelDecls decls = tiny_chain();
  decls.stages.push_back({"B.create", StageKind::Create, "B", "", std::nullopt});
  decls.flows.push_back({"A.transfer", "B.create"});
  BuildResult result = build_model(decls);
  REQUIRE_FALSE(result.ok());
  bool found = false;
  for (const auto& diag : result.errors)
    if (diag.code == "IllegalFlow") found = true;
  CHECK(found);
}

TEST_CASE("build_model: duplicate and unknown references accumulate") {
  ModelDecls decls = tiny_chain();
  decls.thimacs.push_back({"A", "A", std::nullopt});       // DuplicateId
  decls.flows.push_back({"A.create", "Ghost.receive"});    // UnknownReference
  BuildResult result = build_model(decls);
  REQUIRE(result.errors.size() >= 2);
  std::set<std::string> codes;
  for (const auto& diag : result.errors) codes.insert(diag.code);
  CHECK(codes.count("DuplicateId"));
  CHECK(codes.count("UnknownReference"));
}

TEST_CASE("stage_adjacency_legal: spot checks") {
  CHECK(stage_adjacency_legal(StageKind::Release, StageKind::Transfer, true));
  CHECK(stage_adjacency_legal(StageKind::Transfer, StageKind::Transfer, false));
  CHECK_FALSE(stage_adjacency_legal(StageKind::Process, StageKind::Receive, true));
  CHECK(stage_adjacency_legal(StageKind::Process, StageKind::Create, true));
  CHECK_FALSE(stage_adjacency_legal(StageKind::Transfer, StageKind::Create, false));
}

TEST_CASE("stage_adjacency_legal: exhaustive agreement with the frozen table") {
  for (StageKind from : kStageKinds)
    for (StageKind to : kStageKinds)
      for (bool same : {true, false}) {
        CAPTURE(to_string(from));
        CAPTURE(to_string(to));
        CAPTURE(same);
        CHECK(stage_adjacency_legal(from, to, same) ==
              oracle::legality_table(from, to, same));
      }
}

TEST_CASE("validate: corpus models are clean, no MULTI_COMPONENT") {
  for (const char* name : {"heart.tm", "car.tm", "airbag.tm"}) {
    CAPTURE(name);
    Document doc = testutil::load_corpus(name);
    CHECK(validate(doc.model).empty());
  }
}

TEST_CASE("validate: two disjoint flow chains warn MULTI_COMPONENT") {
  ModelDecls decls = tiny_chain();
  decls.thimacs.push_back({"X", "X", std::nullopt});
  decls.stages.push_back({"X.create", StageKind::Create, "X", "", std::nullopt});
  decls.stages.push_back({"X.release", StageKind::Release, "X", "", std::nullopt});
  decls.flows.push_back({"X.create", "X.release"});
  BuildResult result = build_model(decls);
  REQUIRE(result.ok());
  Diagnostics diags = validate(result.model);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].severity == Severity::Warning);
  CHECK(diags[0].code == "MULTI_COMPONENT");
}

TEST_CASE("validate: trigger duplicating a flow path is TriggerOverlapsFlow") {
  ModelDecls decls = tiny_chain();
  decls.triggers.push_back({"A.create", "B.process", std::nullopt});
  BuildResult result = build_model(decls);
  bool found = false;
  for (const auto& diag : result.errors)
    if (diag.code == "TriggerOverlapsFlow") found = true;
  CHECK(found);
}

TEST_CASE("validate: idempotent on corpus models") {
  Document doc = testutil::load_corpus("airbag.tm");
  CHECK(validate(doc.model) == validate(doc.model));
}

TEST_CASE("thimac graph is a forest on corpus models") {
  for (const char* name : {"heart.tm", "car.tm", "airbag.tm"}) {
    Document doc = testutil::load_corpus(name);
    std::size_t non_roots = 0;
    for (const auto& [id, thimac] : doc.model.thimacs) {
      if (thimac.parent) non_roots++;
      // parent links resolve and agree with children lists
      if (thimac.parent) {
        const Thimac* parent = doc.model.find_thimac(*thimac.parent);
        REQUIRE(parent);
        bool listed = false;
        for (const auto& child : parent->children)
          if (child == id) listed = true;
        CHECK(listed);
      }
    }
    std::size_t edge_count = 0;
    for (const auto& [id, thimac] : doc.model.thimacs)
      edge_count += thimac.children.size();
    CHECK(edge_count == non_roots);
  }
}

TEST_CASE("flow-legality fuzzing: random single-edge mutations are caught") {
  // 1000 mutations across the corpus: rewire one flow endpoint at random;
  // validate must flag every mutation that breaks the legality table and
  // stay silent on the untouched models.
  std::mt19937 rng(20260825);
  std::vector<Document> docs;
  for (const char* name : {"heart.tm", "car.tm", "airbag.tm"})
    docs.push_back(testutil::load_corpus(name));
  for (const auto& doc : docs) CHECK(validate(doc.model).empty());

  std::vector<StageId> stage_ids[3];
  for (std::size_t d = 0; d < docs.size(); ++d)
    for (const auto& [id, stage] : docs[d].model.stages)
      stage_ids[d].push_back(id);

  int illegal_seen = 0;
  for (int round = 0; round < 1000; ++round) {
    std::size_t d = rng() % docs.size();
    StaticModel model = docs[d].model;
    if (model.flows.empty()) continue;
    FlowEdge& victim = model.flows[rng() % model.flows.size()];
    const auto& ids = stage_ids[d];
    if (rng() % 2)
      victim.from = ids[rng() % ids.size()];
    else
      victim.to = ids[rng() % ids.size()];
    if (victim.from == victim.to) continue;

    const Stage& from = model.stages.at(victim.from);
    const Stage& to = model.stages.at(victim.to);
    bool legal = oracle::legality_table(from.kind, to.kind,
                                        from.owner == to.owner);
    Diagnostics diags = validate(model);
    bool flagged = false;
    for (const auto& diag : diags)
      if (diag.code == "IllegalFlow") flagged = true;
    CAPTURE(victim.from);
    CAPTURE(victim.to);
    if (!legal) {
      CHECK(flagged);
      illegal_seen++;
    } else {
      CHECK_FALSE(flagged);
    }
  }
  CHECK(illegal_seen > 100);  // the fuzz actually exercised the table
}
