#include <json.hpp>

#include "tmkit/export.hpp"

namespace tmkit {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

Json guard_to_json(const GuardExpr& guard) {
  Json terms = Json::array();
  for (const auto& term : guard.terms) {
    terms.push_back({{"measurement", term.measurement},
                     {"op", std::string(to_string(term.op))},
                     {"threshold", term.threshold}});
  }
  return terms;
}

GuardExpr guard_from_json(const Json& terms) {
  GuardExpr guard;
  for (const auto& term : terms) {
    GuardComparison cmp;
    cmp.measurement = term.at("measurement").get<std::string>();
    std::string op = term.at("op").get<std::string>();
    if (op == "<") cmp.op = CompareOp::Lt;
    else if (op == "<=") cmp.op = CompareOp::Le;
    else if (op == ">") cmp.op = CompareOp::Gt;
    else if (op == ">=") cmp.op = CompareOp::Ge;
    else if (op == "==") cmp.op = CompareOp::Eq;
    else throw ExportError("MalformedJson", "unknown guard operator '" + op + "'");
    cmp.threshold = term.at("threshold").get<double>();
    guard.terms.push_back(cmp);
  }
  return guard;
}

Json point_name(TimePoint p) { return std::string(to_string(p)); }

TimePoint point_from(const std::string& name) {
  if (name == "start") return TimePoint::Start;
  if (name == "finish") return TimePoint::Finish;
  throw ExportError("MalformedJson", "unknown time point '" + name + "'");
}

}  // namespace

std::string to_json(const Document& doc) {
  Json root;
  root["tm_schema"] = kSchemaVersion;
  root["name"] = doc.model.name;

  Json thimacs = Json::array();
  for (const auto& id : doc.model.thimac_order) {
    const Thimac& thimac = doc.model.thimacs.at(id);
    Json entry{{"id", id}, {"name", thimac.name}};
    entry["parent"] = thimac.parent ? Json(*thimac.parent) : Json(nullptr);
    thimacs.push_back(entry);
  }
  root["thimacs"] = thimacs;

  Json stages = Json::array();
  for (const auto& id : doc.model.thimac_order) {
    for (const auto& stage_id : doc.model.thimacs.at(id).stages) {
      const Stage& stage = *doc.model.find_stage(stage_id);
      Json entry{{"id", stage.id},
                 {"kind", std::string(to_string(stage.kind))},
                 {"owner", stage.owner},
                 {"label", stage.label}};
      entry["anchor"] = stage.anchor ? Json(*stage.anchor) : Json(nullptr);
      stages.push_back(entry);
    }
  }
  root["stages"] = stages;

  Json flows = Json::array();
  for (const auto& edge : doc.model.flows)
    flows.push_back({{"from", edge.from}, {"to", edge.to}});
  root["flows"] = flows;

  Json triggers = Json::array();
  for (const auto& edge : doc.model.triggers) {
    Json entry{{"from", edge.from}, {"to", edge.to}};
    entry["join"] = edge.join ? Json(*edge.join) : Json(nullptr);
    triggers.push_back(entry);
  }
  root["triggers"] = triggers;

  if (doc.partition) {
    Json regions = Json::array();
    for (const auto& region : doc.partition->regions) {
      Json stages_array = Json::array();
      for (const auto& stage : region.stages) stages_array.push_back(stage);
      regions.push_back({{"id", region.id}, {"stages", stages_array}});
    }
    root["regions"] = regions;
  } else {
    root["regions"] = nullptr;
  }

  Json events = Json::array();
  for (const auto& event : doc.events) {
    Json entry{{"id", event.id}, {"region", event.region}};
    entry["duration_us"] =
        event.duration ? Json(event.duration->micros) : Json(nullptr);
    events.push_back(entry);
  }
  root["events"] = events;

  if (doc.has_behavior) {
    Json behavior;
    Json edges = Json::array();
    for (const auto& [from, to] : doc.behavior_edges)
      edges.push_back({{"from", from}, {"to", to}});
    behavior["edges"] = edges;
    behavior["repeats"] = doc.repeats;
    Json branches = Json::array();
    for (const auto& branch : doc.branches) {
      Json arms = Json::array();
      for (const auto& arm : branch.arms)
        arms.push_back({{"guard", guard_to_json(arm.guard)}, {"to", arm.to}});
      branches.push_back({{"at", branch.at},
                          {"arms", arms},
                          {"else_skip", branch.else_skip}});
    }
    behavior["branches"] = branches;
    root["behavior"] = behavior;
  } else {
    root["behavior"] = nullptr;
  }

  Json constraints = Json::array();
  for (const auto& c : doc.constraints) {
    constraints.push_back({{"later_event", c.later_event},
                           {"later_point", point_name(c.later_point)},
                           {"earlier_event", c.earlier_event},
                           {"earlier_point", point_name(c.earlier_point)},
                           {"max_separation_us", c.max_separation.micros},
                           {"warning_id", c.warning_id}});
  }
  root["constraints"] = constraints;

  Json scenarios = Json::array();
  for (const auto& scenario : doc.scenarios) {
    Json ticks = Json::array();
    for (const auto& tick : scenario.ticks) {
      Json measurements = Json::object();
      for (const auto& [name, value] : tick.measurements)
        measurements[name] = value;
      Json delays = Json::object();
      for (const auto& [event, delay] : tick.processing_delays)
        delays[event] = delay.micros;
      ticks.push_back({{"time_us", tick.time.micros},
                       {"measurements", measurements},
                       {"delays", delays}});
    }
    scenarios.push_back({{"name", scenario.name}, {"ticks", ticks}});
  }
  root["scenarios"] = scenarios;

  return root.dump(2) + "\n";
}

Document from_json(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ExportError("MalformedJson", e.what());
  }
  try {
    if (!root.contains("tm_schema") || root["tm_schema"] != kSchemaVersion)
      throw ExportError(
          "SchemaVersionMismatch",
          "expected tm_schema " + std::to_string(kSchemaVersion));

    ModelDecls decls;
    decls.name = root.at("name").get<std::string>();
    for (const auto& entry : root.at("thimacs")) {
      ThimacDecl decl;
      decl.id = entry.at("id").get<std::string>();
      decl.name = entry.at("name").get<std::string>();
      if (!entry.at("parent").is_null())
        decl.parent = entry.at("parent").get<std::string>();
      decls.thimacs.push_back(decl);
    }
    for (const auto& entry : root.at("stages")) {
      StageDecl decl;
      decl.id = entry.at("id").get<std::string>();
      auto kind = stage_kind_from(entry.at("kind").get<std::string>());
      if (!kind) throw ExportError("MalformedJson", "unknown stage kind");
      decl.kind = *kind;
      decl.owner = entry.at("owner").get<std::string>();
      decl.label = entry.at("label").get<std::string>();
      if (!entry.at("anchor").is_null())
        decl.anchor = entry.at("anchor").get<int>();
      decls.stages.push_back(decl);
    }
    for (const auto& entry : root.at("flows"))
      decls.flows.push_back({entry.at("from").get<std::string>(),
                             entry.at("to").get<std::string>()});
    for (const auto& entry : root.at("triggers")) {
      TriggerDecl decl{entry.at("from").get<std::string>(),
                       entry.at("to").get<std::string>(), std::nullopt};
      if (!entry.at("join").is_null())
        decl.join = entry.at("join").get<std::string>();
      decls.triggers.push_back(decl);
    }

    BuildResult built = build_model(decls);
    if (!built.ok())
      throw ExportError("MalformedJson",
                        "model in JSON violates invariants: " +
                            built.errors.front().message);

    Document doc;
    doc.model = std::move(built.model);

    if (!root.at("regions").is_null()) {
      ChangePartition partition;
      for (const auto& entry : root.at("regions")) {
        Region region;
        region.id = entry.at("id").get<std::string>();
        for (const auto& stage : entry.at("stages"))
          region.stages.insert(stage.get<std::string>());
        partition.regions.push_back(std::move(region));
      }
      doc.partition = std::move(partition);
    }

    for (const auto& entry : root.at("events")) {
      EventSpec spec;
      spec.id = entry.at("id").get<std::string>();
      spec.region = entry.at("region").get<std::string>();
      if (!entry.at("duration_us").is_null())
        spec.duration = TimeValue{entry.at("duration_us").get<std::int64_t>()};
      doc.events.push_back(std::move(spec));
    }

    if (!root.at("behavior").is_null()) {
      doc.has_behavior = true;
      const Json& behavior = root.at("behavior");
      for (const auto& entry : behavior.at("edges"))
        doc.behavior_edges.push_back({entry.at("from").get<std::string>(),
                                      entry.at("to").get<std::string>()});
      for (const auto& entry : behavior.at("repeats"))
        doc.repeats.insert(entry.get<std::string>());
      for (const auto& entry : behavior.at("branches")) {
        Branch branch;
        branch.at = entry.at("at").get<std::string>();
        for (const auto& arm : entry.at("arms"))
          branch.arms.push_back({guard_from_json(arm.at("guard")),
                                 arm.at("to").get<std::string>()});
        branch.else_skip = entry.at("else_skip").get<bool>();
        doc.branches.push_back(std::move(branch));
      }
    }

    for (const auto& entry : root.at("constraints")) {
      WapConstraint c;
      c.later_event = entry.at("later_event").get<std::string>();
      c.later_point = point_from(entry.at("later_point").get<std::string>());
      c.earlier_event = entry.at("earlier_event").get<std::string>();
      c.earlier_point =
          point_from(entry.at("earlier_point").get<std::string>());
      c.max_separation =
          TimeValue{entry.at("max_separation_us").get<std::int64_t>()};
      c.warning_id = entry.at("warning_id").get<std::string>();
      doc.constraints.push_back(std::move(c));
    }

    for (const auto& entry : root.at("scenarios")) {
      Scenario scenario;
      scenario.name = entry.at("name").get<std::string>();
      for (const auto& tick_entry : entry.at("ticks")) {
        ScenarioTick tick;
        tick.time = TimeValue{tick_entry.at("time_us").get<std::int64_t>()};
        for (const auto& [name, value] :
             tick_entry.at("measurements").items())
          tick.measurements[name] = value.get<double>();
        for (const auto& [event, delay] : tick_entry.at("delays").items())
          tick.processing_delays[event] =
              TimeValue{delay.get<std::int64_t>()};
        scenario.ticks.push_back(std::move(tick));
      }
      doc.scenarios.push_back(std::move(scenario));
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ExportError("MalformedJson", e.what());
  }
}

}  // namespace tmkit
