#include <map>
#include <sstream>

#include "tmkit/export.hpp"

namespace tmkit {

namespace {

// Pastel fills cycling per region, index-stable.
const char* kRegionColors[] = {"#cfe2f3", "#d9ead3", "#fff2cc", "#f4cccc",
                               "#d9d2e9", "#fce5cd", "#d0e0e3", "#ead1dc"};

std::string quoted(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += "\"";
  return out;
}

std::string stage_label(const Stage& stage, bool show_anchors) {
  std::string label(to_string(stage.kind));
  if (!stage.label.empty()) label += "\\n" + stage.label;
  if (show_anchors && stage.anchor)
    label += " (" + std::to_string(*stage.anchor) + ")";
  return label;
}

void write_thimac_cluster(std::ostringstream& out, const Document& doc,
                          const ThimacId& id,
                          const std::map<StageId, std::string>& region_of,
                          const std::map<std::string, int>& region_index,
                          const ExportOptions& options, int depth) {
  const Thimac& thimac = *doc.model.find_thimac(id);
  std::string indent(2 * depth, ' ');
  out << indent << "subgraph " << quoted("cluster_" + id) << " {\n";
  out << indent << "  label=" << quoted(thimac.name) << ";\n";
  for (const auto& stage_id : thimac.stages) {
    const Stage& stage = *doc.model.find_stage(stage_id);
    out << indent << "  " << quoted(stage_id) << " [label="
        << quoted(stage_label(stage, options.show_anchors));
    auto region = region_of.find(stage_id);
    if (region != region_of.end()) {
      int index = region_index.at(region->second);
      out << ", fillcolor=" << quoted(kRegionColors[index % 8])
          << ", tooltip=" << quoted(region->second);
    }
    out << "];\n";
  }
  for (const auto& child : thimac.children)
    write_thimac_cluster(out, doc, child, region_of, region_index, options,
                         depth + 1);
  out << indent << "}\n";
}

std::string to_dot_structure(const Document& doc, const ExportOptions& options) {
  std::map<StageId, std::string> region_of;
  std::map<std::string, int> region_index;
  if (doc.partition) {
    int i = 0;
    for (const auto& region : doc.partition->regions) {
      region_index[region.id] = i++;
      for (const auto& stage : region.stages) region_of[stage] = region.id;
    }
  }
  std::map<std::string, std::string> event_of_region;
  if (options.target == ExportTarget::Dynamic) {
    for (const auto& event : doc.events) event_of_region[event.region] = event.id;
  }

  std::ostringstream out;
  out << "digraph " << quoted(doc.model.name) << " {\n";
  out << "  rankdir=" << (options.rankdir == RankDir::LR ? "LR" : "TB")
      << ";\n";
  out << "  node [shape=box, style=\"rounded,filled\", fillcolor=white];\n";
  for (const auto& id : doc.model.thimac_order) {
    if (doc.model.thimacs.at(id).parent) continue;
    write_thimac_cluster(out, doc, id, region_of, region_index, options, 1);
  }
  for (const auto& edge : doc.model.flows)
    out << "  " << quoted(edge.from) << " -> " << quoted(edge.to) << ";\n";
  for (const auto& edge : doc.model.triggers) {
    out << "  " << quoted(edge.from) << " -> " << quoted(edge.to)
        << " [style=dashed";
    if (edge.join) out << ", label=" << quoted(*edge.join);
    out << "];\n";
  }
  // Legend tying regions to their events in the dynamic view.
  if (options.target == ExportTarget::Dynamic && doc.partition) {
    for (const auto& region : doc.partition->regions) {
      auto event = event_of_region.find(region.id);
      if (event == event_of_region.end()) continue;
      const EventSpec* spec = nullptr;
      for (const auto& e : doc.events)
        if (e.id == event->second) spec = &e;
      std::string label = event->second + " = " + region.id;
      if (spec && spec->duration) label += " / " + spec->duration->text();
      out << "  " << quoted("legend_" + event->second) << " [shape=note, label="
          << quoted(label) << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string to_dot_behavior(const Document& doc, const ExportOptions& options) {
  // Rebuild B the same way the analysis pipeline does.
  if (!doc.partition)
    throw ExportError("NoPartition",
                      "behavior export requires a change partition");
  PrecedenceDag dag =
      derive_precedence(doc.model, *doc.partition, {.allow_multi_component = true});
  DynamicModel dynamic = lift_to_events(*doc.partition, doc.events);
  BehaviorModel behavior = build_behavior(dynamic, dag, doc.repeats,
                                          doc.branches, doc.behavior_edges);

  std::ostringstream out;
  out << "digraph " << quoted(doc.model.name + " behavior") << " {\n";
  out << "  rankdir=" << (options.rankdir == RankDir::LR ? "LR" : "TB")
      << ";\n";
  out << "  node [shape=ellipse];\n";
  for (const auto& event : behavior.events) {
    out << "  " << quoted(event);
    const EventSpec* spec = dynamic.find(event);
    std::string label = event;
    if (spec && spec->duration) label += "\\n" + spec->duration->text();
    out << " [label=" << quoted(label);
    if (behavior.repeats.count(event)) out << ", peripheries=2";
    out << "];\n";
  }
  std::map<std::pair<std::string, std::string>, std::string> arm_guard;
  for (const auto& branch : behavior.branches)
    for (const auto& arm : branch.arms)
      arm_guard[{branch.at, arm.to}] = arm.guard.text();
  for (const auto& edge : behavior.edges) {
    out << "  " << quoted(edge.first) << " -> " << quoted(edge.second);
    auto guard = arm_guard.find(edge);
    if (guard != arm_guard.end()) out << " [label=" << quoted(guard->second) << "]";
    out << ";\n";
    arm_guard.erase(edge);
  }
  // Arms that are not order edges render as dotted control links.
  for (const auto& [edge, guard] : arm_guard) {
    out << "  " << quoted(edge.first) << " -> " << quoted(edge.second)
        << " [style=dotted, label=" << quoted(guard) << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::string to_dot(const Document& doc, const ExportOptions& options) {
  if (options.target == ExportTarget::Behavior)
    return to_dot_behavior(doc, options);
  return to_dot_structure(doc, options);
}

}  // namespace tmkit
