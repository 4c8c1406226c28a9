#include <charconv>
#include <sstream>

#include "tmkit/dsl.hpp"

namespace tmkit {

namespace {

// Shortest text that round-trips the double exactly.
std::string number_text(double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  std::string out(buffer, end);
  // Strip a trailing ".0"-style integer marker to_chars never emits; keep as is.
  return out;
}

std::string last_segment(const std::string& path) {
  auto dot = path.rfind('.');
  return dot == std::string::npos ? path : path.substr(dot + 1);
}

void write_thimac(std::ostringstream& out, const Document& doc,
                  const ThimacId& id, int depth) {
  const Thimac& thimac = *doc.model.find_thimac(id);
  std::string indent(2 * depth, ' ');
  out << indent << "thimac " << last_segment(id) << " {\n";
  for (const auto& stage_id : thimac.stages) {
    const Stage& stage = *doc.model.find_stage(stage_id);
    out << indent << "  " << to_string(stage.kind);
    if (!stage.label.empty()) out << " \"" << stage.label << "\"";
    if (stage.anchor) out << " @" << *stage.anchor;
    out << "\n";
  }
  for (const auto& child : thimac.children)
    write_thimac(out, doc, child, depth + 1);
  out << indent << "}\n";
}

}  // namespace

std::string serialize(const Document& doc) {
  std::ostringstream out;
  out << "model \"" << doc.model.name << "\"\n";

  for (const auto& id : doc.model.thimac_order) {
    if (doc.model.thimacs.at(id).parent) continue;  // nested under its parent
    out << "\n";
    write_thimac(out, doc, id, 0);
  }

  if (!doc.model.flows.empty()) out << "\n";
  for (const auto& edge : doc.model.flows)
    out << "flow " << edge.from << " -> " << edge.to << "\n";
  for (const auto& edge : doc.model.triggers) {
    out << "trigger " << edge.from << " --> " << edge.to;
    if (edge.join) out << " join " << *edge.join;
    out << "\n";
  }

  if (doc.partition && !doc.partition->regions.empty()) {
    out << "\n";
    for (const auto& region : doc.partition->regions) {
      out << "region " << region.id << " { ";
      bool first = true;
      for (const auto& stage : region.stages) {
        if (!first) out << ", ";
        out << stage;
        first = false;
      }
      out << " }\n";
    }
  }

  if (!doc.events.empty()) out << "\n";
  for (const auto& event : doc.events) {
    out << "event " << event.id << " region " << event.region;
    if (event.duration) out << " duration " << event.duration->text();
    out << "\n";
  }

  if (doc.has_behavior) {
    out << "\nbehavior {\n";
    for (const auto& [from, to] : doc.behavior_edges)
      out << "  " << from << " -> " << to << "\n";
    for (const auto& event : doc.repeats) out << "  repeat " << event << "\n";
    for (const auto& branch : doc.branches) {
      out << "  branch " << branch.at << " {";
      for (std::size_t i = 0; i < branch.arms.size(); ++i) {
        out << (i ? ", " : " ") << "when " << branch.arms[i].guard.text()
            << " -> " << branch.arms[i].to;
      }
      if (branch.else_skip) out << " else -> skip";
      out << " }\n";
    }
    out << "}\n";
  }

  if (!doc.constraints.empty()) out << "\n";
  for (const auto& c : doc.constraints) {
    out << "wap " << c.later_event << "." << to_string(c.later_point) << " - "
        << c.earlier_event << "." << to_string(c.earlier_point)
        << " <= " << c.max_separation.text();
    if (!c.warning_id.empty()) out << " warn " << c.warning_id;
    out << "\n";
  }

  for (const auto& scenario : doc.scenarios) {
    out << "\nscenario " << scenario.name << " {\n";
    for (const auto& tick : scenario.ticks) {
      out << "  tick " << tick.time.text() << " {\n";
      for (const auto& [name, value] : tick.measurements)
        out << "    " << name << " = " << number_text(value) << "\n";
      for (const auto& [event, delay] : tick.processing_delays)
        out << "    delay " << event << " " << delay.text() << "\n";
      out << "  }\n";
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace tmkit
