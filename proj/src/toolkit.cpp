#include "tmkit/toolkit.hpp"

namespace tmkit {

Analysis analyze(const Document& doc, bool allow_multi_component) {
  if (!doc.partition)
    throw AnalysisError("NoPartition",
                        "document declares no change regions");
  Analysis analysis;
  analysis.dag =
      derive_precedence(doc.model, *doc.partition,
                        {.allow_multi_component = allow_multi_component});

  std::vector<EventSpec> specs = doc.events;
  if (specs.empty()) {
    // Untimed models lift every region to a zero-duration event of the
    // same name.
    for (const auto& region : doc.partition->regions)
      specs.push_back({region.id, region.id, std::nullopt});
  }
  analysis.dynamic = lift_to_events(*doc.partition, specs);
  analysis.behavior = build_behavior(analysis.dynamic, analysis.dag,
                                     doc.repeats, doc.branches,
                                     doc.behavior_edges);
  analysis.region_to_event = analysis.dynamic.region_to_event();
  return analysis;
}

}  // namespace tmkit
