#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tmkit {

// Identifiers are path-like strings ("Human.Living.Heart"); stage ids append
// the stage kind ("Human.Living.Heart.create"). They stay stable across model
// edits, which is what makes a thimac "the same thimac" over time.
using ThimacId = std::string;
using StageId = std::string;

enum class StageKind { Create, Receive, Process, Release, Transfer };

inline constexpr std::array<StageKind, 5> kStageKinds = {
    StageKind::Create, StageKind::Receive, StageKind::Process,
    StageKind::Release, StageKind::Transfer};

std::string_view to_string(StageKind kind);
std::optional<StageKind> stage_kind_from(std::string_view text);

struct Stage {
  StageId id;
  StageKind kind = StageKind::Create;
  ThimacId owner;
  std::string label;            // free-text annotation, may be empty
  std::optional<int> anchor;    // circled figure number, for traceability

  bool operator==(const Stage&) const = default;
};

struct Thimac {
  ThimacId id;
  std::string name;
  std::optional<ThimacId> parent;
  std::vector<ThimacId> children;  // declaration order
  std::vector<StageId> stages;     // canonical: sorted by stage kind

  bool operator==(const Thimac&) const = default;
};

struct FlowEdge {
  StageId from;
  StageId to;

  bool operator==(const FlowEdge&) const = default;
  auto operator<=>(const FlowEdge&) const = default;
};

struct TriggerEdge {
  StageId from;
  StageId to;
  std::optional<std::string> join;  // AND-join group (the thick-bar notation)

  bool operator==(const TriggerEdge&) const = default;
  auto operator<=>(const TriggerEdge&) const = default;
};

// The static model S: an atemporal structure of thimacs, stages, flows and
// triggers. Immutable after build_model; no time values appear anywhere.
struct StaticModel {
  std::string name;
  std::map<ThimacId, Thimac> thimacs;
  std::vector<ThimacId> thimac_order;  // every thimac id, pre-order
  std::map<StageId, Stage> stages;
  std::vector<FlowEdge> flows;         // canonical: sorted
  std::vector<TriggerEdge> triggers;   // canonical: sorted

  const Thimac* find_thimac(const ThimacId& id) const;
  const Stage* find_stage(const StageId& id) const;
  std::vector<ThimacId> roots() const;

  bool operator==(const StaticModel&) const = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string location;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

using Diagnostics = std::vector<Diagnostic>;

bool has_errors(const Diagnostics& diags);

// Declarations consumed by build_model. The DSL parser and the JSON importer
// both reduce to these.
struct ThimacDecl {
  ThimacId id;
  std::string name;
  std::optional<ThimacId> parent;
};

struct StageDecl {
  StageId id;
  StageKind kind = StageKind::Create;
  ThimacId owner;
  std::string label;
  std::optional<int> anchor;
};

struct FlowDecl {
  StageId from;
  StageId to;
};

struct TriggerDecl {
  StageId from;
  StageId to;
  std::optional<std::string> join;
};

struct ModelDecls {
  std::string name;
  std::vector<ThimacDecl> thimacs;
  std::vector<StageDecl> stages;
  std::vector<FlowDecl> flows;
  std::vector<TriggerDecl> triggers;
};

struct BuildResult {
  StaticModel model;
  Diagnostics errors;

  bool ok() const { return errors.empty(); }
};

// Links declarations into a StaticModel, accumulating every problem found
// rather than stopping at the first.
BuildResult build_model(const ModelDecls& decls);

// The flow legality table. Total over all kind pairs.
//   same thimac:  Create->{Process,Release}, Receive->{Process,Release},
//                 Process->{Create,Release}, Release->{Transfer}
//   cross thimac: Transfer->Transfer, Transfer->Receive
// Everything else is illegal.
bool stage_adjacency_legal(StageKind from, StageKind to, bool same_thimac);

// Re-checks every invariant on a built model. Errors for structural
// violations; MULTI_COMPONENT warning when the flow+trigger graph (over
// stages that participate in any edge) has more than one weak component.
Diagnostics validate(const StaticModel& model);

bool is_valid_identifier_path(std::string_view path);

}  // namespace tmkit
