#include "tmkit/model.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace tmkit {

std::string_view to_string(StageKind kind) {
  switch (kind) {
    case StageKind::Create: return "create";
    case StageKind::Receive: return "receive";
    case StageKind::Process: return "process";
    case StageKind::Release: return "release";
    case StageKind::Transfer: return "transfer";
  }
  return "?";
}

std::optional<StageKind> stage_kind_from(std::string_view text) {
  for (StageKind k : kStageKinds) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

bool is_valid_identifier_path(std::string_view path) {
  if (path.empty()) return false;
  bool segment_start = true;
  for (char c : path) {
    if (c == '.') {
      if (segment_start) return false;  // empty segment
      segment_start = true;
      continue;
    }
    if (segment_start) {
      if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_'))
        return false;
      segment_start = false;
    } else if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
      return false;
    }
  }
  return !segment_start;
}

const Thimac* StaticModel::find_thimac(const ThimacId& id) const {
  auto it = thimacs.find(id);
  return it == thimacs.end() ? nullptr : &it->second;
}

const Stage* StaticModel::find_stage(const StageId& id) const {
  auto it = stages.find(id);
  return it == stages.end() ? nullptr : &it->second;
}

std::vector<ThimacId> StaticModel::roots() const {
  std::vector<ThimacId> out;
  for (const auto& id : thimac_order) {
    if (!thimacs.at(id).parent) out.push_back(id);
  }
  return out;
}

bool has_errors(const Diagnostics& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
    return d.severity == Severity::Error;
  });
}

bool stage_adjacency_legal(StageKind from, StageKind to, bool same_thimac) {
  if (same_thimac) {
    switch (from) {
      case StageKind::Create:
        return to == StageKind::Process || to == StageKind::Release;
      case StageKind::Receive:
        return to == StageKind::Process || to == StageKind::Release;
      case StageKind::Process:
        return to == StageKind::Create || to == StageKind::Release;
      case StageKind::Release:
        return to == StageKind::Transfer;
      case StageKind::Transfer:
        return false;
    }
    return false;
  }
  return from == StageKind::Transfer &&
         (to == StageKind::Transfer || to == StageKind::Receive);
}

namespace {

int kind_rank(StageKind k) {
  switch (k) {
    case StageKind::Create: return 0;
    case StageKind::Receive: return 1;
    case StageKind::Process: return 2;
    case StageKind::Release: return 3;
    case StageKind::Transfer: return 4;
  }
  return 5;
}

void add_error(Diagnostics& diags, std::string code, std::string location,
               std::string message) {
  diags.push_back({Severity::Error, std::move(code), std::move(location),
                   std::move(message)});
}

// Stages reachable over flow edges from `from`, directed.
bool flow_path_exists(const StaticModel& model, const StageId& from,
                      const StageId& to) {
  std::set<StageId> seen{from};
  std::deque<StageId> queue{from};
  while (!queue.empty()) {
    StageId cur = queue.front();
    queue.pop_front();
    if (cur == to) return true;
    for (const auto& edge : model.flows) {
      if (edge.from == cur && seen.insert(edge.to).second)
        queue.push_back(edge.to);
    }
  }
  return false;
}

void check_edges(const StaticModel& model, Diagnostics& diags) {
  for (const auto& edge : model.flows) {
    const Stage* from = model.find_stage(edge.from);
    const Stage* to = model.find_stage(edge.to);
    if (!from || !to) {
      add_error(diags, "UnknownReference", edge.from + "->" + edge.to,
                "flow references an undeclared stage");
      continue;
    }
    if (edge.from == edge.to) {
      add_error(diags, "IllegalFlow", edge.from, "flow may not be a self-loop");
      continue;
    }
    bool same = from->owner == to->owner;
    if (!stage_adjacency_legal(from->kind, to->kind, same)) {
      std::ostringstream msg;
      msg << "illegal flow " << to_string(from->kind) << " -> "
          << to_string(to->kind) << (same ? " within " : " across ")
          << (same ? from->owner : from->owner + " and " + to->owner);
      add_error(diags, "IllegalFlow", edge.from + "->" + edge.to, msg.str());
    }
  }
  for (const auto& trig : model.triggers) {
    const Stage* from = model.find_stage(trig.from);
    const Stage* to = model.find_stage(trig.to);
    if (!from || !to) {
      add_error(diags, "UnknownReference", trig.from + "-->" + trig.to,
                "trigger references an undeclared stage");
      continue;
    }
    if (trig.from == trig.to) {
      add_error(diags, "TriggerOverlapsFlow", trig.from,
                "trigger may not be a self-loop");
      continue;
    }
    if (flow_path_exists(model, trig.from, trig.to) ||
        flow_path_exists(model, trig.to, trig.from)) {
      add_error(diags, "TriggerOverlapsFlow", trig.from + "-->" + trig.to,
                "trigger endpoints are already connected by a flow path");
    }
  }
  // AND-join groups must converge on a single target stage.
  std::map<std::string, StageId> join_target;
  for (const auto& trig : model.triggers) {
    if (!trig.join) continue;
    auto [it, inserted] = join_target.emplace(*trig.join, trig.to);
    if (!inserted && it->second != trig.to) {
      add_error(diags, "JoinMismatch", *trig.join,
                "triggers in join group '" + *trig.join +
                    "' target different stages");
    }
  }
}

void check_forest(const StaticModel& model, Diagnostics& diags) {
  for (const auto& [id, thimac] : model.thimacs) {
    // Walk to the root; a repeated visit is a parent cycle.
    std::set<ThimacId> seen{id};
    const Thimac* cur = &thimac;
    while (cur->parent) {
      const Thimac* parent = model.find_thimac(*cur->parent);
      if (!parent) {
        add_error(diags, "UnknownReference", id,
                  "thimac parent '" + *cur->parent + "' is not declared");
        break;
      }
      if (!seen.insert(parent->id).second) {
        add_error(diags, "ForestViolation", id,
                  "thimac parent links form a cycle");
        break;
      }
      cur = parent;
    }
  }
}

void check_components(const StaticModel& model, Diagnostics& diags) {
  // Weak connectivity over flow+trigger edges, restricted to stages that
  // participate in at least one edge.
  std::map<StageId, StageId> parent;
  auto find = [&](StageId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](const StageId& a, const StageId& b) {
    if (!parent.count(a)) parent[a] = a;
    if (!parent.count(b)) parent[b] = b;
    parent[find(a)] = find(b);
  };
  for (const auto& e : model.flows)
    if (model.find_stage(e.from) && model.find_stage(e.to)) unite(e.from, e.to);
  for (const auto& e : model.triggers)
    if (model.find_stage(e.from) && model.find_stage(e.to)) unite(e.from, e.to);
  std::set<StageId> components;
  for (auto& [id, _] : parent) components.insert(find(id));
  if (components.size() > 1) {
    diags.push_back({Severity::Warning, "MULTI_COMPONENT", model.name,
                     "flow+trigger graph has " +
                         std::to_string(components.size()) +
                         " weakly connected components"});
  }
}

}  // namespace

BuildResult build_model(const ModelDecls& decls) {
  BuildResult result;
  StaticModel& model = result.model;
  Diagnostics& errors = result.errors;
  model.name = decls.name;

  for (const auto& decl : decls.thimacs) {
    if (!is_valid_identifier_path(decl.id)) {
      add_error(errors, "DuplicateId", decl.id,
                "'" + decl.id + "' is not a valid thimac identifier");
      continue;
    }
    Thimac thimac;
    thimac.id = decl.id;
    thimac.name = decl.name.empty() ? decl.id : decl.name;
    thimac.parent = decl.parent;
    if (!model.thimacs.emplace(decl.id, std::move(thimac)).second) {
      add_error(errors, "DuplicateId", decl.id,
                "thimac '" + decl.id + "' declared twice");
      continue;
    }
    model.thimac_order.push_back(decl.id);
  }
  for (const auto& id : model.thimac_order) {
    const auto& parent = model.thimacs.at(id).parent;
    if (!parent) continue;
    auto it = model.thimacs.find(*parent);
    if (it == model.thimacs.end()) {
      add_error(errors, "UnknownReference", id,
                "thimac parent '" + *parent + "' is not declared");
    } else {
      it->second.children.push_back(id);
    }
  }

  for (const auto& decl : decls.stages) {
    auto owner = model.thimacs.find(decl.owner);
    if (owner == model.thimacs.end()) {
      add_error(errors, "UnknownReference", decl.id,
                "stage owner '" + decl.owner + "' is not declared");
      continue;
    }
    Stage stage{decl.id, decl.kind, decl.owner, decl.label, decl.anchor};
    if (!model.stages.emplace(decl.id, std::move(stage)).second) {
      add_error(errors, "DuplicateId", decl.id,
                "stage '" + decl.id + "' declared twice");
      continue;
    }
    owner->second.stages.push_back(decl.id);
  }
  // Canonical stage order inside each thimac.
  for (auto& [_, thimac] : model.thimacs) {
    std::stable_sort(thimac.stages.begin(), thimac.stages.end(),
                     [&](const StageId& a, const StageId& b) {
                       return kind_rank(model.stages.at(a).kind) <
                              kind_rank(model.stages.at(b).kind);
                     });
  }

  for (const auto& decl : decls.flows) model.flows.push_back({decl.from, decl.to});
  for (const auto& decl : decls.triggers)
    model.triggers.push_back({decl.from, decl.to, decl.join});
  std::sort(model.flows.begin(), model.flows.end());
  model.flows.erase(std::unique(model.flows.begin(), model.flows.end()),
                    model.flows.end());
  std::sort(model.triggers.begin(), model.triggers.end());
  model.triggers.erase(
      std::unique(model.triggers.begin(), model.triggers.end()),
      model.triggers.end());

  check_forest(model, errors);
  check_edges(model, errors);
  return result;
}

Diagnostics validate(const StaticModel& model) {
  Diagnostics diags;
  for (const auto& [id, thimac] : model.thimacs) {
    if (!is_valid_identifier_path(id))
      add_error(diags, "DuplicateId", id, "invalid thimac identifier");
    for (const auto& stage_id : thimac.stages) {
      const Stage* stage = model.find_stage(stage_id);
      if (!stage) {
        add_error(diags, "UnknownReference", stage_id,
                  "thimac lists an undeclared stage");
      } else if (stage->owner != id) {
        add_error(diags, "ForestViolation", stage_id,
                  "stage appears in a thimac that does not own it");
      }
    }
  }
  for (const auto& [id, stage] : model.stages) {
    if (!model.find_thimac(stage.owner))
      add_error(diags, "UnknownReference", id,
                "stage owner '" + stage.owner + "' does not exist");
  }
  check_forest(model, diags);
  check_edges(model, diags);
  check_components(model, diags);
  return diags;
}

}  // namespace tmkit
