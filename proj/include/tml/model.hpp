#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "tml/ast.hpp"
#include "tml/diagnostics.hpp"

namespace tml {

// Opaque element handle. Machines, stages, arcs and events share one id
// space; ids are assigned in declaration order starting at 1 and are unique
// model-wide. 0 is "no element".
using ElementId = uint32_t;
inline constexpr ElementId kNoElement = 0;

struct MachineNode {
  ElementId id = kNoElement;
  std::string name;
  std::string label;                       // "" if none
  ElementId parent = kNoElement;           // kNoElement for roots
  std::vector<ElementId> children;         // nested machines, declaration order
  std::array<ElementId, kStageKindCount> stages{};  // by StageKind, 0 = absent
  std::vector<std::string> stores;
};

struct Stage {
  ElementId id = kNoElement;
  ElementId owner = kNoElement;  // machine
  StageKind kind = StageKind::Create;
  std::string label;
};

enum class ArcKind { Flow, Trigger };

struct Arc {
  ElementId id = kNoElement;
  ArcKind kind = ArcKind::Flow;
  ElementId src = kNoElement;  // stage
  ElementId dst = kNoElement;  // stage
  std::string name;   // "" for anonymous arcs
  std::string label;  // "" if none
};

struct EventDef {
  ElementId id = kNoElement;
  std::string name;   // declared id, e.g. "E1"
  std::string label;
  std::vector<ElementId> region_stages;  // declared members, sorted, unique
  std::vector<ElementId> region_arcs;    // declared named-arc members
  std::string time;   // "" if none
};

struct BehaviorEdge {
  std::string from;
  std::string to;
  Span span;
};

// Declared chronology. Nodes are all declared event names in declaration
// order; edges may mention undeclared names until validation (R6) runs.
struct BehaviorGraph {
  std::vector<std::string> nodes;
  std::vector<BehaviorEdge> edges;
};

enum class ElementKind { Machine, Stage, Arc, Event };

class StaticModel {
 public:
  std::vector<MachineNode> machines;  // declaration order
  std::vector<Stage> stages;
  std::vector<Arc> arcs;
  std::vector<EventDef> events;
  std::vector<ElementId> roots;
  std::optional<BehaviorGraph> behavior;
  Span behavior_span;  // first behavior block, for chronology diagnostics
  std::unordered_map<ElementId, Span> spans;

  const MachineNode* machine(ElementId id) const;
  const Stage* stage(ElementId id) const;
  const Arc* arc(ElementId id) const;
  const EventDef* event(ElementId id) const;
  const EventDef* event_named(std::string_view name) const;
  const Arc* arc_named(std::string_view name) const;
  std::optional<ElementKind> kind_of(ElementId id) const;
  Span span_of(ElementId id) const;

  // Root ancestor of a machine (the machine itself if top-level).
  ElementId top_ancestor(ElementId machine_id) const;

  // Index rebuild; called by the builder after construction.
  void reindex();

 private:
  std::unordered_map<ElementId, std::size_t> machine_index_;
  std::unordered_map<ElementId, std::size_t> stage_index_;
  std::unordered_map<ElementId, std::size_t> arc_index_;
  std::unordered_map<ElementId, std::size_t> event_index_;
};

// Incremental model construction with the structural checks: duplicate
// sibling machine names, duplicate stage kinds in one machine, duplicate
// event ids and arc names, identical arc endpoints, dangling references.
// `build` always returns a model; callers that need a guaranteed-sound model
// must check the diagnostics first (resolve() does).
class ModelBuilder {
 public:
  ElementId add_machine(ElementId parent, std::string name, std::string label,
                        Span span);
  ElementId add_stage(ElementId machine, StageKind kind, std::string label,
                      Span span);
  void add_store(ElementId machine, std::string name, Span span);
  ElementId add_arc(ArcKind kind, ElementId src, ElementId dst,
                    std::string name, std::string label, Span span);
  ElementId add_event(std::string name, std::string label,
                      std::vector<ElementId> region, std::string time,
                      Span span);
  void declare_behavior(Span span);
  void add_behavior_edge(std::string from, std::string to, Span span);

  StaticModel build(std::vector<Diagnostic>& diags);

 private:
  StaticModel model_;
  ElementId next_id_ = 1;
  bool behavior_declared_ = false;
  std::vector<Diagnostic> own_diags_;
};

// Canonical dotted path for an element: machines as Root.Child...,
// stages as <machine path>.<stage keyword>, named arcs as their name.
// Events and anonymous arcs have no path; returns "".
std::string format_path(const StaticModel& model, ElementId id);

struct LookupError {
  std::string message;
};

// Resolves `M(.M)*`, `M(.M)*.<stage keyword>` or a named-arc identifier.
std::variant<ElementId, LookupError> lookup(const StaticModel& model,
                                            std::string_view path);

// A region: stage members plus the arcs that belong to the sub-diagram.
struct Region {
  std::vector<ElementId> stages;  // sorted, unique
  std::vector<ElementId> arcs;    // sorted, unique

  bool contains_stage(ElementId id) const;
  bool contains_arc(ElementId id) const;
};

// Region closure: the given members (stage ids and named-arc ids) plus every
// anonymous arc whose endpoints both lie in the member stage set. Named arcs
// join a region only by explicit listing. Monotone and idempotent. Returns
// nullopt if a member id is not a stage or arc of this model.
std::optional<Region> induced_region(const StaticModel& model,
                                     std::span<const ElementId> members);

// Closure of an event's declared region. The declared members came through
// resolution, so this cannot fail.
Region region_of(const StaticModel& model, const EventDef& event);

}  // namespace tml
