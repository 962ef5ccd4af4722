#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tml/model.hpp"

namespace tml {

enum class RenderMode { Static, Dynamic, Behavior };
enum class RankDir { LR, TB };

struct RenderOptions {
  RenderMode mode = RenderMode::Static;
  RankDir rankdir = RankDir::LR;
  bool show_labels = true;  // include user-written label strings
  std::vector<std::string> highlight_events;  // dynamic mode only
};

struct RenderResult {
  std::string dot;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

// Machines become nested clusters, stages become nodes labeled with their
// kind, flow arcs are solid edges, trigger arcs dashed. Stores are listed in
// their machine's cluster label. Output is deterministic.
RenderResult render_static(const StaticModel& model,
                           const RenderOptions& opts = {});

// Static rendering plus event-region coloring: a node belonging to one event
// is filled with that event's palette color, shared nodes are striped with
// every owner's color, and each member node names its events on a second
// label line. A text legend sits in the graph label. Requires >= 1 event.
RenderResult render_dynamic(const StaticModel& model,
                            const RenderOptions& opts = {});

// One node per event (id plus label), one edge per declared chronology edge.
// Requires a behavior block.
RenderResult render_behavior(const StaticModel& model,
                             const RenderOptions& opts = {});

// Dispatch on opts.mode.
RenderResult render(const StaticModel& model, const RenderOptions& opts);

// Element counts, recomputed directly from the model.
struct Report {
  int machines = 0;
  std::array<int, kStageKindCount> stages_by_kind{};  // indexed by StageKind
  int flows = 0;
  int triggers = 0;
  int events = 0;
  int behavior_edges = 0;
  // Filled by callers that also ran diagnostics; not part of the JSON schema.
  int errors = 0;
  int warnings = 0;
};

Report summarize(const StaticModel& model);

// Stable schema and field order:
// {machines, stages{create,process,release,transfer,receive},
//  flows, triggers, events, behavior_edges}
nlohmann::ordered_json report_to_json(const Report& report);

}  // namespace tml
