#pragma once

#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tml/model.hpp"

namespace tml {

// Ordered pair of event ids: `before` must not fire after `after`'s first
// firing.
struct EventPair {
  ElementId before = kNoElement;
  ElementId after = kNoElement;

  friend auto operator<=>(const EventPair&, const EventPair&) = default;
};

// Inferred partial order over events, justified by the arcs that cross from
// one event's region into another's.
struct PrecedenceRelation {
  std::vector<EventPair> pairs;  // sorted, unique
  std::map<EventPair, std::vector<ElementId>> justification;  // arc ids

  bool contains(ElementId before, ElementId after) const;
  // Arc ids justifying (before, after); nullptr when the pair is absent.
  const std::vector<ElementId>* arcs_for(ElementId before,
                                         ElementId after) const;
};

// (E, F) is inferred iff E != F and some arc runs from a stage in E's region
// to a stage in F's region, unless that arc lies wholly inside both regions
// (shared sub-diagrams order nothing).
PrecedenceRelation infer_dependencies(const StaticModel& model);

struct BehaviorCheckOptions {
  bool acyclic = false;  // promote declared cycles to errors (B3)
};

// Checks the declared chronology against the inferred precedence relation:
// B1 (error)   declared edge E->F while (F, E) is inferred
// B2 (warning) inferred pair (E, F) with no declared path E to F
// B3 (error)   declared cycle, only when options.acyclic is set
std::vector<Diagnostic> validate_behavior(
    const StaticModel& model, const BehaviorCheckOptions& options = {});

struct LinearizeResult {
  std::vector<std::string> order;  // every declared event, topologically
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

// Deterministic topological order of the declared chronology. Ties are broken
// by ascending lexicographic event id; a cycle yields one B3 error naming it.
LinearizeResult linearize(const BehaviorGraph& behavior);

// A thing moving through the model. Minted by a create stage, carried from
// machine to machine by transfer-to-transfer flows.
struct SimToken {
  std::string id;                    // "T1", "T2", ... in mint order
  ElementId birth_stage = kNoElement;
  ElementId location = kNoElement;   // machine currently holding the token
  int processed = 0;                 // times a process stage has seen it
  bool ready = false;                // released, eligible to move
  bool awaiting = false;             // moved, not yet admitted by receive
};

struct TraceLine {
  int step = 0;
  std::string event;
  std::string stage;   // dotted path of the firing stage
  std::string action;  // fired | minted | moved | received | processed
  std::string token;   // token id, "-" when none
};

// Token census taken after each event finishes firing.
struct LedgerEntry {
  std::string event;
  std::map<ElementId, int> per_machine;  // machine id -> tokens held
  int total = 0;
  int creates = 0;  // create firings so far
};

struct EventTrace {
  std::vector<TraceLine> lines;
  std::vector<LedgerEntry> ledger;
  std::vector<SimToken> final_tokens;
  std::vector<Diagnostic> diagnostics;  // S1 starvation, S2 late trigger,
                                        // S3 unknown schedule entry
  int create_firings = 0;
};

// Fires the scheduled events in order. Within an event, region stages fire in
// intra-region dependency order (cyclic groups fall back to declaration
// order): create mints a token, release marks the machine's tokens ready,
// transfer moves ready tokens across boundary flows belonging to the region,
// receive admits them, process counts them. Triggers move nothing but warn
// when their target's event has already fired.
EventTrace simulate(const StaticModel& model,
                    std::span<const std::string> schedule);

// One line per firing:
// `step=<n> event=<id> stage=<path> action=<verb> token=<id>`
std::string trace_to_text(const EventTrace& trace);

}  // namespace tml
