#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tml/analyzer.hpp"

namespace tml {

namespace {

// Small union-find over element ids.
class DisjointSets {
 public:
  void ensure(ElementId id) { parent_.try_emplace(id, id); }

  ElementId find(ElementId id) {
    ensure(id);
    ElementId root = id;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[id] != root) {
      ElementId next = parent_[id];
      parent_[id] = root;
      id = next;
    }
    return root;
  }

  void unite(ElementId a, ElementId b) { parent_[find(a)] = find(b); }

 private:
  std::map<ElementId, ElementId> parent_;
};

class Validator {
 public:
  Validator(const StaticModel& model, Strictness level,
            const ValidateOptions& options)
      : model_(model), level_(level), options_(options) {}

  std::vector<Diagnostic> run() {
    check_arc_legality();   // R1, R2, R3, R9
    check_reachability();   // R4
    check_origins();        // R5
    check_behavior_refs();  // R6
    check_regions();        // R7, R8
    sort_diagnostics(diags_);
    return diags_;
  }

 private:
  void report(Severity severity, const char* code, std::string message,
              Span span) {
    diags_.push_back(
        Diagnostic{severity, code, std::move(message), span, {}});
  }

  Severity demoted() const {
    return level_ == Strictness::Strict ? Severity::Error : Severity::Warning;
  }

  std::string arc_text(const Arc& a) const {
    std::string text = format_path(model_, a.src) +
                       (a.kind == ArcKind::Flow ? " -> " : " => ") +
                       format_path(model_, a.dst);
    if (!a.name.empty()) text += " (named '" + a.name + "')";
    return text;
  }

  void check_arc_legality() {
    for (const auto& a : model_.arcs) {
      const Stage* src = model_.stage(a.src);
      const Stage* dst = model_.stage(a.dst);
      if (!src || !dst) continue;  // builder already reported
      if (a.kind == ArcKind::Trigger) {
        if (dst->kind != StageKind::Create && dst->kind != StageKind::Process) {
          report(Severity::Error, "R3",
                 "trigger must target a create or process stage, but " +
                     arc_text(a) + " targets " +
                     std::string(stage_keyword(dst->kind)),
                 model_.span_of(a.id));
        }
        if (src->kind == StageKind::Transfer) {
          report(Severity::Warning, "R9",
                 "trigger departs from a transfer stage: " + arc_text(a),
                 model_.span_of(a.id));
        }
        continue;
      }
      FlowLegality legality = flow_legality(src->kind, dst->kind);
      if (src->owner == dst->owner) {
        if (legality != FlowLegality::LegalIntra) {
          report(Severity::Error, "R1",
                 "flow from " + std::string(stage_keyword(src->kind)) +
                     " to " + std::string(stage_keyword(dst->kind)) +
                     " is not a legal succession inside machine '" +
                     format_path(model_, src->owner) + "'",
                 model_.span_of(a.id));
        }
      } else {
        if (legality != FlowLegality::LegalInter) {
          report(Severity::Error, "R2",
                 "flow between machines must connect transfer to transfer; " +
                     arc_text(a) + " connects " +
                     std::string(stage_keyword(src->kind)) + " to " +
                     std::string(stage_keyword(dst->kind)),
                 model_.span_of(a.id));
        }
      }
    }
  }

  void check_reachability() {
    std::set<ElementId> touched;
    for (const auto& a : model_.arcs) {
      touched.insert(a.src);
      touched.insert(a.dst);
    }
    for (const auto& m : model_.machines) {
      int stage_count = 0;
      for (ElementId s : m.stages)
        if (s != kNoElement) ++stage_count;
      if (stage_count <= 1) continue;  // a sole stage is allowed to idle
      for (ElementId s : m.stages) {
        if (s == kNoElement || touched.count(s)) continue;
        report(demoted(), "R4",
               "stage '" + format_path(model_, s) +
                   "' participates in no arc",
               model_.span_of(s));
      }
    }
  }

  // Every flow-connected component needs a point of origin: a create stage,
  // or a transfer stage fed from another machine.
  void check_origins() {
    DisjointSets sets;
    for (const auto& s : model_.stages) sets.ensure(s.id);
    for (const auto& a : model_.arcs)
      if (a.kind == ArcKind::Flow && model_.stage(a.src) && model_.stage(a.dst))
        sets.unite(a.src, a.dst);

    std::set<ElementId> imported;  // transfer stages fed across a boundary
    for (const auto& a : model_.arcs) {
      if (a.kind != ArcKind::Flow) continue;
      const Stage* src = model_.stage(a.src);
      const Stage* dst = model_.stage(a.dst);
      if (src && dst && src->owner != dst->owner &&
          dst->kind == StageKind::Transfer)
        imported.insert(dst->id);
    }

    std::map<ElementId, std::vector<const Stage*>> components;
    for (const auto& s : model_.stages)
      components[sets.find(s.id)].push_back(&s);
    for (auto& [root, members] : components) {
      bool ok = false;
      for (const Stage* s : members)
        if (s->kind == StageKind::Create || imported.count(s->id)) ok = true;
      if (ok) continue;
      const Stage* rep = *std::min_element(
          members.begin(), members.end(),
          [](const Stage* a, const Stage* b) { return a->id < b->id; });
      report(demoted(), "R5",
             "nothing can originate here: the flow-connected part of the "
             "model around '" + format_path(model_, rep->id) +
                 "' has no create stage and no transfer fed from another "
                 "machine",
             model_.span_of(rep->id));
    }
  }

  void check_behavior_refs() {
    if (!model_.behavior) return;
    std::set<std::string> declared(model_.behavior->nodes.begin(),
                                   model_.behavior->nodes.end());
    for (const auto& e : model_.behavior->edges) {
      if (!declared.count(e.from))
        report(Severity::Error, "R6",
               "behavior references undeclared event '" + e.from + "'",
               e.span);
      if (!declared.count(e.to))
        report(Severity::Error, "R6",
               "behavior references undeclared event '" + e.to + "'", e.span);
      if (e.from == e.to)
        report(Severity::Error, "R6",
               "behavior edge loops event '" + e.from + "' back to itself",
               e.span);
    }
  }

  void check_regions() {
    for (const auto& ev : model_.events) {
      if (ev.region_stages.empty() && ev.region_arcs.empty()) {
        report(Severity::Error, "R7",
               "event '" + ev.name + "' has an empty region",
               model_.span_of(ev.id));
        continue;
      }
      Region region = region_of(model_, ev);
      // Connectivity of the sub-diagram: region stages plus the endpoints of
      // region arcs, joined (undirected) by region arcs.
      DisjointSets sets;
      std::set<ElementId> vertices(region.stages.begin(), region.stages.end());
      for (ElementId arc_id : region.arcs) {
        const Arc* a = model_.arc(arc_id);
        if (!a) continue;
        vertices.insert(a->src);
        vertices.insert(a->dst);
      }
      for (ElementId v : vertices) sets.ensure(v);
      for (ElementId arc_id : region.arcs) {
        const Arc* a = model_.arc(arc_id);
        if (a) sets.unite(a->src, a->dst);
      }
      std::set<ElementId> components;
      for (ElementId v : vertices) components.insert(sets.find(v));
      if (components.size() > 1) {
        Severity severity = (level_ == Strictness::Strict &&
                             options_.connected_regions)
                                ? Severity::Error
                                : Severity::Warning;
        std::ostringstream msg;
        msg << "event '" << ev.name << "' region splits into "
            << components.size() << " disconnected pieces";
        report(severity, "R8", msg.str(), model_.span_of(ev.id));
      }
    }
  }

  const StaticModel& model_;
  Strictness level_;
  ValidateOptions options_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

FlowLegality flow_legality(StageKind src, StageKind dst) {
  if (src == StageKind::Transfer && dst == StageKind::Transfer)
    return FlowLegality::LegalInter;
  static constexpr std::pair<StageKind, StageKind> kIntra[] = {
      {StageKind::Create, StageKind::Release},
      {StageKind::Create, StageKind::Process},
      {StageKind::Receive, StageKind::Process},
      {StageKind::Receive, StageKind::Release},
      {StageKind::Process, StageKind::Release},
      {StageKind::Release, StageKind::Transfer},
      {StageKind::Transfer, StageKind::Receive},
  };
  for (auto [a, b] : kIntra)
    if (a == src && b == dst) return FlowLegality::LegalIntra;
  return FlowLegality::Illegal;
}

std::vector<Diagnostic> validate(const StaticModel& model, Strictness level,
                                 const ValidateOptions& options) {
  return Validator(model, level, options).run();
}

}  // namespace tml
