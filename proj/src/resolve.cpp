#include <utility>

#include "tml/analyzer.hpp"

namespace tml {

namespace {

class Resolver {
 public:
  explicit Resolver(const Ast& ast) : ast_(ast) {}

  ResolveResult run() {
    // Machines first so arc and region paths can see every declaration
    // regardless of file order.
    for (const auto& decl : ast_.decls)
      if (const auto* m = std::get_if<AstMachine>(&decl))
        add_machine(*m, kNoElement);
    for (const auto& decl : ast_.decls) {
      if (const auto* arc = std::get_if<AstArc>(&decl)) {
        add_arc(*arc);
      } else if (const auto* ev = std::get_if<AstEvent>(&decl)) {
        add_event(*ev);
      } else if (const auto* b = std::get_if<AstBehavior>(&decl)) {
        builder_.declare_behavior(b->span);
        for (const auto& e : b->edges)
          builder_.add_behavior_edge(e.from, e.to, e.span);
      }
    }
    ResolveResult result;
    StaticModel model = builder_.build(diags_);
    sort_diagnostics(diags_);
    result.diagnostics = std::move(diags_);
    if (!has_errors(result.diagnostics)) result.model = std::move(model);
    return result;
  }

 private:
  void error(std::string code, std::string message, Span span) {
    diags_.push_back(
        Diagnostic{Severity::Error, std::move(code), std::move(message), span,
                   {}});
  }

  void add_machine(const AstMachine& m, ElementId parent) {
    ElementId id =
        builder_.add_machine(parent, m.name, m.label.value_or(""), m.span);
    machine_names_.push_back({parent, m.name, id});
    for (const auto& item : m.items) {
      if (const auto* stage = std::get_if<AstStage>(&item.node)) {
        ElementId sid = builder_.add_stage(id, stage->kind,
                                           stage->label.value_or(""),
                                           stage->span);
        stage_slots_.push_back({id, stage->kind, sid});
      } else if (const auto* store = std::get_if<AstStore>(&item.node)) {
        builder_.add_store(id, store->name, store->span);
      } else {
        add_machine(std::get<AstMachine>(item.node), id);
      }
    }
  }

  // Machine path ending in a stage keyword -> stage id, or 0 with an error.
  ElementId resolve_stage_path(const AstPath& path) {
    const auto& segs = path.segments;
    if (segs.size() < 2) {
      error("N4", "'" + segs.front().text +
                      "' does not name a stage; expected a machine path "
                      "followed by a stage keyword",
            path.span);
      return kNoElement;
    }
    auto kind = stage_kind_from(segs.back().text);
    if (!kind) {
      error("N4", "'" + segs.back().text + "' is not a stage keyword",
            segs.back().span);
      return kNoElement;
    }
    ElementId machine = resolve_machine_chain(segs, segs.size() - 1);
    if (machine == kNoElement) return kNoElement;
    ElementId stage = find_stage(machine, *kind);
    if (stage == kNoElement) {
      error("N1", "machine '" + segs[segs.size() - 2].text + "' has no " +
                      segs.back().text + " stage",
            segs.back().span);
    }
    return stage;
  }

  ElementId resolve_machine_chain(const std::vector<AstPathSegment>& segs,
                                  std::size_t count) {
    ElementId current = kNoElement;
    for (std::size_t i = 0; i < count; ++i) {
      ElementId next = find_child(current, segs[i].text);
      if (next == kNoElement) {
        if (i == 0) {
          error("N1", "unresolved machine '" + segs[i].text + "'",
                segs[i].span);
        } else {
          error("N1", "machine '" + segs[i - 1].text +
                          "' has no nested machine '" + segs[i].text + "'",
                segs[i].span);
        }
        return kNoElement;
      }
      current = next;
    }
    return current;
  }

  void add_arc(const AstArc& arc) {
    ElementId src = resolve_stage_path(arc.src);
    ElementId dst = resolve_stage_path(arc.dst);
    if (src == kNoElement || dst == kNoElement) return;
    ElementId id =
        builder_.add_arc(arc.trigger ? ArcKind::Trigger : ArcKind::Flow, src,
                         dst, arc.name.value_or(""), arc.label.value_or(""),
                         arc.span);
    if (arc.name) arc_names_.push_back({*arc.name, id});
  }

  void add_event(const AstEvent& ev) {
    std::vector<ElementId> members;
    for (const auto& ref : ev.region) {
      if (ref.segments.size() == 1) {
        ElementId arc = find_arc(ref.segments.front().text);
        if (arc == kNoElement) {
          error("N1", "unresolved arc name '" + ref.segments.front().text +
                          "' in region of event '" + ev.id + "'",
                ref.span);
          continue;
        }
        members.push_back(arc);
      } else {
        ElementId stage = resolve_stage_path(ref);
        if (stage != kNoElement) members.push_back(stage);
      }
    }
    builder_.add_event(ev.id, ev.label.value_or(""), std::move(members),
                       ev.time.value_or(""), ev.id_span);
  }

  // The resolver keeps its own name indexes because StaticModel lookups only
  // work after build(). First declaration wins on duplicates; the builder
  // reports those separately.
  ElementId find_child(ElementId parent, const std::string& name) const {
    for (const auto& entry : machine_names_)
      if (entry.parent == parent && entry.name == name) return entry.id;
    return kNoElement;
  }

  ElementId find_stage(ElementId machine, StageKind kind) const {
    for (const auto& slot : stage_slots_)
      if (slot.machine == machine && slot.kind == kind) return slot.id;
    return kNoElement;
  }

  ElementId find_arc(const std::string& name) const {
    for (const auto& entry : arc_names_)
      if (entry.name == name) return entry.id;
    return kNoElement;
  }

  struct MachineName {
    ElementId parent;
    std::string name;
    ElementId id;
  };
  struct StageSlot {
    ElementId machine;
    StageKind kind;
    ElementId id;
  };
  struct ArcName {
    std::string name;
    ElementId id;
  };

  const Ast& ast_;
  ModelBuilder builder_;
  std::vector<Diagnostic> diags_;
  std::vector<MachineName> machine_names_;
  std::vector<StageSlot> stage_slots_;
  std::vector<ArcName> arc_names_;
};

}  // namespace

ResolveResult resolve(const Ast& ast) { return Resolver(ast).run(); }

}  // namespace tml
