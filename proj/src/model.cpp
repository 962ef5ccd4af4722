#include "tml/model.hpp"

#include <algorithm>

namespace tml {

namespace {

void sort_unique(std::vector<ElementId>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

bool sorted_contains(const std::vector<ElementId>& ids, ElementId id) {
  return std::binary_search(ids.begin(), ids.end(), id);
}

}  // namespace

const MachineNode* StaticModel::machine(ElementId id) const {
  auto it = machine_index_.find(id);
  return it == machine_index_.end() ? nullptr : &machines[it->second];
}

const Stage* StaticModel::stage(ElementId id) const {
  auto it = stage_index_.find(id);
  return it == stage_index_.end() ? nullptr : &stages[it->second];
}

const Arc* StaticModel::arc(ElementId id) const {
  auto it = arc_index_.find(id);
  return it == arc_index_.end() ? nullptr : &arcs[it->second];
}

const EventDef* StaticModel::event(ElementId id) const {
  auto it = event_index_.find(id);
  return it == event_index_.end() ? nullptr : &events[it->second];
}

const EventDef* StaticModel::event_named(std::string_view name) const {
  for (const auto& ev : events)
    if (ev.name == name) return &ev;
  return nullptr;
}

const Arc* StaticModel::arc_named(std::string_view name) const {
  if (name.empty()) return nullptr;
  for (const auto& a : arcs)
    if (a.name == name) return &a;
  return nullptr;
}

std::optional<ElementKind> StaticModel::kind_of(ElementId id) const {
  if (machine_index_.count(id)) return ElementKind::Machine;
  if (stage_index_.count(id)) return ElementKind::Stage;
  if (arc_index_.count(id)) return ElementKind::Arc;
  if (event_index_.count(id)) return ElementKind::Event;
  return std::nullopt;
}

Span StaticModel::span_of(ElementId id) const {
  auto it = spans.find(id);
  return it == spans.end() ? Span{} : it->second;
}

ElementId StaticModel::top_ancestor(ElementId machine_id) const {
  const MachineNode* m = machine(machine_id);
  while (m && m->parent != kNoElement) m = machine(m->parent);
  return m ? m->id : kNoElement;
}

void StaticModel::reindex() {
  machine_index_.clear();
  stage_index_.clear();
  arc_index_.clear();
  event_index_.clear();
  for (std::size_t i = 0; i < machines.size(); ++i)
    machine_index_[machines[i].id] = i;
  for (std::size_t i = 0; i < stages.size(); ++i)
    stage_index_[stages[i].id] = i;
  for (std::size_t i = 0; i < arcs.size(); ++i) arc_index_[arcs[i].id] = i;
  for (std::size_t i = 0; i < events.size(); ++i)
    event_index_[events[i].id] = i;
}

ElementId ModelBuilder::add_machine(ElementId parent, std::string name,
                                    std::string label, Span span) {
  MachineNode m;
  m.id = next_id_++;
  m.name = std::move(name);
  m.label = std::move(label);
  m.parent = parent;
  model_.spans[m.id] = span;
  if (parent == kNoElement) {
    model_.roots.push_back(m.id);
  } else {
    for (auto& cand : model_.machines)
      if (cand.id == parent) cand.children.push_back(m.id);
  }
  model_.machines.push_back(std::move(m));
  return model_.machines.back().id;
}

ElementId ModelBuilder::add_stage(ElementId machine, StageKind kind,
                                  std::string label, Span span) {
  Stage s;
  s.id = next_id_++;
  s.owner = machine;
  s.kind = kind;
  s.label = std::move(label);
  model_.spans[s.id] = span;
  model_.stages.push_back(s);
  return s.id;
}

void ModelBuilder::add_store(ElementId machine, std::string name, Span span) {
  for (auto& m : model_.machines) {
    if (m.id != machine) continue;
    for (const auto& existing : m.stores) {
      if (existing == name) {
        own_diags_.push_back(Diagnostic{
            Severity::Error, "N6",
            "machine '" + m.name + "' already has a store named '" + name +
                "'",
            span,
            {}});
        return;
      }
    }
    m.stores.push_back(std::move(name));
    return;
  }
}

ElementId ModelBuilder::add_arc(ArcKind kind, ElementId src, ElementId dst,
                                std::string name, std::string label,
                                Span span) {
  Arc a;
  a.id = next_id_++;
  a.kind = kind;
  a.src = src;
  a.dst = dst;
  a.name = std::move(name);
  a.label = std::move(label);
  model_.spans[a.id] = span;
  model_.arcs.push_back(std::move(a));
  return model_.arcs.back().id;
}

ElementId ModelBuilder::add_event(std::string name, std::string label,
                                  std::vector<ElementId> region,
                                  std::string time, Span span) {
  EventDef ev;
  ev.id = next_id_++;
  ev.name = std::move(name);
  ev.label = std::move(label);
  ev.time = std::move(time);
  model_.spans[ev.id] = span;
  // Region members are partitioned into stages and arcs once the model is
  // assembled in build(); hold them in region_stages until then.
  ev.region_stages = std::move(region);
  model_.events.push_back(std::move(ev));
  return model_.events.back().id;
}

void ModelBuilder::declare_behavior(Span span) {
  if (!behavior_declared_) {
    behavior_declared_ = true;
    model_.behavior_span = span;
  }
}

void ModelBuilder::add_behavior_edge(std::string from, std::string to,
                                     Span span) {
  behavior_declared_ = true;
  if (!model_.behavior_span.valid()) model_.behavior_span = span;
  if (!model_.behavior) model_.behavior.emplace();
  model_.behavior->edges.push_back(
      BehaviorEdge{std::move(from), std::move(to), span});
}

StaticModel ModelBuilder::build(std::vector<Diagnostic>& diags) {
  StaticModel model = std::move(model_);
  model.reindex();
  for (auto& d : own_diags_) diags.push_back(std::move(d));
  own_diags_.clear();

  auto error = [&](std::string code, std::string message, Span span) {
    diags.push_back(
        Diagnostic{Severity::Error, std::move(code), std::move(message), span,
                   {}});
  };

  // Duplicate sibling machine names.
  auto check_siblings = [&](const std::vector<ElementId>& ids) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const MachineNode* a = model.machine(ids[i]);
        const MachineNode* b = model.machine(ids[j]);
        if (a && b && a->name == b->name)
          error("N5", "duplicate machine name '" + b->name +
                          "' among siblings",
                model.span_of(b->id));
      }
    }
  };
  check_siblings(model.roots);
  for (const auto& m : model.machines) check_siblings(m.children);

  // Stage wiring: at most one stage per kind per machine, owners must exist.
  for (const auto& s : model.stages) {
    MachineNode* owner = nullptr;
    for (auto& m : model.machines)
      if (m.id == s.owner) owner = &m;
    if (!owner) {
      error("N7", "stage refers to a machine that is not in the model",
            model.span_of(s.id));
      continue;
    }
    ElementId& slot = owner->stages[static_cast<int>(s.kind)];
    if (slot != kNoElement) {
      error("N6", "machine '" + owner->name + "' already has a " +
                      std::string(stage_keyword(s.kind)) + " stage",
            model.span_of(s.id));
    } else {
      slot = s.id;
    }
  }

  // Arc endpoints must be stages and must differ.
  for (const auto& a : model.arcs) {
    if (!model.stage(a.src) || !model.stage(a.dst)) {
      error("N7", "arc endpoint is not a stage of this model",
            model.span_of(a.id));
      continue;
    }
    if (a.src == a.dst)
      error("N8", "arc connects a stage to itself", model.span_of(a.id));
  }

  // Duplicate arc names.
  for (std::size_t i = 0; i < model.arcs.size(); ++i) {
    if (model.arcs[i].name.empty()) continue;
    for (std::size_t j = i + 1; j < model.arcs.size(); ++j) {
      if (model.arcs[i].name == model.arcs[j].name)
        error("N3", "duplicate arc name '" + model.arcs[j].name + "'",
              model.span_of(model.arcs[j].id));
    }
  }

  // Duplicate event ids; split region members into stages vs named arcs.
  for (std::size_t i = 0; i < model.events.size(); ++i) {
    for (std::size_t j = i + 1; j < model.events.size(); ++j) {
      if (model.events[i].name == model.events[j].name)
        error("N2", "duplicate event id '" + model.events[j].name + "'",
              model.span_of(model.events[j].id));
    }
  }
  for (auto& ev : model.events) {
    std::vector<ElementId> members = std::move(ev.region_stages);
    ev.region_stages.clear();
    ev.region_arcs.clear();
    for (ElementId member : members) {
      if (model.stage(member)) {
        ev.region_stages.push_back(member);
      } else if (model.arc(member)) {
        ev.region_arcs.push_back(member);
      } else {
        error("N7", "event '" + ev.name +
                        "' region member is not a stage or arc of this model",
              model.span_of(ev.id));
      }
    }
    sort_unique(ev.region_stages);
    sort_unique(ev.region_arcs);
  }

  if (behavior_declared_ && !model.behavior) model.behavior.emplace();
  if (model.behavior) {
    model.behavior->nodes.clear();
    for (const auto& ev : model.events)
      model.behavior->nodes.push_back(ev.name);
  }

  model.reindex();
  return model;
}

std::string format_path(const StaticModel& model, ElementId id) {
  if (const MachineNode* m = model.machine(id)) {
    std::string path = m->name;
    while (m->parent != kNoElement) {
      m = model.machine(m->parent);
      if (!m) break;
      path = m->name + "." + path;
    }
    return path;
  }
  if (const Stage* s = model.stage(id)) {
    std::string owner = format_path(model, s->owner);
    if (owner.empty()) return "";
    return owner + "." + std::string(stage_keyword(s->kind));
  }
  if (const Arc* a = model.arc(id)) return a->name;  // "" when anonymous
  return "";
}

std::variant<ElementId, LookupError> lookup(const StaticModel& model,
                                            std::string_view path) {
  if (path.empty()) return LookupError{"empty path"};
  std::vector<std::string_view> segments;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= path.size(); ++i) {
    if (i == path.size() || path[i] == '.') {
      segments.push_back(path.substr(start, i - start));
      start = i + 1;
    }
  }
  for (auto seg : segments)
    if (seg.empty()) return LookupError{"empty path segment"};

  // Walk machines from the roots; the final segment may be a stage keyword.
  const MachineNode* current = nullptr;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    std::string_view seg = segments[i];
    bool last = i + 1 == segments.size();
    if (last && current) {
      if (auto kind = stage_kind_from(seg)) {
        ElementId stage = current->stages[static_cast<int>(*kind)];
        if (stage == kNoElement)
          return LookupError{"machine '" + current->name + "' has no " +
                             std::string(seg) + " stage"};
        return stage;
      }
    }
    const MachineNode* next = nullptr;
    if (current == nullptr) {
      for (ElementId root : model.roots) {
        const MachineNode* cand = model.machine(root);
        if (cand && cand->name == seg) next = cand;
      }
    } else {
      for (ElementId child : current->children) {
        const MachineNode* cand = model.machine(child);
        if (cand && cand->name == seg) next = cand;
      }
    }
    if (!next) {
      // A single unmatched segment may still be a named arc.
      if (segments.size() == 1) {
        if (const Arc* a = model.arc_named(seg)) return a->id;
      }
      if (current == nullptr)
        return LookupError{"unresolved machine '" + std::string(seg) + "'"};
      return LookupError{"machine '" + current->name + "' has no nested "
                         "machine '" + std::string(seg) + "'"};
    }
    current = next;
  }
  return current->id;
}

bool Region::contains_stage(ElementId id) const {
  return sorted_contains(stages, id);
}

bool Region::contains_arc(ElementId id) const {
  return sorted_contains(arcs, id);
}

std::optional<Region> induced_region(const StaticModel& model,
                                     std::span<const ElementId> members) {
  Region region;
  for (ElementId member : members) {
    if (model.stage(member)) {
      region.stages.push_back(member);
    } else if (model.arc(member)) {
      region.arcs.push_back(member);
    } else {
      return std::nullopt;
    }
  }
  sort_unique(region.stages);
  sort_unique(region.arcs);
  for (const auto& a : model.arcs) {
    if (!a.name.empty()) continue;  // named arcs join only by listing
    if (sorted_contains(region.stages, a.src) &&
        sorted_contains(region.stages, a.dst))
      region.arcs.push_back(a.id);
  }
  sort_unique(region.arcs);
  return region;
}

Region region_of(const StaticModel& model, const EventDef& event) {
  std::vector<ElementId> members = event.region_stages;
  members.insert(members.end(), event.region_arcs.begin(),
                 event.region_arcs.end());
  auto region = induced_region(model, members);
  return region ? *region : Region{};
}

}  // namespace tml
