#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "tml/events.hpp"

namespace tml {

namespace {

std::string arc_description(const StaticModel& model, const Arc& a) {
  return format_path(model, a.src) +
         (a.kind == ArcKind::Flow ? " -> " : " => ") +
         format_path(model, a.dst);
}

bool region_has(const std::vector<ElementId>& sorted_ids, ElementId id) {
  return std::binary_search(sorted_ids.begin(), sorted_ids.end(), id);
}

}  // namespace

bool PrecedenceRelation::contains(ElementId before, ElementId after) const {
  return std::binary_search(pairs.begin(), pairs.end(),
                            EventPair{before, after});
}

const std::vector<ElementId>* PrecedenceRelation::arcs_for(
    ElementId before, ElementId after) const {
  auto it = justification.find(EventPair{before, after});
  return it == justification.end() ? nullptr : &it->second;
}

PrecedenceRelation infer_dependencies(const StaticModel& model) {
  // Index: stage id -> events whose region declares it.
  std::map<ElementId, std::vector<const EventDef*>> owners;
  for (const auto& ev : model.events)
    for (ElementId s : ev.region_stages) owners[s].push_back(&ev);

  PrecedenceRelation rel;
  for (const auto& a : model.arcs) {
    auto src_it = owners.find(a.src);
    auto dst_it = owners.find(a.dst);
    if (src_it == owners.end() || dst_it == owners.end()) continue;
    for (const EventDef* e : src_it->second) {
      for (const EventDef* f : dst_it->second) {
        if (e->id == f->id) continue;
        // An arc lying wholly inside both regions is shared structure, not a
        // boundary crossing; it orders nothing.
        bool internal_to_both = region_has(e->region_stages, a.dst) &&
                                region_has(f->region_stages, a.src);
        if (internal_to_both) continue;
        rel.justification[EventPair{e->id, f->id}].push_back(a.id);
      }
    }
  }
  for (auto& [pair, arcs] : rel.justification) {
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    rel.pairs.push_back(pair);
  }
  // std::map iteration is already sorted and unique.
  return rel;
}

std::vector<Diagnostic> validate_behavior(const StaticModel& model,
                                          const BehaviorCheckOptions& options) {
  std::vector<Diagnostic> diags;
  if (!model.behavior) return diags;
  const BehaviorGraph& behavior = *model.behavior;

  PrecedenceRelation rel = infer_dependencies(model);

  // B1: a declared edge that runs against an inferred precedence.
  for (const auto& edge : behavior.edges) {
    const EventDef* from = model.event_named(edge.from);
    const EventDef* to = model.event_named(edge.to);
    if (!from || !to || from->id == to->id) continue;  // R6 territory
    if (!rel.contains(to->id, from->id)) continue;
    const std::vector<ElementId>& arcs = *rel.arcs_for(to->id, from->id);
    const Arc* witness = model.arc(arcs.front());
    std::ostringstream msg;
    msg << "declared edge '" << edge.from << " -> " << edge.to
        << "' contradicts the inferred precedence of '" << edge.to
        << "' before '" << edge.from << "'";
    Diagnostic d{Severity::Error, "B1", msg.str(), edge.span, {}};
    if (witness) {
      d.message += " (established by arc " + arc_description(model, *witness) +
                   ")";
      d.related.push_back(RelatedNote{"arc justifying the precedence",
                                      model.span_of(witness->id)});
    }
    diags.push_back(std::move(d));
  }

  // B2: inferred precedence the chronology never orders.
  std::map<std::string, std::vector<std::string>> adjacency;
  for (const auto& edge : behavior.edges)
    adjacency[edge.from].push_back(edge.to);
  auto declared_path = [&](const std::string& from, const std::string& to) {
    std::set<std::string> seen{from};
    std::deque<std::string> frontier{from};
    while (!frontier.empty()) {
      std::string at = frontier.front();
      frontier.pop_front();
      if (at == to && at != from) return true;
      auto it = adjacency.find(at);
      if (it == adjacency.end()) continue;
      for (const std::string& next : it->second) {
        if (next == to) return true;
        if (seen.insert(next).second) frontier.push_back(next);
      }
    }
    return false;
  };
  for (const EventPair& pair : rel.pairs) {
    const EventDef* before = model.event(pair.before);
    const EventDef* after = model.event(pair.after);
    if (!before || !after) continue;
    if (declared_path(before->name, after->name)) continue;
    std::ostringstream msg;
    msg << "inferred precedence '" << before->name << "' before '"
        << after->name << "' has no declared path in the chronology";
    diags.push_back(Diagnostic{Severity::Warning, "B2", msg.str(),
                               model.behavior_span, {}});
  }

  // B3: declared cycles, when the caller demands an acyclic chronology.
  if (options.acyclic) {
    LinearizeResult order = linearize(behavior);
    for (auto& d : order.diagnostics)
      if (d.severity == Severity::Error) diags.push_back(std::move(d));
  }

  sort_diagnostics(diags);
  return diags;
}

LinearizeResult linearize(const BehaviorGraph& behavior) {
  LinearizeResult result;
  std::set<std::string> declared(behavior.nodes.begin(), behavior.nodes.end());
  std::map<std::string, std::vector<std::string>> adjacency;
  std::map<std::string, int> indegree;
  for (const std::string& node : behavior.nodes) indegree[node];
  for (const auto& edge : behavior.edges) {
    if (!declared.count(edge.from) || !declared.count(edge.to))
      continue;  // undeclared endpoints are R6 errors, not ordering input
    adjacency[edge.from].push_back(edge.to);
    ++indegree[edge.to];
  }

  std::priority_queue<std::string, std::vector<std::string>,
                      std::greater<std::string>>
      ready;
  for (const auto& [node, degree] : indegree)
    if (degree == 0) ready.push(node);
  while (!ready.empty()) {
    std::string node = ready.top();
    ready.pop();
    result.order.push_back(node);
    for (const std::string& next : adjacency[node])
      if (--indegree[next] == 0) ready.push(next);
  }

  if (result.order.size() == indegree.size()) return result;

  // Some nodes never became ready, so a cycle exists among them. Every such
  // node still has an unprocessed predecessor; walking predecessors must
  // revisit a node, which pins down one cycle's members.
  std::set<std::string> remaining;
  for (const auto& [node, degree] : indegree)
    if (degree > 0) remaining.insert(node);
  result.order.clear();
  std::map<std::string, std::vector<std::string>> reverse;
  for (const auto& [from, targets] : adjacency)
    for (const std::string& to : targets)
      if (remaining.count(from) && remaining.count(to))
        reverse[to].push_back(from);
  std::vector<std::string> walk{*remaining.begin()};
  std::map<std::string, std::size_t> position{{walk.front(), 0}};
  std::set<std::string> loop_nodes;
  for (;;) {
    std::string prev;
    for (const std::string& candidate : reverse[walk.back()])
      if (prev.empty() || candidate < prev) prev = candidate;
    auto seen = position.find(prev);
    if (seen != position.end()) {
      loop_nodes.insert(walk.begin() + seen->second, walk.end());
      break;
    }
    position[prev] = walk.size();
    walk.push_back(prev);
  }
  // Present the cycle in forward direction, smallest member first.
  std::vector<std::string> forward{*loop_nodes.begin()};
  std::map<std::string, std::size_t> forward_position{{forward.front(), 0}};
  std::vector<std::string> cycle;
  for (;;) {
    std::string next;
    for (const std::string& candidate : adjacency[forward.back()])
      if (loop_nodes.count(candidate) && (next.empty() || candidate < next))
        next = candidate;
    auto seen = forward_position.find(next);
    if (seen != forward_position.end()) {
      cycle.assign(forward.begin() + seen->second, forward.end());
      cycle.push_back(next);  // close the loop textually: E2 -> E3 -> E2
      break;
    }
    forward_position[next] = forward.size();
    forward.push_back(next);
  }
  std::ostringstream msg;
  msg << "chronology contains a cycle: ";
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) msg << " -> ";
    msg << cycle[i];
  }
  Span span;
  for (const auto& edge : behavior.edges)
    if (edge.from == cycle[0] && edge.to == cycle[1]) {
      span = edge.span;
      break;
    }
  result.diagnostics.push_back(
      Diagnostic{Severity::Error, "B3", msg.str(), span, {}});
  return result;
}

namespace {

// Firing order of one region: topological over the arcs lying inside it, with
// mutually-dependent groups collapsed and fired in declaration order.
std::vector<ElementId> region_firing_order(const StaticModel& model,
                                           const Region& region) {
  const std::vector<ElementId>& nodes = region.stages;  // sorted ascending
  std::map<ElementId, std::vector<ElementId>> out;
  for (ElementId n : nodes) out[n];
  for (ElementId arc_id : region.arcs) {
    const Arc* a = model.arc(arc_id);
    if (!a) continue;
    if (region.contains_stage(a->src) && region.contains_stage(a->dst) &&
        a->src != a->dst)
      out[a->src].push_back(a->dst);
  }

  // Tarjan strongly-connected components.
  std::map<ElementId, int> index, low;
  std::set<ElementId> on_stack;
  std::vector<ElementId> stack;
  std::vector<std::vector<ElementId>> components;
  std::map<ElementId, std::size_t> component_of;
  int counter = 0;
  std::function<void(ElementId)> strongconnect = [&](ElementId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (ElementId w : out[v]) {
      if (!index.count(w)) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<ElementId> component;
      for (;;) {
        ElementId w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        component.push_back(w);
        if (w == v) break;
      }
      std::sort(component.begin(), component.end());
      component_of[v] = components.size();
      for (ElementId w : component) component_of[w] = components.size();
      components.push_back(std::move(component));
    }
  };
  for (ElementId n : nodes)
    if (!index.count(n)) strongconnect(n);

  // Kahn over the condensation; ties broken by the smallest stage id inside.
  std::vector<std::set<std::size_t>> successors(components.size());
  std::vector<int> indegree(components.size(), 0);
  for (const auto& [v, targets] : out)
    for (ElementId w : targets) {
      std::size_t cv = component_of[v], cw = component_of[w];
      if (cv != cw && successors[cv].insert(cw).second) ++indegree[cw];
    }
  using Entry = std::pair<ElementId, std::size_t>;  // (min stage id, index)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> ready;
  for (std::size_t i = 0; i < components.size(); ++i)
    if (indegree[i] == 0) ready.push({components[i].front(), i});
  std::vector<ElementId> order;
  while (!ready.empty()) {
    std::size_t at = ready.top().second;
    ready.pop();
    for (ElementId stage : components[at]) order.push_back(stage);
    for (std::size_t next : successors[at])
      if (--indegree[next] == 0) ready.push({components[next].front(), next});
  }
  return order;
}

class Simulator {
 public:
  explicit Simulator(const StaticModel& model) : model_(model) {}

  EventTrace run(std::span<const std::string> schedule) {
    for (const std::string& name : schedule) {
      const EventDef* ev = model_.event_named(name);
      if (!ev) {
        diag(Severity::Error, "S3",
             "schedule names unknown event '" + name + "'",
             model_.behavior_span);
        continue;
      }
      fire_event(*ev);
      completed_.insert(name);
      record_ledger(name);
    }
    trace_.final_tokens = tokens_;
    return std::move(trace_);
  }

 private:
  void diag(Severity severity, const char* code, std::string message,
            Span span) {
    trace_.diagnostics.push_back(
        Diagnostic{severity, code, std::move(message), span, {}});
  }

  void line(const EventDef& ev, ElementId stage, const char* action,
            const std::string& token) {
    trace_.lines.push_back(TraceLine{++step_, ev.name,
                                     format_path(model_, stage), action,
                                     token});
  }

  void fire_event(const EventDef& ev) {
    Region region = region_of(model_, ev);
    std::set<ElementId> used_arcs;
    for (ElementId stage_id : region_firing_order(model_, region))
      fire_stage(ev, stage_id, region, used_arcs);
  }

  void fire_stage(const EventDef& ev, ElementId stage_id, const Region& region,
                  std::set<ElementId>& used_arcs) {
    const Stage* st = model_.stage(stage_id);
    if (!st) return;
    switch (st->kind) {
      case StageKind::Create: {
        SimToken token;
        token.id = "T" + std::to_string(tokens_.size() + 1);
        token.birth_stage = stage_id;
        token.location = st->owner;
        tokens_.push_back(token);
        ++trace_.create_firings;
        line(ev, stage_id, "minted", token.id);
        break;
      }
      case StageKind::Release: {
        for (SimToken& t : tokens_)
          if (t.location == st->owner && !t.awaiting) t.ready = true;
        line(ev, stage_id, "fired", "-");
        break;
      }
      case StageKind::Process: {
        bool any = false;
        for (SimToken& t : tokens_)
          if (t.location == st->owner && !t.awaiting) {
            ++t.processed;
            line(ev, stage_id, "processed", t.id);
            any = true;
          }
        if (!any) line(ev, stage_id, "fired", "-");
        break;
      }
      case StageKind::Transfer: {
        bool any = false;
        for (ElementId arc_id : region.arcs) {
          if (used_arcs.count(arc_id)) continue;
          const Arc* a = model_.arc(arc_id);
          if (!a || a->kind != ArcKind::Flow) continue;
          const Stage* src = model_.stage(a->src);
          const Stage* dst = model_.stage(a->dst);
          if (!src || !dst || src->owner == dst->owner) continue;
          if (src->kind != StageKind::Transfer ||
              dst->kind != StageKind::Transfer)
            continue;
          // The region-side endpoint drives the movement; prefer the source
          // when both ends belong to the region.
          ElementId driver =
              region.contains_stage(a->src) ? a->src : a->dst;
          if (driver != stage_id) continue;
          used_arcs.insert(arc_id);
          for (SimToken& t : tokens_)
            if (t.location == src->owner && t.ready && !t.awaiting) {
              t.location = dst->owner;
              t.ready = false;
              t.awaiting = true;
              line(ev, stage_id, "moved", t.id);
              any = true;
            }
        }
        if (!any) line(ev, stage_id, "fired", "-");
        break;
      }
      case StageKind::Receive: {
        bool any = false;
        for (SimToken& t : tokens_)
          if (t.location == st->owner && t.awaiting) {
            t.awaiting = false;
            line(ev, stage_id, "received", t.id);
            any = true;
          }
        if (!any) {
          diag(Severity::Error, "S1",
               "receive at " + format_path(model_, stage_id) +
                   " fired with no token awaiting admission",
               model_.span_of(stage_id));
          line(ev, stage_id, "fired", "-");
        }
        break;
      }
    }
    check_triggers(ev, stage_id);
  }

  // A trigger whose target's event has already completed arrives too late to
  // activate anything.
  void check_triggers(const EventDef& current, ElementId fired_stage) {
    for (const auto& a : model_.arcs) {
      if (a.kind != ArcKind::Trigger || a.src != fired_stage) continue;
      for (const auto& ev : model_.events) {
        if (ev.name == current.name) continue;
        if (!completed_.count(ev.name)) continue;
        if (!region_has(ev.region_stages, a.dst)) continue;
        diag(Severity::Warning, "S2",
             "trigger " + arc_description(model_, a) + " activates event '" +
                 ev.name + "', which already fired",
             model_.span_of(a.id));
      }
    }
  }

  void record_ledger(const std::string& event_name) {
    LedgerEntry entry;
    entry.event = event_name;
    for (const SimToken& t : tokens_) ++entry.per_machine[t.location];
    entry.total = static_cast<int>(tokens_.size());
    entry.creates = trace_.create_firings;
    trace_.ledger.push_back(std::move(entry));
  }

  const StaticModel& model_;
  EventTrace trace_;
  std::vector<SimToken> tokens_;
  std::set<std::string> completed_;
  int step_ = 0;
};

}  // namespace

EventTrace simulate(const StaticModel& model,
                    std::span<const std::string> schedule) {
  return Simulator(model).run(schedule);
}

std::string trace_to_text(const EventTrace& trace) {
  std::ostringstream out;
  for (const TraceLine& l : trace.lines)
    out << "step=" << l.step << " event=" << l.event << " stage=" << l.stage
        << " action=" << l.action << " token=" << l.token << "\n";
  return out.str();
}

}  // namespace tml
