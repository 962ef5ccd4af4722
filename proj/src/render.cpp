#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tml/render.hpp"

namespace tml {

namespace {

// Muted qualitative palette, cycled by event declaration order.
constexpr const char* kPalette[12] = {
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
    "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};

// Escapes a string for a double-quoted DOT literal. `\n` stays a two-byte
// escape so DOT treats it as a label line break.
std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '\\' || c == '"') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

const char* rankdir_name(RankDir dir) {
  return dir == RankDir::LR ? "LR" : "TB";
}

struct NodeDecoration {
  std::vector<std::string> extra_label_lines;
  std::string style;      // e.g. "filled", "striped"
  std::string fillcolor;  // single color or colon-joined stripe list
  bool highlight = false;
};

class DotWriter {
 public:
  DotWriter(const StaticModel& model, const RenderOptions& opts)
      : model_(model), opts_(opts) {}

  std::string static_graph(
      const std::map<ElementId, NodeDecoration>* decor = nullptr,
      const std::string& graph_label = "") {
    decor_ = decor;
    out_.str("");
    out_ << "digraph model {\n";
    out_ << "  rankdir=" << rankdir_name(opts_.rankdir) << ";\n";
    out_ << "  node [shape=box];\n";
    if (!graph_label.empty())
      out_ << "  label=" << dot_quote(graph_label) << ";\n"
           << "  labelloc=b;\n";
    for (ElementId root : model_.roots) write_machine(root, 1);
    for (const Arc& a : model_.arcs) write_arc(a);
    out_ << "}\n";
    return out_.str();
  }

 private:
  void indent(int depth) {
    for (int i = 0; i < depth; ++i) out_ << "  ";
  }

  void write_machine(ElementId id, int depth) {
    const MachineNode* m = model_.machine(id);
    if (!m) return;
    indent(depth);
    out_ << "subgraph cluster_" << id << " {\n";
    std::string label = m->name;
    if (opts_.show_labels && !m->label.empty()) label += "\n" + m->label;
    for (const std::string& store : m->stores) label += "\nstore: " + store;
    indent(depth + 1);
    out_ << "label=" << dot_quote(label) << ";\n";
    for (ElementId stage_id : m->stages)
      if (stage_id != kNoElement) write_stage(stage_id, depth + 1);
    for (ElementId child : m->children) write_machine(child, depth + 1);
    indent(depth);
    out_ << "}\n";
  }

  void write_stage(ElementId id, int depth) {
    const Stage* s = model_.stage(id);
    if (!s) return;
    std::string label(stage_keyword(s->kind));
    if (opts_.show_labels && !s->label.empty()) label += "\n" + s->label;
    std::vector<std::string> attrs;
    if (decor_) {
      auto it = decor_->find(id);
      if (it != decor_->end()) {
        for (const std::string& line : it->second.extra_label_lines)
          label += "\n" + line;
        if (!it->second.style.empty())
          attrs.push_back("style=" + dot_quote(it->second.style));
        if (!it->second.fillcolor.empty())
          attrs.push_back("fillcolor=" + dot_quote(it->second.fillcolor));
        if (it->second.highlight) attrs.push_back("penwidth=2");
      }
    }
    indent(depth);
    out_ << "n" << id << " [label=" << dot_quote(label);
    for (const std::string& attr : attrs) out_ << ", " << attr;
    out_ << "];\n";
  }

  void write_arc(const Arc& a) {
    std::vector<std::string> attrs;
    if (a.kind == ArcKind::Trigger) attrs.push_back("style=dashed");
    std::string label;
    if (!a.name.empty()) label = a.name;
    if (opts_.show_labels && !a.label.empty())
      label += (label.empty() ? "" : "\n") + a.label;
    if (!label.empty()) attrs.push_back("label=" + dot_quote(label));
    out_ << "  n" << a.src << " -> n" << a.dst;
    if (!attrs.empty()) {
      out_ << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i)
        out_ << (i ? ", " : "") << attrs[i];
      out_ << "]";
    }
    out_ << ";\n";
  }

  const StaticModel& model_;
  const RenderOptions& opts_;
  const std::map<ElementId, NodeDecoration>* decor_ = nullptr;
  std::ostringstream out_;
};

}  // namespace

RenderResult render_static(const StaticModel& model,
                           const RenderOptions& opts) {
  DotWriter writer(model, opts);
  return RenderResult{writer.static_graph(), ""};
}

RenderResult render_dynamic(const StaticModel& model,
                            const RenderOptions& opts) {
  if (model.events.empty())
    return RenderResult{"", "dynamic rendering requires at least one event"};
  std::set<std::string> highlight;
  for (const std::string& name : opts.highlight_events) {
    if (!model.event_named(name))
      return RenderResult{"", "unknown event '" + name + "' in highlight list"};
    highlight.insert(name);
  }

  // Color per event, by declaration order; nodes learn their owners.
  std::map<ElementId, std::string> event_color;
  std::map<ElementId, std::vector<const EventDef*>> owners;
  std::string legend;
  for (std::size_t i = 0; i < model.events.size(); ++i) {
    const EventDef& ev = model.events[i];
    event_color[ev.id] = kPalette[i % 12];
    if (!legend.empty()) legend += "\n";
    legend += ev.name;
    if (opts.show_labels && !ev.label.empty()) legend += ": " + ev.label;
    for (ElementId s : ev.region_stages) owners[s].push_back(&ev);
  }

  std::map<ElementId, NodeDecoration> decor;
  for (const auto& [stage_id, events] : owners) {
    NodeDecoration d;
    std::string ids, colors;
    for (const EventDef* ev : events) {
      if (!ids.empty()) ids += ",";
      ids += ev->name;
      if (!colors.empty()) colors += ":";
      colors += event_color[ev->id];
      if (highlight.count(ev->name)) d.highlight = true;
    }
    d.extra_label_lines.push_back(ids);
    d.style = events.size() > 1 ? "striped" : "filled";
    d.fillcolor = colors;
    decor[stage_id] = std::move(d);
  }

  DotWriter writer(model, opts);
  return RenderResult{writer.static_graph(&decor, legend), ""};
}

RenderResult render_behavior(const StaticModel& model,
                             const RenderOptions& opts) {
  if (!model.behavior)
    return RenderResult{"", "behavior rendering requires a behavior block"};
  std::ostringstream out;
  out << "digraph behavior {\n";
  out << "  rankdir=" << rankdir_name(opts.rankdir) << ";\n";
  out << "  node [shape=box];\n";
  for (const EventDef& ev : model.events) {
    std::string label = ev.name;
    if (opts.show_labels && !ev.label.empty()) label += "\n" + ev.label;
    out << "  b_" << ev.name << " [label=" << dot_quote(label) << "];\n";
  }
  for (const BehaviorEdge& edge : model.behavior->edges)
    out << "  b_" << edge.from << " -> b_" << edge.to << ";\n";
  out << "}\n";
  return RenderResult{out.str(), ""};
}

RenderResult render(const StaticModel& model, const RenderOptions& opts) {
  switch (opts.mode) {
    case RenderMode::Static:
      return render_static(model, opts);
    case RenderMode::Dynamic:
      return render_dynamic(model, opts);
    case RenderMode::Behavior:
      return render_behavior(model, opts);
  }
  return RenderResult{"", "unknown render mode"};
}

Report summarize(const StaticModel& model) {
  Report report;
  report.machines = static_cast<int>(model.machines.size());
  for (const Stage& s : model.stages)
    ++report.stages_by_kind[static_cast<std::size_t>(s.kind)];
  for (const Arc& a : model.arcs)
    ++(a.kind == ArcKind::Flow ? report.flows : report.triggers);
  report.events = static_cast<int>(model.events.size());
  if (model.behavior)
    report.behavior_edges = static_cast<int>(model.behavior->edges.size());
  return report;
}

nlohmann::ordered_json report_to_json(const Report& report) {
  nlohmann::ordered_json stages;
  for (std::size_t i = 0; i < kStageKindCount; ++i)
    stages[std::string(stage_keyword(static_cast<StageKind>(i)))] =
        report.stages_by_kind[i];
  nlohmann::ordered_json out;
  out["machines"] = report.machines;
  out["stages"] = stages;
  out["flows"] = report.flows;
  out["triggers"] = report.triggers;
  out["events"] = report.events;
  out["behavior_edges"] = report.behavior_edges;
  return out;
}

}  // namespace tml
