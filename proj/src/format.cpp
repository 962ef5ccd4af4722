#include "tml/format.hpp"

#include <sstream>

namespace tml {

namespace {

void write_indent(std::ostream& out, int depth) {
  for (int i = 0; i < depth; ++i) out << "  ";
}

void write_path(std::ostream& out, const AstPath& path) {
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    if (i) out << '.';
    out << path.segments[i].text;
  }
}

void write_machine(std::ostream& out, const AstMachine& m, int depth) {
  write_indent(out, depth);
  out << "machine " << m.name;
  if (m.label) out << ' ' << quote_string(*m.label);
  if (m.items.empty()) {
    out << " {}\n";
    return;
  }
  out << " {\n";
  for (const auto& item : m.items) {
    if (const auto* stage = std::get_if<AstStage>(&item.node)) {
      write_indent(out, depth + 1);
      out << stage_keyword(stage->kind);
      if (stage->label) out << ' ' << quote_string(*stage->label);
      out << '\n';
    } else if (const auto* store = std::get_if<AstStore>(&item.node)) {
      write_indent(out, depth + 1);
      out << "store " << store->name << '\n';
    } else {
      write_machine(out, std::get<AstMachine>(item.node), depth + 1);
    }
  }
  write_indent(out, depth);
  out << "}\n";
}

void write_arc(std::ostream& out, const AstArc& arc) {
  out << (arc.trigger ? "trigger " : "flow ");
  write_path(out, arc.src);
  out << (arc.trigger ? " => " : " -> ");
  write_path(out, arc.dst);
  if (arc.name) out << " as " << *arc.name;
  if (arc.label) out << ' ' << quote_string(*arc.label);
  out << '\n';
}

void write_event(std::ostream& out, const AstEvent& ev) {
  out << "event " << ev.id;
  if (ev.label) out << ' ' << quote_string(*ev.label);
  out << " {\n  region: [";
  for (std::size_t i = 0; i < ev.region.size(); ++i) {
    if (i) out << ", ";
    write_path(out, ev.region[i]);
  }
  out << "]\n";
  if (ev.time) out << "  time: " << quote_string(*ev.time) << '\n';
  out << "}\n";
}

void write_behavior(std::ostream& out, const AstBehavior& b) {
  if (b.edges.empty()) {
    out << "behavior {}\n";
    return;
  }
  out << "behavior {\n";
  for (const auto& e : b.edges) out << "  " << e.from << " -> " << e.to << '\n';
  out << "}\n";
}

}  // namespace

std::string quote_string(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c; break;
    }
  }
  out += '"';
  return out;
}

std::optional<std::string> format(const Ast& ast) {
  if (has_errors(ast.diagnostics)) return std::nullopt;
  std::ostringstream out;
  for (const auto& decl : ast.decls) {
    if (const auto* m = std::get_if<AstMachine>(&decl)) {
      write_machine(out, *m, 0);
    } else if (const auto* arc = std::get_if<AstArc>(&decl)) {
      write_arc(out, *arc);
    } else if (const auto* ev = std::get_if<AstEvent>(&decl)) {
      write_event(out, *ev);
    } else {
      write_behavior(out, std::get<AstBehavior>(decl));
    }
  }
  return out.str();
}

}  // namespace tml
