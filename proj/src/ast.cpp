#include "tml/ast.hpp"

namespace tml {

std::string_view stage_keyword(StageKind kind) {
  switch (kind) {
    case StageKind::Create: return "create";
    case StageKind::Process: return "process";
    case StageKind::Release: return "release";
    case StageKind::Transfer: return "transfer";
    case StageKind::Receive: return "receive";
  }
  return "";
}

std::optional<StageKind> stage_kind_from(std::string_view text) {
  if (text == "create") return StageKind::Create;
  if (text == "process") return StageKind::Process;
  if (text == "release") return StageKind::Release;
  if (text == "transfer") return StageKind::Transfer;
  if (text == "receive") return StageKind::Receive;
  return std::nullopt;
}

namespace {

bool path_equal(const AstPath& a, const AstPath& b) {
  if (a.segments.size() != b.segments.size()) return false;
  for (std::size_t i = 0; i < a.segments.size(); ++i)
    if (a.segments[i].text != b.segments[i].text) return false;
  return true;
}

bool machine_equal(const AstMachine& a, const AstMachine& b);

bool item_equal(const AstMachineItem& a, const AstMachineItem& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* s = std::get_if<AstStage>(&a.node)) {
    const auto& t = std::get<AstStage>(b.node);
    return s->kind == t.kind && s->label == t.label;
  }
  if (const auto* s = std::get_if<AstStore>(&a.node)) {
    return s->name == std::get<AstStore>(b.node).name;
  }
  return machine_equal(std::get<AstMachine>(a.node),
                       std::get<AstMachine>(b.node));
}

bool machine_equal(const AstMachine& a, const AstMachine& b) {
  if (a.name != b.name || a.label != b.label) return false;
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i)
    if (!item_equal(a.items[i], b.items[i])) return false;
  return true;
}

bool decl_equal(const AstDecl& a, const AstDecl& b) {
  if (a.index() != b.index()) return false;
  if (const auto* m = std::get_if<AstMachine>(&a))
    return machine_equal(*m, std::get<AstMachine>(b));
  if (const auto* arc = std::get_if<AstArc>(&a)) {
    const auto& o = std::get<AstArc>(b);
    return arc->trigger == o.trigger && path_equal(arc->src, o.src) &&
           path_equal(arc->dst, o.dst) && arc->name == o.name &&
           arc->label == o.label;
  }
  if (const auto* ev = std::get_if<AstEvent>(&a)) {
    const auto& o = std::get<AstEvent>(b);
    if (ev->id != o.id || ev->label != o.label || ev->time != o.time)
      return false;
    if (ev->region.size() != o.region.size()) return false;
    for (std::size_t i = 0; i < ev->region.size(); ++i)
      if (!path_equal(ev->region[i], o.region[i])) return false;
    return true;
  }
  const auto& ba = std::get<AstBehavior>(a);
  const auto& bb = std::get<AstBehavior>(b);
  if (ba.edges.size() != bb.edges.size()) return false;
  for (std::size_t i = 0; i < ba.edges.size(); ++i)
    if (ba.edges[i].from != bb.edges[i].from ||
        ba.edges[i].to != bb.edges[i].to)
      return false;
  return true;
}

}  // namespace

bool ast_equal(const Ast& a, const Ast& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i)
    if (!decl_equal(a.decls[i], b.decls[i])) return false;
  return true;
}

}  // namespace tml
