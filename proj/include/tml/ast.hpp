#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tml/diagnostics.hpp"

namespace tml {

enum class StageKind { Create, Process, Release, Transfer, Receive };

inline constexpr int kStageKindCount = 5;

std::string_view stage_keyword(StageKind kind);
std::optional<StageKind> stage_kind_from(std::string_view text);

struct AstStage {
  StageKind kind;
  std::optional<std::string> label;
  Span span;
};

struct AstStore {
  std::string name;
  Span span;
};

struct AstMachineItem;

struct AstMachine {
  std::string name;
  std::optional<std::string> label;
  std::vector<AstMachineItem> items;  // stages, stores, nested machines, in order
  Span span;
};

struct AstMachineItem {
  std::variant<AstStage, AstStore, AstMachine> node;
};

struct AstPathSegment {
  std::string text;
  Span span;
};

// Dotted reference. For arc endpoints the last segment must be a stage
// keyword; that is checked at resolution so a bad tail yields a name error
// instead of derailing the parse. Single-segment paths in event regions name
// arcs.
struct AstPath {
  std::vector<AstPathSegment> segments;
  Span span;
};

struct AstArc {
  bool trigger = false;  // false: flow (->), true: trigger (=>)
  AstPath src;
  AstPath dst;
  std::optional<std::string> name;   // `as NAME`
  std::optional<std::string> label;
  Span span;
};

struct AstEvent {
  std::string id;
  Span id_span;
  std::optional<std::string> label;
  std::vector<AstPath> region;
  std::optional<std::string> time;
  Span span;
};

struct AstBehaviorEdge {
  std::string from;
  std::string to;
  Span span;
};

struct AstBehavior {
  std::vector<AstBehaviorEdge> edges;
  Span span;
};

using AstDecl = std::variant<AstMachine, AstArc, AstEvent, AstBehavior>;

struct Ast {
  std::vector<AstDecl> decls;
  std::vector<Diagnostic> diagnostics;
};

// Structural equality: spans and diagnostics are ignored, everything the
// formatter is responsible for preserving is compared.
bool ast_equal(const Ast& a, const Ast& b);

}  // namespace tml
