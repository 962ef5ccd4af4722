#pragma once

#include <optional>
#include <vector>

#include "tml/ast.hpp"
#include "tml/diagnostics.hpp"
#include "tml/model.hpp"

namespace tml {

enum class Strictness { Strict, Lax };

struct ResolveResult {
  std::optional<StaticModel> model;  // present only with zero errors
  std::vector<Diagnostic> diagnostics;
};

// Binds every name in the AST to a model element: machine paths, stage
// paths, named arcs in regions, and the structural rules enforced by the
// model builder (duplicate siblings, duplicate stage kinds, duplicate event
// ids and arc names).
ResolveResult resolve(const Ast& ast);

struct ValidateOptions {
  // Escalates disconnected event regions (R8) from warning to error under
  // strict checking.
  bool connected_regions = false;
};

// Structural validation of a resolved model.
//
//   R1  intra-machine flow follows the legal stage succession matrix
//   R2  inter-machine flow connects transfer to transfer
//   R3  trigger targets a create or process stage
//   R4  every stage participates in an arc (or is its machine's sole stage)
//   R5  every flow-connected component has a create stage or a transfer
//       stage fed from another machine
//   R6  behavior edges reference declared events and never loop
//   R7  event regions are non-empty and fully resolved
//   R8  event regions are connected sub-diagrams
//   R9  triggers sourced at a transfer stage (style warning)
//
// Lax keeps R1-R3, R6, R7 as errors but downgrades R4/R5 to warnings; R8 is
// a warning unless strict checking runs with connected_regions set; R9 is
// always a warning. Output is sorted by source position, then rule code.
std::vector<Diagnostic> validate(const StaticModel& model, Strictness level,
                                 const ValidateOptions& options = {});

enum class FlowLegality { LegalIntra, LegalInter, Illegal };

// Classifies an ordered stage-kind pair for flow arcs. Exactly one of the
// three classes holds for each of the 25 pairs: seven pairs are legal within
// one machine, transfer->transfer is legal between machines, the remaining
// seventeen are illegal anywhere.
FlowLegality flow_legality(StageKind src, StageKind dst);

}  // namespace tml
