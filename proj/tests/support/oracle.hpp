#pragma once

#include <utility>
#include <vector>

#include "tml/model.hpp"

namespace tml::test {

// Brute-force reference for the precedence relation: literal enumeration of
// every (arc, event, event) triple with naive membership scans. Kept
// deliberately independent of the engine's indexed implementation.
std::vector<std::pair<ElementId, ElementId>> oracle_precedence(
    const StaticModel& model);

}  // namespace tml::test

namespace testsupport = tml::test;
