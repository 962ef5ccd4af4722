#pragma once

#include <random>
#include <string>

namespace tml::test {

struct GenOptions {
  int max_events = 6;
  int max_arcs = 20;
  // true: arcs obey the flow legality matrix and all names resolve, so the
  // output parses and resolves cleanly. false: arbitrary (still well-formed)
  // arcs, label escapes, comments, and messy layout for round-trip fuzzing.
  bool valid = true;
};

std::string generate_source(std::mt19937& rng, const GenOptions& opts);

}  // namespace tml::test

namespace testsupport = tml::test;
