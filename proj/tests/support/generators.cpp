#include "support/generators.hpp"

#include <array>
#include <sstream>
#include <vector>

namespace tml::test {

namespace {

constexpr const char* kKind[5] = {"create", "process", "release", "transfer",
                                  "receive"};
// Indices into kKind: the seven legal intra-machine flow successions.
constexpr std::pair<int, int> kLegalIntra[7] = {{0, 2}, {0, 1}, {4, 1}, {4, 2},
                                                {1, 2}, {2, 3}, {3, 4}};

// Source-level label pool for fuzzing; entries are already escaped.
const char* kFuzzLabels[] = {
    "plain",          "two words",       "quote \\\" inside",
    "back\\\\slash",  "tab\\there",      "newline\\nhere",
    "return\\rhere",  "mixed \\t\\n\\\"", "",
};

int rnd(std::mt19937& rng, int n) {
  return n <= 1 ? 0 : static_cast<int>(rng() % static_cast<unsigned>(n));
}

bool chance(std::mt19937& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

struct StageRef {
  std::string path;  // dotted path without the stage keyword
  int kind;

  std::string full() const { return path + "." + kKind[kind]; }
};

struct MachineRef {
  std::string path;
  std::array<bool, 5> kinds{};
};

struct Generated {
  std::ostringstream out;
  std::vector<MachineRef> machines;
  std::vector<StageRef> stages;
  std::vector<std::string> arc_names;
  int machine_counter = 0;
  int arc_name_counter = 0;
};

void emit_machine(std::mt19937& rng, const GenOptions& opts, Generated& g,
                  const std::string& parent_path, int depth, int indent) {
  std::string name = "M" + std::to_string(++g.machine_counter);
  std::string path = parent_path.empty() ? name : parent_path + "." + name;
  std::string pad(indent * 2, ' ');
  g.out << pad << "machine " << name;
  if (!opts.valid && chance(rng, 0.2))
    g.out << " \"" << kFuzzLabels[rnd(rng, 8)] << "\"";
  g.out << " {\n";
  MachineRef m;
  m.path = path;
  for (int kind = 0; kind < 5; ++kind) {
    if (!chance(rng, 0.55)) continue;
    m.kinds[kind] = true;
    g.out << pad << "  " << kKind[kind];
    if (!opts.valid && chance(rng, 0.15))
      g.out << " \"" << kFuzzLabels[rnd(rng, 8)] << "\"";
    g.out << "\n";
    g.stages.push_back(StageRef{path, kind});
  }
  if (chance(rng, 0.2))
    g.out << pad << "  store S" << g.machine_counter << "\n";
  if (depth < 2 && chance(rng, 0.35))
    emit_machine(rng, opts, g, path, depth + 1, indent + 1);
  g.out << pad << "}\n";
  g.machines.push_back(std::move(m));
}

void emit_arcs(std::mt19937& rng, const GenOptions& opts, Generated& g) {
  if (g.stages.empty()) return;
  int budget = rnd(rng, opts.max_arcs + 1);
  for (int i = 0; i < budget; ++i) {
    bool trigger = chance(rng, 0.3);
    std::string src, dst;
    if (trigger) {
      const StageRef& s = g.stages[rnd(rng, (int)g.stages.size())];
      std::vector<const StageRef*> targets;
      for (const StageRef& t : g.stages)
        if ((t.kind == 0 || t.kind == 1) && t.full() != s.full())
          targets.push_back(&t);
      if (opts.valid && targets.empty()) continue;
      if (opts.valid || (!targets.empty() && chance(rng, 0.7))) {
        src = s.full();
        dst = targets[rnd(rng, (int)targets.size())]->full();
      } else {
        src = s.full();
        dst = g.stages[rnd(rng, (int)g.stages.size())].full();
      }
    } else if (!opts.valid) {
      src = g.stages[rnd(rng, (int)g.stages.size())].full();
      dst = g.stages[rnd(rng, (int)g.stages.size())].full();
    } else if (chance(rng, 0.6)) {
      // Intra-machine flow along a legal succession.
      std::vector<std::pair<const MachineRef*, int>> options;
      for (const MachineRef& m : g.machines)
        for (int p = 0; p < 7; ++p)
          if (m.kinds[kLegalIntra[p].first] && m.kinds[kLegalIntra[p].second])
            options.push_back({&m, p});
      if (options.empty()) continue;
      auto [m, p] = options[rnd(rng, (int)options.size())];
      src = m->path + "." + kKind[kLegalIntra[p].first];
      dst = m->path + "." + kKind[kLegalIntra[p].second];
    } else {
      // Boundary flow: transfer to transfer between distinct machines.
      std::vector<const MachineRef*> owners;
      for (const MachineRef& m : g.machines)
        if (m.kinds[3]) owners.push_back(&m);
      if (owners.size() < 2) continue;
      int a = rnd(rng, (int)owners.size());
      int b = rnd(rng, (int)owners.size() - 1);
      if (b >= a) ++b;
      src = owners[a]->path + ".transfer";
      dst = owners[b]->path + ".transfer";
    }
    g.out << (trigger ? "trigger " : "flow ") << src
          << (trigger ? " => " : " -> ") << dst;
    if (chance(rng, 0.25)) {
      std::string name = "a" + std::to_string(++g.arc_name_counter);
      g.out << " as " << name;
      g.arc_names.push_back(name);
    }
    if (chance(rng, 0.3))
      g.out << " \""
            << (opts.valid ? "carried downstream" : kFuzzLabels[rnd(rng, 8)])
            << "\"";
    g.out << "\n";
  }
}

void emit_events(std::mt19937& rng, const GenOptions& opts, Generated& g,
                 int count) {
  for (int i = 1; i <= count; ++i) {
    g.out << "event E" << i;
    if (chance(rng, 0.4))
      g.out << " \""
            << (opts.valid ? "something happens" : kFuzzLabels[rnd(rng, 8)])
            << "\"";
    g.out << " {\n  region: [";
    int size = 1 + rnd(rng, std::min<int>(5, (int)g.stages.size()));
    std::vector<int> picks;
    for (int k = 0; k < size; ++k) {
      int pick = rnd(rng, (int)g.stages.size());
      bool dup = false;
      for (int prior : picks) dup = dup || prior == pick;
      if (dup) continue;
      picks.push_back(pick);
    }
    for (std::size_t k = 0; k < picks.size(); ++k)
      g.out << (k ? ", " : "") << g.stages[picks[k]].full();
    if (!g.arc_names.empty() && chance(rng, 0.3))
      g.out << ", " << g.arc_names[rnd(rng, (int)g.arc_names.size())];
    if (!opts.valid && chance(rng, 0.1)) g.out << ", ghost" << i;
    g.out << "]\n";
    if (chance(rng, 0.3)) g.out << "  time: \"t" << i << "\"\n";
    g.out << "}\n";
  }
}

void emit_behavior(std::mt19937& rng, const GenOptions& opts, Generated& g,
                   int events) {
  g.out << "behavior {\n";
  for (int i = 1; i <= events; ++i)
    for (int j = i + 1; j <= events; ++j)
      if (chance(rng, 0.3)) g.out << "  E" << i << " -> E" << j << "\n";
  if (!opts.valid && events > 0 && chance(rng, 0.2))
    g.out << "  E" << 1 + rnd(rng, events) << " -> E" << 1 + rnd(rng, events)
          << "\n";
  g.out << "}\n";
}

}  // namespace

std::string generate_source(std::mt19937& rng, const GenOptions& opts) {
  Generated g;
  int roots = 1 + rnd(rng, 3);
  for (int i = 0; i < roots; ++i) emit_machine(rng, opts, g, "", 0, 0);
  // Events need something to reference.
  if (g.stages.empty()) {
    g.out << "machine Fallback {\n  create\n}\n";
    g.machines.push_back(MachineRef{"Fallback", {true}});
    g.stages.push_back(StageRef{"Fallback", 0});
  }
  emit_arcs(rng, opts, g);
  int events = g.stages.empty() ? 0 : rnd(rng, opts.max_events + 1);
  emit_events(rng, opts, g, events);
  emit_behavior(rng, opts, g, events);

  std::string text = g.out.str();
  if (!opts.valid) {
    if (chance(rng, 0.3)) text = "// fuzz header comment\n" + text;
    if (chance(rng, 0.25)) {
      std::string crlf;
      for (char c : text) {
        if (c == '\n') crlf += '\r';
        crlf += c;
      }
      text = crlf;
    }
  }
  return text;
}

}  // namespace tml::test
