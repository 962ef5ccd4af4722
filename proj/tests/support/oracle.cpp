#include "support/oracle.hpp"

#include <algorithm>

namespace tml::test {

namespace {

bool member(const std::vector<ElementId>& ids, ElementId id) {
  for (ElementId candidate : ids)
    if (candidate == id) return true;
  return false;
}

}  // namespace

std::vector<std::pair<ElementId, ElementId>> oracle_precedence(
    const StaticModel& model) {
  std::vector<std::pair<ElementId, ElementId>> out;
  for (const Arc& a : model.arcs) {
    for (const EventDef& e : model.events) {
      for (const EventDef& f : model.events) {
        if (e.id == f.id) continue;
        if (!member(e.region_stages, a.src)) continue;
        if (!member(f.region_stages, a.dst)) continue;
        bool inside_e = member(e.region_stages, a.dst);
        bool inside_f = member(f.region_stages, a.src);
        if (inside_e && inside_f) continue;
        out.emplace_back(e.id, f.id);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace tml::test
