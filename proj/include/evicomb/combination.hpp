#pragma once

#include <tuple>
#include <vector>

#include "mass.hpp"

namespace evicomb {

struct ConflictPair {
  FocalSet first;
  FocalSet second;
  Ratio weight;
};

struct ConflictReport {
  Ratio conflict_weight;  // K: mass product landing on empty intersections
  std::vector<ConflictPair> conflicting_pairs;
};

inline ConflictReport conflict_weight(const MassDistribution& m1, const MassDistribution& m2) {
  require_same_frame(m1.frame(), m2.frame(), "conflict_weight");
  ConflictReport report;
  for (const auto& [a, wa] : m1.focal())
    for (const auto& [b, wb] : m2.focal())
      if ((a.bits() & b.bits()) == 0) {
        Ratio w = wa * wb;
        report.conflict_weight += w;
        report.conflicting_pairs.push_back({a, b, std::move(w)});
      }
  return report;
}

/// Dempster's rule, normalized by 1 - K. The result is conditioned on the
/// union of both inputs' conditions. Throws total_conflict when K = 1.
inline MassDistribution dempster_combine(const MassDistribution& m1, const MassDistribution& m2) {
  require_same_frame(m1.frame(), m2.frame(), "dempster_combine");
  MassDistribution::focal_map joint;
  Ratio conflict;
  for (const auto& [a, wa] : m1.focal())
    for (const auto& [b, wb] : m2.focal()) {
      std::uint64_t c = a.bits() & b.bits();
      if (c == 0)
        conflict += wa * wb;
      else
        joint[FocalSet(m1.frame(), c)] += wa * wb;
    }
  if (conflict.is_one())
    throw error(errc::total_conflict, "total conflict: normalization factor is zero");

  Ratio normalization = Ratio(1) - conflict;
  std::vector<std::pair<FocalSet, Ratio>> pairs;
  pairs.reserve(joint.size());
  for (auto& [c, w] : joint) pairs.emplace_back(c, w / normalization);

  Conditions conditions = m1.conditions();
  conditions.insert(m2.conditions().begin(), m2.conditions().end());
  return from_focal_list(m1.frame(), pairs, std::move(conditions));
}

}  // namespace evicomb
