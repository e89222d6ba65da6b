#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "frame.hpp"
#include "ratio.hpp"

namespace evicomb {

using Conditions = std::set<std::string>;

/// A normalized mass (granular) distribution over a frame.
///
/// Focal weights are positive and sum to exactly one; the empty set never
/// carries mass. A non-empty condition set marks the distribution as
/// conditioned on those evidential sources (tags such as "Dept=Acct").
class MassDistribution {
 public:
  using focal_map = std::map<FocalSet, Ratio>;

  /// Merges duplicate focal sets by addition and validates normalization.
  static MassDistribution from_focal_list(const Frame& frame,
                                          const std::vector<std::pair<FocalSet, Ratio>>& pairs,
                                          Conditions conditions = {}) {
    focal_map focal;
    Ratio total;
    for (const auto& [set, weight] : pairs) {
      require_same_frame(frame, set.frame(), "mass distribution");
      if (set.is_empty()) throw error(errc::mass_on_empty_set, "mass assigned to the empty set", {}, {render(set)});
      if (weight.is_zero())
        throw error(errc::nonpositive_weight, "focal weight must be positive", {}, {render(set)});
      focal[set] += weight;
      total += weight;
    }
    if (!total.is_one())
      throw error(errc::weights_do_not_sum_to_one, "focal weights sum to " + total.str() + ", not 1");
    return MassDistribution(frame, std::move(focal), std::move(conditions));
  }

  const Frame& frame() const { return frame_; }
  const focal_map& focal() const { return focal_; }
  const Conditions& conditions() const { return conditions_; }
  bool is_conditioned() const { return !conditions_.empty(); }

  Ratio weight(const FocalSet& s) const {
    auto it = focal_.find(s);
    return it == focal_.end() ? Ratio{} : it->second;
  }

  MassDistribution with_conditions(Conditions c) const {
    return MassDistribution(frame_, focal_, std::move(c));
  }

  /// Least common denominator of all focal weights.
  bigint common_denominator() const {
    bigint l = 1;
    for (const auto& [s, w] : focal_) l = lcm(l, w.denominator());
    return l;
  }

  friend bool operator==(const MassDistribution& a, const MassDistribution& b) {
    return a.frame_ == b.frame_ && a.focal_ == b.focal_ && a.conditions_ == b.conditions_;
  }

 private:
  MassDistribution(Frame frame, focal_map focal, Conditions conditions)
      : frame_(std::move(frame)), focal_(std::move(focal)), conditions_(std::move(conditions)) {}

  Frame frame_;
  focal_map focal_;
  Conditions conditions_;
};

inline MassDistribution from_focal_list(const Frame& frame,
                                        const std::vector<std::pair<FocalSet, Ratio>>& pairs,
                                        Conditions conditions = {}) {
  return MassDistribution::from_focal_list(frame, pairs, std::move(conditions));
}

/// Total ignorance: all mass on the whole frame.
inline MassDistribution vacuous(const Frame& frame) {
  return from_focal_list(frame, {{FocalSet::full(frame), Ratio(1)}});
}

/// Bel(D): total mass on focal sets contained in D.
inline Ratio belief(const MassDistribution& m, const FocalSet& d) {
  require_same_frame(m.frame(), d.frame(), "belief");
  Ratio sum;
  for (const auto& [a, w] : m.focal())
    if ((a.bits() & ~d.bits()) == 0) sum += w;
  return sum;
}

/// Pls(D): total mass on focal sets meeting D.
inline Ratio plausibility(const MassDistribution& m, const FocalSet& d) {
  require_same_frame(m.frame(), d.frame(), "plausibility");
  Ratio sum;
  for (const auto& [a, w] : m.focal())
    if ((a.bits() & d.bits()) != 0) sum += w;
  return sum;
}

}  // namespace evicomb
