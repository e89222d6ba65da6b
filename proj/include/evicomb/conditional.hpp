#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "combination.hpp"
#include "relation.hpp"

namespace evicomb {

/// Γ: each source label maps to a non-empty subset of the target frame.
class MultivaluedMapping {
 public:
  MultivaluedMapping(Frame source, Frame target, std::vector<FocalSet> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_.size())
      throw error(errc::malformed_input, "mapping must give an image for every source label");
    for (std::size_t i = 0; i < images_.size(); ++i) {
      require_same_frame(target_, images_[i].frame(), "multivalued mapping");
      if (images_[i].is_empty())
        throw error(errc::mass_on_empty_set, "image of '" + source_.label(i) + "' is empty");
    }
  }

  const Frame& source_frame() const { return source_; }
  const Frame& target_frame() const { return target_; }
  const FocalSet& image(std::size_t source_index) const { return images_.at(source_index); }

 private:
  Frame source_, target_;
  std::vector<FocalSet> images_;
};

/// Conditional granular distribution: the summary of `attribute` over rows
/// whose condition attributes hold the given singleton values.
inline MassDistribution summarize_where(const Relation& r, const std::string& attribute,
                                        const std::vector<std::pair<std::string, std::string>>& condition) {
  const std::size_t target = r.require_attribute(attribute);
  std::vector<std::pair<std::size_t, std::size_t>> tests;  // (column, label index)
  Conditions tags;
  for (const auto& [key, value] : condition) {
    const std::size_t c = r.require_attribute(key);
    auto idx = r.frames()[c].index_of(value);
    if (!idx) throw error(errc::unknown_label, "unknown label '" + value + "' for attribute '" + key + "'");
    tests.emplace_back(c, *idx);
    tags.insert(key + "=" + value);
  }

  std::vector<FocalSet> selected;
  std::vector<std::uint64_t> unfilled;
  for (const auto& row : r.rows()) {
    bool match = true;
    for (const auto& [c, idx] : tests) {
      const Cell& cell = row.cells[c];
      match = match && cell && cell->bits() == (std::uint64_t{1} << idx);
    }
    if (!match) continue;
    if (row.cells[target])
      selected.push_back(*row.cells[target]);
    else
      unfilled.push_back(row.id);
  }
  if (!unfilled.empty())
    throw error(errc::unfilled_cell, "attribute '" + attribute + "' is unfilled in selected rows", unfilled);
  if (selected.empty()) throw error(errc::empty_selection, "no rows satisfy the condition");

  const Ratio share(bigint(1), bigint(selected.size()));
  std::vector<std::pair<FocalSet, Ratio>> pairs;
  for (auto& s : selected) pairs.emplace_back(std::move(s), share);
  return from_focal_list(r.frames()[target], pairs, std::move(tags));
}

/// Pushes a singleton-focal source distribution through Γ. Conditions carry over.
inline MassDistribution propagate(const MassDistribution& source, const MultivaluedMapping& gamma) {
  require_same_frame(source.frame(), gamma.source_frame(), "propagate");
  std::vector<std::pair<FocalSet, Ratio>> pairs;
  for (const auto& [s, w] : source.focal()) {
    if (!s.is_singleton())
      throw error(errc::non_singleton_focal, "propagate requires singleton source focal elements", {}, {render(s)});
    pairs.emplace_back(gamma.image(s.members().front()), w);
  }
  return from_focal_list(gamma.target_frame(), pairs, source.conditions());
}

/// Combinable under the conditional reading iff some pair of focal elements
/// intersects, i.e. iff Dempster's rule is applicable (K < 1).
inline bool conditional_combinable(const MassDistribution& m1, const MassDistribution& m2) {
  require_same_frame(m1.frame(), m2.frame(), "conditional_combinable");
  for (const auto& [a, wa] : m1.focal())
    for (const auto& [b, wb] : m2.focal())
      if ((a.bits() & b.bits()) != 0) return true;
  return false;
}

struct ConditionalRow {
  std::uint64_t id;
  std::optional<FocalSet> cell_1;
  std::optional<FocalSet> cell_2;
  bool tag_1;
  bool tag_2;
};

/// Partially filled parent relation of two conditional distributions: each
/// row carries a value from E1, from E2, or (jointly) from both.
struct ConditionalParent {
  Frame frame;
  std::vector<ConditionalRow> rows;
  std::pair<std::string, std::string> evidence_tags;

  /// Empty when the invariants hold; otherwise one message per broken row.
  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    for (const auto& r : rows) {
      const std::string at = "row " + std::to_string(r.id) + ": ";
      if (r.tag_1 != r.cell_1.has_value()) out.push_back(at + "tag_1 disagrees with cell_1");
      if (r.tag_2 != r.cell_2.has_value()) out.push_back(at + "tag_2 disagrees with cell_2");
      if (!r.cell_1 && !r.cell_2) out.push_back(at + "no filled cell");
      if (r.cell_1 && r.cell_1->is_empty()) out.push_back(at + "cell_1 is null");
      if (r.cell_2 && r.cell_2->is_empty()) out.push_back(at + "cell_2 is null");
      if (r.cell_1 && r.cell_2 && (r.cell_1->bits() & r.cell_2->bits()) == 0)
        out.push_back(at + "conflicting cells");
    }
    return out;
  }

  /// Summary of column 1 (or 2) over the rows tagged with that evidence.
  MassDistribution marginal(int column) const {
    std::vector<FocalSet> cells;
    for (const auto& r : rows) {
      const auto& cell = column == 1 ? r.cell_1 : r.cell_2;
      if (column == 1 ? r.tag_1 : r.tag_2) cells.push_back(*cell);
    }
    if (cells.empty()) throw error(errc::empty_selection, "no rows carry the requested evidence");
    const Ratio share(bigint(1), bigint(cells.size()));
    std::vector<std::pair<FocalSet, Ratio>> pairs;
    for (auto& c : cells) pairs.emplace_back(std::move(c), share);
    return from_focal_list(frame, pairs);
  }
};

namespace detail {

inline std::string evidence_label(const Conditions& c, const std::string& fallback) {
  if (c.empty()) return fallback;
  std::string out;
  for (const auto& tag : c) out += (out.empty() ? "" : ",") + tag;
  return out;
}

}  // namespace detail

/// Builds a conflict-free parent relation for the combination of m1 and m2.
///
/// Both distributions are scaled to integer counts over L = lcm of their
/// denominators (so N = M = L). The intersecting pair (A_i, B_j) maximizing
/// alpha = min(a_i, b_j) is chosen, ties going to the canonically smallest
/// pair. Rows 1..alpha hold (A_i, B_j) with both tags; then every remaining
/// E1 count becomes a cell_1-only row and every remaining E2 count a
/// cell_2-only row, grouped by focal element in canonical order. The
/// relation has N + M - alpha rows.
inline ConditionalParent build_conflict_free_parent(const MassDistribution& m1, const MassDistribution& m2) {
  require_same_frame(m1.frame(), m2.frame(), "build_conflict_free_parent");
  const bigint scale = lcm(m1.common_denominator(), m2.common_denominator());
  auto counts = [&](const MassDistribution& m) {
    std::vector<std::pair<FocalSet, bigint>> out;
    for (const auto& [s, w] : m.focal()) out.emplace_back(s, w.numerator() * (scale / w.denominator()));
    return out;
  };
  auto left = counts(m1);
  auto right = counts(m2);

  std::optional<std::pair<std::size_t, std::size_t>> best;
  bigint alpha = 0;
  for (std::size_t i = 0; i < left.size(); ++i)
    for (std::size_t j = 0; j < right.size(); ++j) {
      if ((left[i].first.bits() & right[j].first.bits()) == 0) continue;
      bigint candidate = left[i].second < right[j].second ? left[i].second : right[j].second;
      if (!best || candidate > alpha) {
        best = {i, j};
        alpha = candidate;
      }
    }
  if (!best)
    throw error(errc::not_combinable, "no focal elements intersect: no conflict-free parent relation exists");

  ConditionalParent parent{m1.frame(), {}, {detail::evidence_label(m1.conditions(), "E1"),
                                            detail::evidence_label(m2.conditions(), "E2")}};
  const auto [bi, bj] = *best;
  left[bi].second -= alpha;
  right[bj].second -= alpha;

  std::uint64_t id = 1;
  for (bigint k = 0; k < alpha; ++k)
    parent.rows.push_back({id++, left[bi].first, right[bj].first, true, true});
  for (const auto& [s, n] : left)
    for (bigint k = 0; k < n; ++k) parent.rows.push_back({id++, s, std::nullopt, true, false});
  for (const auto& [s, n] : right)
    for (bigint k = 0; k < n; ++k) parent.rows.push_back({id++, std::nullopt, s, false, true});
  return parent;
}

}  // namespace evicomb
