#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flow.hpp"
#include "mass.hpp"
#include "relation.hpp"

namespace evicomb {

/// Unconditioned granular distribution of one attribute, with provenance.
struct GranularSummary {
  MassDistribution distribution;
  std::string source_relation;
  std::string attribute;
  std::size_t row_count;
};

inline GranularSummary summarize(const Relation& r, const std::string& attribute) {
  const Frame& frame = r.frame_of(attribute);
  std::vector<FocalSet> column = r.filled_column(attribute);
  if (column.empty()) throw error(errc::empty_selection, "relation '" + r.name() + "' has no rows");
  const Ratio share(bigint(1), bigint(column.size()));
  std::vector<std::pair<FocalSet, Ratio>> pairs;
  pairs.reserve(column.size());
  for (auto& cell : column) pairs.emplace_back(std::move(cell), share);
  return {from_focal_list(frame, pairs), r.name(), attribute, column.size()};
}

/// One member of the infinite family of parent relations: `size` rows where
/// each focal set fills weight * size consecutive rows, in canonical order.
inline Relation canonical_parent(const MassDistribution& m, std::size_t size,
                                 const std::string& attribute = "a",
                                 const std::string& name = "parent") {
  if (size == 0) throw error(errc::size_not_common_multiple, "parent relation size must be positive");
  for (const auto& [s, w] : m.focal())
    if (bigint(size) % w.denominator() != 0)
      throw error(errc::size_not_common_multiple,
                  "size " + std::to_string(size) + " is not a multiple of denominator " + w.denominator().str(),
                  {}, {render(s)});
  Relation rel(name, {attribute}, {m.frame()});
  std::uint64_t id = 1;
  for (const auto& [s, w] : m.focal()) {
    const auto count = static_cast<std::uint64_t>(w.numerator() * size / w.denominator());
    for (std::uint64_t k = 0; k < count; ++k) rel.add_row(id++, {s});
  }
  return rel;
}

inline Relation canonical_parent(const GranularSummary& s, std::size_t size) {
  return canonical_parent(s.distribution, size, s.attribute, s.source_relation);
}

/// Entrywise intersection of one attribute, rows matched by Name.
/// Throws null_conflict listing every row whose intersection is empty.
inline Relation combine_relations(const Relation& r1, const Relation& r2, const std::string& attribute) {
  const std::size_t c1 = r1.require_attribute(attribute);
  const std::size_t c2 = r2.require_attribute(attribute);
  const Frame& frame = r1.frames()[c1];
  require_same_frame(frame, r2.frames()[c2], "combine_relations");
  r1.filled_column(attribute);
  r2.filled_column(attribute);
  if (r1.row_count() != r2.row_count())
    throw error(errc::row_mismatch, "relations have " + std::to_string(r1.row_count()) + " and " +
                                        std::to_string(r2.row_count()) + " rows");

  std::map<std::uint64_t, const Row*> by_id;
  for (const auto& row : r2.rows()) by_id.emplace(row.id, &row);

  Relation out(r1.name() + "*" + r2.name(), {attribute}, {frame});
  std::vector<std::uint64_t> unmatched, conflicts;
  std::vector<std::pair<std::uint64_t, FocalSet>> cells;
  for (const auto& row : r1.rows()) {
    auto it = by_id.find(row.id);
    if (it == by_id.end()) {
      unmatched.push_back(row.id);
      continue;
    }
    FocalSet cell = intersect(*row.cells[c1], *it->second->cells[c2]);
    if (cell.is_empty())
      conflicts.push_back(row.id);
    else
      cells.emplace_back(row.id, cell);
  }
  if (!unmatched.empty())
    throw error(errc::row_mismatch, "rows missing from relation '" + r2.name() + "'", unmatched);
  if (!conflicts.empty())
    throw error(errc::null_conflict, "combination produces null values", conflicts);
  for (auto& [id, cell] : cells) out.add_row(id, {cell});
  return out;
}

/// Outcome of the unconditioned combinability decision.
struct CombinabilityWitness {
  bool feasible = false;
  /// Joint weights on intersecting focal pairs; present iff feasible.
  std::optional<std::map<std::pair<FocalSet, FocalSet>, Ratio>> joint_weights;
  /// A focal element disjoint from every focal element on the other side.
  std::optional<FocalSet> blocking_focal;
};

namespace detail {

inline std::optional<FocalSet> disjoint_from_all(const MassDistribution& side, const MassDistribution& other) {
  for (const auto& [a, wa] : side.focal()) {
    bool meets = false;
    for (const auto& [b, wb] : other.focal()) meets = meets || (a.bits() & b.bits()) != 0;
    if (!meets) return a;
  }
  return std::nullopt;
}

}  // namespace detail

/// Decides whether two unconditioned distributions admit a conflict-free
/// combined parent relation: a transportation plan with marginals m1 and m2
/// supported only on intersecting focal pairs. Scaled to integers over the
/// common denominator and solved as a bipartite max-flow.
inline CombinabilityWitness zadeh_combinable(const MassDistribution& m1, const MassDistribution& m2) {
  require_same_frame(m1.frame(), m2.frame(), "zadeh_combinable");
  if (m1.is_conditioned() || m2.is_conditioned())
    throw error(errc::conditioned_input, "zadeh_combinable expects unconditioned distributions");

  CombinabilityWitness out;
  if (auto blocking = detail::disjoint_from_all(m1, m2)) {
    out.blocking_focal = blocking;
    return out;
  }
  if (auto blocking = detail::disjoint_from_all(m2, m1)) {
    out.blocking_focal = blocking;
    return out;
  }

  const bigint scale = lcm(m1.common_denominator(), m2.common_denominator());
  auto count = [&](const Ratio& w) { return bigint(w.numerator() * (scale / w.denominator())); };

  const std::vector<std::pair<FocalSet, Ratio>> left(m1.focal().begin(), m1.focal().end());
  const std::vector<std::pair<FocalSet, Ratio>> right(m2.focal().begin(), m2.focal().end());
  const std::size_t source = 0, sink = 1 + left.size() + right.size();
  MaxFlow<bigint> flow(sink + 1);
  for (std::size_t i = 0; i < left.size(); ++i) flow.add_edge(source, 1 + i, count(left[i].second));
  for (std::size_t j = 0; j < right.size(); ++j)
    flow.add_edge(1 + left.size() + j, sink, count(right[j].second));
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> middle;
  for (std::size_t i = 0; i < left.size(); ++i)
    for (std::size_t j = 0; j < right.size(); ++j)
      if ((left[i].first.bits() & right[j].first.bits()) != 0)
        middle.emplace_back(i, j, flow.add_edge(1 + i, 1 + left.size() + j, scale));

  if (flow.solve(source, sink) != scale) return out;

  out.feasible = true;
  out.joint_weights.emplace();
  for (const auto& [i, j, edge] : middle) {
    const bigint& units = flow.flow_on(edge);
    if (units > 0) out.joint_weights->emplace(std::pair{left[i].first, right[j].first}, Ratio(units, scale));
  }
  return out;
}

/// Verifies Bel_A(D) <= Bel_B(D) <= Pls_B(D) <= Pls_A(D) for every D, where
/// rB refines rA row by row. Throws containment_violated when some B_i is
/// not a subset of A_i.
inline bool check_envelope(const Relation& ra, const Relation& rb, const std::string& attribute,
                           std::size_t cap = default_powerset_cap) {
  const Frame& frame = ra.frame_of(attribute);
  require_same_frame(frame, rb.frame_of(attribute), "check_envelope");
  const std::vector<FocalSet> a = ra.filled_column(attribute);
  const std::vector<FocalSet> b = rb.filled_column(attribute);
  if (a.size() != b.size())
    throw error(errc::row_mismatch, "relations have " + std::to_string(a.size()) + " and " +
                                        std::to_string(b.size()) + " rows");
  std::vector<std::uint64_t> violations;
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((b[i].bits() & ~a[i].bits()) != 0) violations.push_back(rb.rows()[i].id);
  if (!violations.empty())
    throw error(errc::containment_violated, "rows of the refined relation are not contained in their counterparts",
                violations);

  // Same row count on both sides, so the relative counts compare as integers.
  bool holds = true;
  for_each_subset(
      frame,
      [&](const FocalSet& d) {
        if (!holds) return;
        std::size_t bel_a = 0, bel_b = 0, pls_a = 0, pls_b = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
          bel_a += (a[i].bits() & ~d.bits()) == 0;
          bel_b += (b[i].bits() & ~d.bits()) == 0;
          pls_a += (a[i].bits() & d.bits()) != 0;
          pls_b += (b[i].bits() & d.bits()) != 0;
        }
        holds = bel_a <= bel_b && bel_b <= pls_b && pls_b <= pls_a;
      },
      cap);
  return holds;
}

}  // namespace evicomb
