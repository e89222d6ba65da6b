#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mass.hpp"
#include "simplex.hpp"

namespace evicomb {

/// Default cap on frame size for the exact joint-feasibility solve.
inline constexpr std::size_t default_feasibility_cap = 10;

/// Point probabilities over a frame, indexed like its labels.
class ProbabilityDistribution {
 public:
  ProbabilityDistribution(Frame frame, std::vector<Ratio> p) : frame_(std::move(frame)), p_(std::move(p)) {
    if (p_.size() != frame_.size())
      throw error(errc::malformed_input, "probability vector length differs from frame size");
    Ratio total;
    for (const auto& x : p_) total += x;
    if (!total.is_one())
      throw error(errc::weights_do_not_sum_to_one, "probabilities sum to " + total.str() + ", not 1");
  }

  const Frame& frame() const { return frame_; }
  const std::vector<Ratio>& values() const { return p_; }
  const Ratio& operator[](std::size_t i) const { return p_.at(i); }

  Ratio measure(const FocalSet& a) const {
    require_same_frame(frame_, a.frame(), "probability measure");
    Ratio sum;
    for (std::size_t i : a.members()) sum += p_[i];
    return sum;
  }

  friend bool operator==(const ProbabilityDistribution& a, const ProbabilityDistribution& b) {
    return a.frame_ == b.frame_ && a.p_ == b.p_;
  }

 private:
  Frame frame_;
  std::vector<Ratio> p_;
};

/// Bel(A) <= P(A) <= Pls(A) for every subset A, both sides checked.
inline bool satisfies(const ProbabilityDistribution& p, const MassDistribution& m,
                      std::size_t cap = default_powerset_cap) {
  require_same_frame(p.frame(), m.frame(), "satisfies");
  bool ok = true;
  for_each_subset(
      m.frame(),
      [&](const FocalSet& a) {
        if (!ok) return;
        const Ratio pa = p.measure(a);
        ok = belief(m, a) <= pa && pa <= plausibility(m, a);
      },
      cap);
  return ok;
}

/// Spreads each focal weight evenly over the members of its focal set.
inline ProbabilityDistribution allocation_distribution(const MassDistribution& m,
                                                       std::size_t cap = default_powerset_cap) {
  require_enumerable(m.frame(), cap, "allocation_distribution");
  std::vector<Ratio> p(m.frame().size());
  for (const auto& [s, w] : m.focal()) {
    const Ratio share = w / Ratio(s.size());
    for (std::size_t i : s.members()) p[i] += share;
  }
  return ProbabilityDistribution(m.frame(), std::move(p));
}

/// Finds P with Bel_k(A) <= P(A) for every A and k = 1, 2, or reports none.
/// Upper bounds follow from the lower ones on complements, so only the
/// belief rows and the simplex constraints enter the linear system.
inline std::optional<ProbabilityDistribution> joint_satisfiable(const MassDistribution& m1,
                                                                const MassDistribution& m2,
                                                                std::size_t cap = default_feasibility_cap) {
  require_same_frame(m1.frame(), m2.frame(), "joint_satisfiable");
  const Frame& frame = m1.frame();
  require_enumerable(frame, cap, "joint_satisfiable");
  const std::size_t n = frame.size();

  FeasibilitySolver::matrix a;
  std::vector<rational> b;
  a.emplace_back(n, rational(1));
  b.emplace_back(1);
  a.emplace_back(n, rational(-1));
  b.emplace_back(-1);

  const std::uint64_t full = frame.full_mask();
  for (std::uint64_t bits = 1; bits < full; ++bits) {
    const FocalSet set(frame, bits);
    Ratio lower = std::max(belief(m1, set), belief(m2, set));
    if (lower.is_zero()) continue;
    std::vector<rational> row(n);
    for (std::size_t i : set.members()) row[i] = -1;
    a.push_back(std::move(row));
    b.push_back(-lower.value());
  }

  auto x = find_feasible_point(a, b);
  if (!x) return std::nullopt;
  std::vector<Ratio> p;
  p.reserve(n);
  for (auto& v : *x) p.emplace_back(v);
  ProbabilityDistribution witness(frame, std::move(p));
  if (!satisfies(witness, m1, cap) || !satisfies(witness, m2, cap))
    throw std::logic_error("joint_satisfiable: solver returned a point outside the constraint sets");
  return witness;
}

}  // namespace evicomb
