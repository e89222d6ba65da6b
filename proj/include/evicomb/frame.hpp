#pragma once

#include <bit>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "error.hpp"

namespace evicomb {

/// Largest frame supported by the subset representation.
inline constexpr std::size_t max_frame_size = 64;

/// Frames up to this size may be swept exhaustively (Bel/Pls over 2^n sets).
inline constexpr std::size_t default_powerset_cap = 16;

namespace detail {

inline bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

inline std::optional<long long> parse_integer(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct frame_data {
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::size_t> index;
  // Integer value of every label, or empty if some label is not an integer.
  std::vector<long long> integer_values;
};

}  // namespace detail

/// Finite frame of discernment: an ordered universe of distinct labels.
/// Copies share the label table.
class Frame {
 public:
  static Frame build(const std::vector<std::string>& labels) {
    if (labels.empty()) throw error(errc::empty_frame, "frame must have at least one label");
    if (labels.size() > max_frame_size)
      throw error(errc::frame_too_large,
                  "frame has " + std::to_string(labels.size()) + " labels; at most " +
                      std::to_string(max_frame_size) + " are supported");
    auto data = std::make_shared<detail::frame_data>();
    data->labels = labels;
    bool all_integer = true;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!detail::valid_label(labels[i]))
        throw error(errc::malformed_expr, "invalid label '" + labels[i] + "'");
      if (!data->index.emplace(labels[i], i).second)
        throw error(errc::duplicate_label, "duplicate label '" + labels[i] + "'");
      if (all_integer) {
        if (auto v = detail::parse_integer(labels[i]))
          data->integer_values.push_back(*v);
        else
          all_integer = false;
      }
    }
    if (!all_integer) data->integer_values.clear();
    return Frame(std::move(data));
  }

  /// Frame whose labels are the decimal integers lo..hi.
  static Frame integer_range(long long lo, long long hi) {
    std::vector<std::string> labels;
    for (long long v = lo; v <= hi; ++v) labels.push_back(std::to_string(v));
    return build(labels);
  }

  std::size_t size() const { return data_->labels.size(); }
  const std::vector<std::string>& labels() const { return data_->labels; }
  const std::string& label(std::size_t i) const { return data_->labels.at(i); }

  std::optional<std::size_t> index_of(std::string_view label) const {
    auto it = data_->index.find(std::string(label));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }

  bool is_integer() const { return !data_->integer_values.empty(); }
  long long integer_value(std::size_t i) const { return data_->integer_values.at(i); }

  std::uint64_t full_mask() const {
    return size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size()) - 1;
  }

  friend bool operator==(const Frame& a, const Frame& b) {
    return a.data_ == b.data_ || a.data_->labels == b.data_->labels;
  }

 private:
  explicit Frame(std::shared_ptr<const detail::frame_data> d) : data_(std::move(d)) {}
  std::shared_ptr<const detail::frame_data> data_;
};

inline Frame build_frame(const std::vector<std::string>& labels) { return Frame::build(labels); }

/// A subset of a frame, stored as a bit mask over label indices.
class FocalSet {
 public:
  FocalSet(Frame frame, std::uint64_t bits) : frame_(std::move(frame)), bits_(bits) {
    if ((bits_ & ~frame_.full_mask()) != 0)
      throw error(errc::malformed_expr, "subset has members outside its frame");
  }

  static FocalSet empty(const Frame& f) { return FocalSet(f, 0); }
  static FocalSet full(const Frame& f) { return FocalSet(f, f.full_mask()); }
  static FocalSet singleton(const Frame& f, std::size_t i) {
    return FocalSet(f, std::uint64_t{1} << i);
  }

  const Frame& frame() const { return frame_; }
  std::uint64_t bits() const { return bits_; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool is_empty() const { return bits_ == 0; }
  bool is_full() const { return bits_ == frame_.full_mask(); }
  bool is_singleton() const { return size() == 1; }
  bool contains(std::size_t i) const { return i < 64 && ((bits_ >> i) & 1U) != 0; }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1)
      out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    return out;
  }

  friend bool operator==(const FocalSet& a, const FocalSet& b) {
    return a.bits_ == b.bits_ && a.frame_ == b.frame_;
  }

  /// Canonical order: lexicographic on the ascending member index lists,
  /// so {a} < {a,b} < {b}. Only meaningful within one frame.
  friend bool operator<(const FocalSet& a, const FocalSet& b) {
    std::uint64_t diff = a.bits_ ^ b.bits_;
    if (diff == 0) return false;
    int i = std::countr_zero(diff);
    if ((a.bits_ >> i) & 1U) return (b.bits_ >> i) != 0;
    return (a.bits_ >> i) == 0;
  }

 private:
  Frame frame_;
  std::uint64_t bits_;
};

inline void require_same_frame(const Frame& a, const Frame& b, std::string_view what) {
  if (!(a == b)) throw error(errc::frame_mismatch, std::string(what) + ": operands use different frames");
}

inline FocalSet intersect(const FocalSet& a, const FocalSet& b) {
  require_same_frame(a.frame(), b.frame(), "intersect");
  return FocalSet(a.frame(), a.bits() & b.bits());
}

inline FocalSet unite(const FocalSet& a, const FocalSet& b) {
  require_same_frame(a.frame(), b.frame(), "unite");
  return FocalSet(a.frame(), a.bits() | b.bits());
}

inline FocalSet complement(const FocalSet& a) {
  return FocalSet(a.frame(), ~a.bits() & a.frame().full_mask());
}

inline bool is_subset(const FocalSet& a, const FocalSet& b) {
  require_same_frame(a.frame(), b.frame(), "is_subset");
  return (a.bits() & ~b.bits()) == 0;
}

inline bool intersects(const FocalSet& a, const FocalSet& b) {
  require_same_frame(a.frame(), b.frame(), "intersects");
  return (a.bits() & b.bits()) != 0;
}

struct SetAlgebra {
  FocalSet intersect;
  FocalSet unite;
  FocalSet complement_of_a;
  bool a_subset_of_b;
  bool a_empty;
};

inline SetAlgebra set_algebra(const FocalSet& a, const FocalSet& b) {
  return SetAlgebra{intersect(a, b), unite(a, b), complement(a), is_subset(a, b), a.is_empty()};
}

/// Canonical rendering: `*` for the full frame, otherwise `{l1|l2|...}` in
/// frame order (`{}` for the empty set).
inline std::string render(const FocalSet& s) {
  if (s.is_full()) return "*";
  std::string out = "{";
  bool first = true;
  for (std::size_t i : s.members()) {
    if (!first) out += '|';
    out += s.frame().label(i);
    first = false;
  }
  out += '}';
  return out;
}

/// Parses `{a|b|c}`, `{}`, `*` or `[lo..hi]` (integer-labelled frames only;
/// selects every label whose value lies in the closed range).
inline FocalSet parse_set_expr(const Frame& frame, std::string_view expr) {
  auto fail = [&](const std::string& why) -> error {
    return error(errc::malformed_expr, "malformed set expression '" + std::string(expr) + "': " + why);
  };
  while (!expr.empty() && (expr.front() == ' ' || expr.front() == '\t')) expr.remove_prefix(1);
  while (!expr.empty() && (expr.back() == ' ' || expr.back() == '\t')) expr.remove_suffix(1);
  if (expr.empty()) throw fail("empty");

  if (expr == "*") return FocalSet::full(frame);

  if (expr.front() == '{') {
    if (expr.back() != '}') throw fail("missing '}'");
    std::string_view body = expr.substr(1, expr.size() - 2);
    std::uint64_t bits = 0;
    if (body.empty()) return FocalSet(frame, 0);
    std::size_t start = 0;
    while (true) {
      std::size_t bar = body.find('|', start);
      std::string_view label = body.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
      if (!detail::valid_label(label)) throw fail("bad label '" + std::string(label) + "'");
      auto idx = frame.index_of(label);
      if (!idx) throw error(errc::unknown_label, "unknown label '" + std::string(label) + "'");
      bits |= std::uint64_t{1} << *idx;
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
    return FocalSet(frame, bits);
  }

  if (expr.front() == '[') {
    if (expr.back() != ']') throw fail("missing ']'");
    std::string_view body = expr.substr(1, expr.size() - 2);
    std::size_t dots = body.find("..");
    if (dots == std::string_view::npos) throw fail("expected 'lo..hi'");
    auto lo = detail::parse_integer(body.substr(0, dots));
    auto hi = detail::parse_integer(body.substr(dots + 2));
    if (!lo || !hi) throw fail("range bounds must be integers");
    if (*lo > *hi) throw fail("range lower bound exceeds upper bound");
    if (!frame.is_integer())
      throw error(errc::range_over_non_integer_frame,
                  "range '" + std::string(expr) + "' used over a frame with non-integer labels");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < frame.size(); ++i) {
      long long v = frame.integer_value(i);
      if (v >= *lo && v <= *hi) bits |= std::uint64_t{1} << i;
    }
    return FocalSet(frame, bits);
  }

  throw fail("expected '{', '[' or '*'");
}

inline void require_enumerable(const Frame& frame, std::size_t cap, std::string_view what) {
  if (frame.size() > cap || frame.size() >= 63)
    throw error(errc::frame_too_large, std::string(what) + ": frame of size " + std::to_string(frame.size()) +
                                           " exceeds the powerset cap of " + std::to_string(cap));
}

/// Calls f(FocalSet) for every subset of the frame, in mask order.
template <typename F>
void for_each_subset(const Frame& frame, F&& f, std::size_t cap = default_powerset_cap) {
  require_enumerable(frame, cap, "powerset enumeration");
  const std::uint64_t count = std::uint64_t{1} << frame.size();
  for (std::uint64_t bits = 0; bits < count; ++bits) f(FocalSet(frame, bits));
}

}  // namespace evicomb
