#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace evicomb {

enum class errc {
  // input syntax
  duplicate_label,
  empty_frame,
  unknown_label,
  malformed_expr,
  range_over_non_integer_frame,
  malformed_input,
  usage,
  // domain
  frame_mismatch,
  frame_too_large,
  mass_on_empty_set,
  nonpositive_weight,
  weights_do_not_sum_to_one,
  total_conflict,
  unknown_attribute,
  unfilled_cell,
  empty_cell,
  size_not_common_multiple,
  null_conflict,
  row_mismatch,
  containment_violated,
  conditioned_input,
  empty_selection,
  non_singleton_focal,
  not_combinable,
};

inline std::string_view to_string(errc code) {
  switch (code) {
    case errc::duplicate_label: return "duplicate_label";
    case errc::empty_frame: return "empty_frame";
    case errc::unknown_label: return "unknown_label";
    case errc::malformed_expr: return "malformed_expr";
    case errc::range_over_non_integer_frame: return "range_over_non_integer_frame";
    case errc::malformed_input: return "malformed_input";
    case errc::usage: return "usage";
    case errc::frame_mismatch: return "frame_mismatch";
    case errc::frame_too_large: return "frame_too_large";
    case errc::mass_on_empty_set: return "mass_on_empty_set";
    case errc::nonpositive_weight: return "nonpositive_weight";
    case errc::weights_do_not_sum_to_one: return "weights_do_not_sum_to_one";
    case errc::total_conflict: return "total_conflict";
    case errc::unknown_attribute: return "unknown_attribute";
    case errc::unfilled_cell: return "unfilled_cell";
    case errc::empty_cell: return "empty_cell";
    case errc::size_not_common_multiple: return "size_not_common_multiple";
    case errc::null_conflict: return "null_conflict";
    case errc::row_mismatch: return "row_mismatch";
    case errc::containment_violated: return "containment_violated";
    case errc::conditioned_input: return "conditioned_input";
    case errc::empty_selection: return "empty_selection";
    case errc::non_singleton_focal: return "non_singleton_focal";
    case errc::not_combinable: return "not_combinable";
  }
  return "unknown";
}

/// True for errors caused by unreadable input (bad syntax, unknown labels)
/// rather than by a well-formed input violating a domain precondition.
inline bool is_input_error(errc code) {
  switch (code) {
    case errc::duplicate_label:
    case errc::empty_frame:
    case errc::unknown_label:
    case errc::malformed_expr:
    case errc::range_over_non_integer_frame:
    case errc::malformed_input:
    case errc::usage:
      return true;
    default:
      return false;
  }
}

/// Library exception. Carries the offending row ids and rendered focal sets
/// so front ends can name them without parsing the message.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message, std::vector<std::uint64_t> rows = {},
        std::vector<std::string> sets = {})
      : std::runtime_error(message), code_(code), rows_(std::move(rows)), sets_(std::move(sets)) {}

  errc code() const noexcept { return code_; }
  const std::vector<std::uint64_t>& rows() const noexcept { return rows_; }
  const std::vector<std::string>& sets() const noexcept { return sets_; }

 private:
  errc code_;
  std::vector<std::uint64_t> rows_;
  std::vector<std::string> sets_;
};

}  // namespace evicomb
