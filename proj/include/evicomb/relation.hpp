#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "frame.hpp"

namespace evicomb {

/// A cell is either a non-empty subset of its attribute's frame or unfilled.
using Cell = std::optional<FocalSet>;

struct Row {
  std::uint64_t id;  // the Name column
  std::vector<Cell> cells;
};

/// A table of named rows with set-valued attribute cells.
class Relation {
 public:
  Relation(std::string name, std::vector<std::string> attributes, std::vector<Frame> frames)
      : name_(std::move(name)), attributes_(std::move(attributes)), frames_(std::move(frames)) {
    if (attributes_.size() != frames_.size())
      throw std::invalid_argument("Relation: one frame per attribute required");
    std::set<std::string> seen;
    for (const auto& a : attributes_)
      if (!seen.insert(a).second) throw error(errc::malformed_input, "duplicate attribute '" + a + "'");
  }

  void add_row(std::uint64_t id, std::vector<Cell> cells) {
    if (id == 0) throw error(errc::malformed_input, "row names must be positive integers", {id});
    if (cells.size() != attributes_.size())
      throw error(errc::malformed_input, "row " + std::to_string(id) + " has the wrong number of cells", {id});
    if (!ids_.insert(id).second)
      throw error(errc::malformed_input, "duplicate row name " + std::to_string(id), {id});
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!cells[c]) continue;
      require_same_frame(frames_[c], cells[c]->frame(), "relation cell");
      if (cells[c]->is_empty())
        throw error(errc::empty_cell, "row " + std::to_string(id) + " has a null value for " + attributes_[c], {id});
    }
    rows_.push_back({id, std::move(cells)});
  }

  const std::string& name() const { return name_; }
  const std::vector<std::string>& attributes() const { return attributes_; }
  const std::vector<Frame>& frames() const { return frames_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t row_count() const { return rows_.size(); }

  std::optional<std::size_t> attribute_index(const std::string& attribute) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i)
      if (attributes_[i] == attribute) return i;
    return std::nullopt;
  }

  std::size_t require_attribute(const std::string& attribute) const {
    auto i = attribute_index(attribute);
    if (!i) throw error(errc::unknown_attribute, "relation '" + name_ + "' has no attribute '" + attribute + "'");
    return *i;
  }

  const Frame& frame_of(const std::string& attribute) const { return frames_[require_attribute(attribute)]; }

  /// Filled cells of one attribute in row order; throws unfilled_cell naming
  /// every row that lacks a value.
  std::vector<FocalSet> filled_column(const std::string& attribute) const {
    std::size_t c = require_attribute(attribute);
    std::vector<FocalSet> out;
    std::vector<std::uint64_t> missing;
    for (const auto& row : rows_) {
      if (row.cells[c])
        out.push_back(*row.cells[c]);
      else
        missing.push_back(row.id);
    }
    if (!missing.empty())
      throw error(errc::unfilled_cell, "attribute '" + attribute + "' is unfilled in some rows", missing);
    return out;
  }

 private:
  std::string name_;
  std::vector<std::string> attributes_;
  std::vector<Frame> frames_;
  std::vector<Row> rows_;
  std::set<std::uint64_t> ids_;
};

}  // namespace evicomb
