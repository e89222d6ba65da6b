#pragma once

#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "conditional.hpp"
#include "probability.hpp"
#include "relation.hpp"

namespace evicomb::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// Integers that fit in 64 bits are written as JSON numbers, larger ones as
/// decimal strings.
inline json integer_to_json(const bigint& v) {
  if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(v);
  return v.str();
}

inline bigint integer_from_json(const json& j, const char* field) {
  if (j.is_number_unsigned()) return bigint(j.get<std::uint64_t>());
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return bigint(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) return bigint(s);
  }
  throw error(errc::malformed_input, std::string("'") + field + "' must be a non-negative decimal integer");
}

inline Ratio ratio_from_json(const json& entry) {
  if (!entry.is_object() || !entry.contains("num") || !entry.contains("den"))
    throw error(errc::malformed_input, "weight entry needs 'num' and 'den'");
  bigint num = integer_from_json(entry.at("num"), "num");
  bigint den = integer_from_json(entry.at("den"), "den");
  if (den == 0) throw error(errc::malformed_input, "'den' must be positive");
  if (gcd(num, den) != 1 && num != 0)
    throw error(errc::malformed_input, "weight " + num.str() + "/" + den.str() + " is not in lowest terms");
  return Ratio(num, den);
}

inline void put_ratio(json& j, const Ratio& r) {
  j["num"] = integer_to_json(r.numerator());
  j["den"] = integer_to_json(r.denominator());
}

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

/// `lo..hi` for an integer-labelled frame, otherwise `l1|l2|...`.
inline Frame parse_frame_spec(const std::string& spec) {
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    auto lo = detail::parse_integer(std::string_view(spec).substr(0, dots));
    auto hi = detail::parse_integer(std::string_view(spec).substr(dots + 2));
    if (!lo || !hi || *lo > *hi) throw error(errc::malformed_expr, "bad frame range '" + spec + "'");
    if (*hi - *lo >= static_cast<long long>(max_frame_size))
      throw error(errc::frame_too_large, "frame range '" + spec + "' is too large");
    return Frame::integer_range(*lo, *hi);
  }
  std::vector<std::string> labels;
  std::stringstream ss(spec);
  for (std::string label; std::getline(ss, label, '|');) labels.push_back(label);
  if (!spec.empty() && spec.back() == '|') labels.emplace_back();
  return build_frame(labels);
}

inline Frame frame_from_json(const json& j) {
  if (j.is_string()) return parse_frame_spec(j.get<std::string>());
  if (!j.is_array()) throw error(errc::malformed_input, "frame must be an array of labels");
  std::vector<std::string> labels;
  for (const auto& l : j) {
    if (!l.is_string()) throw error(errc::malformed_input, "frame labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  return build_frame(labels);
}

using FrameTable = std::map<std::string, Frame>;

/// `{"Age": "20..35", "Sex": ["M", "F"]}`
inline FrameTable frames_from_json(const json& j) {
  if (!j.is_object()) throw error(errc::malformed_input, "frames file must be a JSON object");
  FrameTable out;
  for (const auto& [attr, spec] : j.items()) out.insert_or_assign(attr, frame_from_json(spec));
  return out;
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw error(errc::malformed_input, what + ": invalid JSON (" + e.what() + ")");
  }
}

// ---------------------------------------------------------------------------
// Mass distributions
// ---------------------------------------------------------------------------

inline json mass_to_json(const MassDistribution& m) {
  json j;
  j["frame"] = m.frame().labels();
  j["conditions"] = json::array();
  for (const auto& c : m.conditions()) j["conditions"].push_back(c);
  j["focal"] = json::array();
  for (const auto& [s, w] : m.focal()) {
    json entry;
    entry["set"] = render(s);
    put_ratio(entry, w);
    j["focal"].push_back(std::move(entry));
  }
  return j;
}

inline MassDistribution mass_from_json(const json& j) {
  if (!j.is_object() || !j.contains("frame") || !j.contains("focal"))
    throw error(errc::malformed_input, "mass JSON needs 'frame' and 'focal'");
  Frame frame = frame_from_json(j.at("frame"));
  Conditions conditions;
  if (j.contains("conditions")) {
    if (!j.at("conditions").is_array()) throw error(errc::malformed_input, "'conditions' must be an array");
    for (const auto& c : j.at("conditions")) {
      if (!c.is_string()) throw error(errc::malformed_input, "condition tags must be strings");
      conditions.insert(c.get<std::string>());
    }
  }
  if (!j.at("focal").is_array()) throw error(errc::malformed_input, "'focal' must be an array");
  std::vector<std::pair<FocalSet, Ratio>> pairs;
  for (const auto& entry : j.at("focal")) {
    if (!entry.is_object() || !entry.contains("set") || !entry.at("set").is_string())
      throw error(errc::malformed_input, "focal entry needs a 'set' string");
    pairs.emplace_back(parse_set_expr(frame, entry.at("set").get<std::string>()), ratio_from_json(entry));
  }
  return from_focal_list(frame, pairs, std::move(conditions));
}

// ---------------------------------------------------------------------------
// Probability witnesses
// ---------------------------------------------------------------------------

inline json probability_to_json(const ProbabilityDistribution& p) {
  json j;
  j["p"] = json::array();
  for (std::size_t i = 0; i < p.frame().size(); ++i) {
    json entry;
    entry["label"] = p.frame().label(i);
    put_ratio(entry, p[i]);
    j["p"].push_back(std::move(entry));
  }
  return j;
}

/// Labels absent from the file get probability zero.
inline ProbabilityDistribution probability_from_json(const json& j, const Frame& frame) {
  if (!j.is_object() || !j.contains("p") || !j.at("p").is_array())
    throw error(errc::malformed_input, "probability JSON needs a 'p' array");
  std::vector<Ratio> p(frame.size());
  std::vector<bool> seen(frame.size());
  for (const auto& entry : j.at("p")) {
    if (!entry.is_object() || !entry.contains("label") || !entry.at("label").is_string())
      throw error(errc::malformed_input, "probability entry needs a 'label' string");
    const auto& label = entry.at("label").get_ref<const std::string&>();
    auto idx = frame.index_of(label);
    if (!idx) throw error(errc::unknown_label, "unknown label '" + label + "'");
    if (seen[*idx]) throw error(errc::malformed_input, "label '" + label + "' listed twice");
    seen[*idx] = true;
    p[*idx] = ratio_from_json(entry);
  }
  return ProbabilityDistribution(frame, std::move(p));
}

// ---------------------------------------------------------------------------
// Multivalued mappings
// ---------------------------------------------------------------------------

/// `{"source_frame": [...], "target_frame": [...], "map": {"M": "[20..22]"}}`
inline MultivaluedMapping mapping_from_json(const json& j) {
  if (!j.is_object() || !j.contains("source_frame") || !j.contains("target_frame") || !j.contains("map"))
    throw error(errc::malformed_input, "mapping JSON needs 'source_frame', 'target_frame' and 'map'");
  Frame source = frame_from_json(j.at("source_frame"));
  Frame target = frame_from_json(j.at("target_frame"));
  const json& map = j.at("map");
  if (!map.is_object()) throw error(errc::malformed_input, "'map' must be an object");
  std::vector<std::optional<FocalSet>> images(source.size());
  for (const auto& [label, expr] : map.items()) {
    auto idx = source.index_of(label);
    if (!idx) throw error(errc::unknown_label, "unknown source label '" + label + "'");
    if (!expr.is_string()) throw error(errc::malformed_input, "image of '" + label + "' must be a set string");
    images[*idx] = parse_set_expr(target, expr.get<std::string>());
  }
  std::vector<FocalSet> total;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!images[i]) throw error(errc::malformed_input, "no image given for source label '" + source.label(i) + "'");
    total.push_back(*images[i]);
  }
  return MultivaluedMapping(source, target, std::move(total));
}

// ---------------------------------------------------------------------------
// Relation CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace detail

/// Reads `Name,<attr1>,...` with set-expression cells; an empty cell is
/// unfilled. Every attribute needs a frame in `frames`.
inline Relation read_relation_csv(std::istream& in, const FrameTable& frames, const std::string& name) {
  const auto lines = detail::read_lines(in);
  if (lines.empty()) throw error(errc::malformed_input, name + ": empty CSV");
  const auto header = detail::split_csv_line(lines.front());
  if (header.front() != "Name") throw error(errc::malformed_input, name + ": header must start with 'Name'");
  std::vector<std::string> attributes(header.begin() + 1, header.end());
  std::vector<Frame> attr_frames;
  for (const auto& a : attributes) {
    auto it = frames.find(a);
    if (it == frames.end())
      throw error(errc::usage, name + ": no frame declared for attribute '" + a + "' (use --frame " + a + "=...)");
    attr_frames.push_back(it->second);
  }
  Relation rel(name, attributes, attr_frames);
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto fields = detail::split_csv_line(lines[ln]);
    const std::string where = name + ":" + std::to_string(ln + 1);
    if (fields.size() != header.size())
      throw error(errc::malformed_input, where + ": expected " + std::to_string(header.size()) + " fields");
    auto id = evicomb::detail::parse_integer(fields[0]);
    if (!id || *id <= 0) throw error(errc::malformed_input, where + ": Name must be a positive integer");
    std::vector<Cell> cells;
    for (std::size_t c = 1; c < fields.size(); ++c) {
      if (fields[c].empty())
        cells.emplace_back();
      else
        cells.emplace_back(parse_set_expr(attr_frames[c - 1], fields[c]));
    }
    rel.add_row(static_cast<std::uint64_t>(*id), std::move(cells));
  }
  return rel;
}

inline std::string relation_to_csv(const Relation& r) {
  std::string out = "Name";
  for (const auto& a : r.attributes()) out += "," + a;
  out += '\n';
  for (const auto& row : r.rows()) {
    out += std::to_string(row.id);
    for (const auto& cell : row.cells) out += "," + (cell ? render(*cell) : std::string());
    out += '\n';
  }
  return out;
}

/// `Name,<attr>1,<attr>2,E1,E2` with `1` marking the evidence a row carries.
inline std::string conditional_parent_to_csv(const ConditionalParent& p, const std::string& attribute = "Age") {
  std::string out = "Name," + attribute + "1," + attribute + "2,E1,E2\n";
  for (const auto& r : p.rows) {
    out += std::to_string(r.id) + ",";
    out += (r.cell_1 ? render(*r.cell_1) : "") + ",";
    out += (r.cell_2 ? render(*r.cell_2) : "") + ",";
    out += std::string(r.tag_1 ? "1" : "") + "," + (r.tag_2 ? "1" : "") + "\n";
  }
  return out;
}

inline json relation_to_json(const Relation& r) {
  json j;
  j["name"] = r.name();
  j["attributes"] = r.attributes();
  j["rows"] = json::array();
  for (const auto& row : r.rows()) {
    json jr;
    jr["Name"] = row.id;
    for (std::size_t c = 0; c < row.cells.size(); ++c)
      jr[r.attributes()[c]] = row.cells[c] ? json(render(*row.cells[c])) : json(nullptr);
    j["rows"].push_back(std::move(jr));
  }
  return j;
}

}  // namespace evicomb::io
