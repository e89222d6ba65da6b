#pragma once

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"
#include "relational_model.hpp"

namespace evicomb::cli {

using io::json;

enum exit_code : int { ok = 0, usage_error = 1, domain_error = 2 };

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::usage, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MassDistribution load_mass(const std::string& path) {
  return io::mass_from_json(io::parse_json(read_file(path), path));
}

struct FrameOptions {
  std::vector<std::string> specs;  // ATTR=SPEC
  std::string file;

  io::FrameTable table() const {
    io::FrameTable frames;
    if (!file.empty()) frames = io::frames_from_json(io::parse_json(read_file(file), file));
    for (const auto& s : specs) {
      auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0)
        throw error(errc::usage, "--frame expects ATTR=SPEC, got '" + s + "'");
      frames.insert_or_assign(s.substr(0, eq), io::parse_frame_spec(s.substr(eq + 1)));
    }
    return frames;
  }
};

inline Relation load_relation(const std::string& path, const FrameOptions& frames) {
  std::istringstream in(read_file(path));
  return io::read_relation_csv(in, frames.table(), path);
}

inline json ratio_json(const Ratio& r) {
  json j;
  io::put_ratio(j, r);
  return j;
}

inline bool is_ratio(const json& j) {
  return j.is_object() && j.size() == 2 && j.contains("num") && j.contains("den");
}

inline std::string scalar_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "-";
  if (is_ratio(j)) {
    std::string num = j["num"].is_string() ? j["num"].get<std::string>() : j["num"].dump();
    std::string den = j["den"].is_string() ? j["den"].get<std::string>() : j["den"].dump();
    return den == "1" ? num : num + "/" + den;
  }
  return j.dump();
}

// Flattens the payload into aligned `path  value` lines.
inline void flatten(const json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object() && !is_ratio(j)) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, out);
    if (j.empty()) out.emplace_back(path, "{}");
  } else if (j.is_array()) {
    bool scalars = std::all_of(j.begin(), j.end(), [](const json& e) { return !e.is_structured(); });
    if (scalars) {
      std::string line;
      for (const auto& e : j) line += (line.empty() ? "" : " ") + scalar_text(e);
      out.emplace_back(path, line.empty() ? "[]" : line);
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out.emplace_back(path, scalar_text(j));
  }
}

inline std::string render_table(const json& report) {
  std::vector<std::pair<std::string, std::string>> lines;
  flatten(report, "", lines);
  std::size_t width = 0;
  for (const auto& [k, v] : lines) width = std::max(width, k.size());
  std::string out;
  for (const auto& [k, v] : lines) out += k + std::string(width - k.size() + 2, ' ') + v + "\n";
  return out;
}

inline json error_json(const error& e) {
  json j;
  j["error"] = std::string(to_string(e.code()));
  j["message"] = e.what();
  if (!e.rows().empty()) j["rows"] = e.rows();
  if (!e.sets().empty()) j["sets"] = e.sets();
  return j;
}

}  // namespace detail

/// Runs one invocation. `args` excludes the program name. The report is
/// written to `out` only on success; diagnostics go to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Dempster-Shafer evidence analysis over relational models", "evicomb"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "table"}));

  std::string file1, file2, attr, set_expr, where, model = "conditional", out_path, map_path;
  bool witness = false;
  detail::FrameOptions frames;

  auto add_frames = [&](CLI::App* sub) {
    sub->add_option("--frame", frames.specs, "Attribute frame: ATTR=lo..hi or ATTR=l1|l2|...");
    sub->add_option("--frames", frames.file, "JSON file mapping attributes to frames");
  };

  auto* summarize_cmd = app.add_subcommand("summarize", "Granular distribution of a relation attribute");
  summarize_cmd->add_option("relation", file1)->required();
  summarize_cmd->add_option("--attr", attr)->required();
  add_frames(summarize_cmd);

  auto* where_cmd = app.add_subcommand("summarize-where", "Conditional granular distribution");
  where_cmd->add_option("relation", file1)->required();
  where_cmd->add_option("--attr", attr)->required();
  where_cmd->add_option("--where", where, "K=V[,K=V]")->required();
  add_frames(where_cmd);

  auto* bel_cmd = app.add_subcommand("bel", "Belief of a set");
  bel_cmd->add_option("mass", file1)->required();
  bel_cmd->add_option("--set", set_expr)->required();
  auto* pls_cmd = app.add_subcommand("pls", "Plausibility of a set");
  pls_cmd->add_option("mass", file1)->required();
  pls_cmd->add_option("--set", set_expr)->required();

  auto* combine_cmd = app.add_subcommand("combine", "Dempster's rule of combination");
  combine_cmd->add_option("m1", file1)->required();
  combine_cmd->add_option("m2", file2)->required();

  auto* combinable_cmd = app.add_subcommand("combinable", "Combinability under either relational model");
  combinable_cmd->add_option("m1", file1)->required();
  combinable_cmd->add_option("m2", file2)->required();
  combinable_cmd->add_option("--model", model)->check(CLI::IsMember({"zadeh", "conditional"}));
  combinable_cmd->add_flag("--witness", witness, "Include the joint weights or parent relation");

  auto* parent_cmd = app.add_subcommand("parent", "Conflict-free conditional parent relation");
  parent_cmd->add_option("m1", file1)->required();
  parent_cmd->add_option("m2", file2)->required();
  parent_cmd->add_option("--out", out_path)->required();
  std::string parent_attr = "Age";
  parent_cmd->add_option("--attr", parent_attr, "Attribute name for the CSV header");

  auto* propagate_cmd = app.add_subcommand("propagate", "Push a distribution through a multivalued mapping");
  propagate_cmd->add_option("mass", file1)->required();
  propagate_cmd->add_option("--map", map_path)->required();

  auto* relcombine_cmd = app.add_subcommand("relcombine", "Entrywise intersection of two relations");
  relcombine_cmd->add_option("r1", file1)->required();
  relcombine_cmd->add_option("r2", file2)->required();
  relcombine_cmd->add_option("--attr", attr)->required();
  add_frames(relcombine_cmd);

  auto* satisfies_cmd = app.add_subcommand("satisfies", "Does P respect Bel <= P <= Pls");
  satisfies_cmd->add_option("p", file1)->required();
  satisfies_cmd->add_option("mass", file2)->required();

  auto* satisfiable_cmd = app.add_subcommand("satisfiable", "Find P satisfying both constraint sets");
  satisfiable_cmd->add_option("m1", file1)->required();
  satisfiable_cmd->add_option("m2", file2)->required();

  auto* envelope_cmd = app.add_subcommand("check-envelope", "Verify the belief envelope of a refined relation");
  envelope_cmd->add_option("ra", file1)->required();
  envelope_cmd->add_option("rb", file2)->required();
  envelope_cmd->add_option("--attr", attr)->required();
  add_frames(envelope_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage_error;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string verb = sub->get_name();
  json report;
  report["verb"] = verb;
  json diagnostics = json::array();

  try {
    json result;
    if (sub == summarize_cmd) {
      GranularSummary s = summarize(detail::load_relation(file1, frames), attr);
      result["distribution"] = io::mass_to_json(s.distribution);
      result["source_relation"] = s.source_relation;
      result["attribute"] = s.attribute;
      result["row_count"] = s.row_count;
    } else if (sub == where_cmd) {
      std::vector<std::pair<std::string, std::string>> condition;
      std::stringstream ss(where);
      for (std::string item; std::getline(ss, item, ',');) {
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
          throw error(errc::usage, "--where expects K=V[,K=V], got '" + where + "'");
        condition.emplace_back(item.substr(0, eq), item.substr(eq + 1));
      }
      result = io::mass_to_json(summarize_where(detail::load_relation(file1, frames), attr, condition));
    } else if (sub == bel_cmd || sub == pls_cmd) {
      MassDistribution m = detail::load_mass(file1);
      FocalSet d = parse_set_expr(m.frame(), set_expr);
      result["set"] = render(d);
      result["value"] = detail::ratio_json(sub == bel_cmd ? belief(m, d) : plausibility(m, d));
    } else if (sub == combine_cmd) {
      MassDistribution m1 = detail::load_mass(file1), m2 = detail::load_mass(file2);
      ConflictReport k = conflict_weight(m1, m2);
      MassDistribution m12 = dempster_combine(m1, m2);
      result["distribution"] = io::mass_to_json(m12);
      result["conflict_weight"] = detail::ratio_json(k.conflict_weight);
    } else if (sub == combinable_cmd) {
      MassDistribution m1 = detail::load_mass(file1), m2 = detail::load_mass(file2);
      result["model"] = model;
      if (model == "zadeh") {
        CombinabilityWitness w = zadeh_combinable(m1, m2);
        result["combinable"] = w.feasible;
        result["blocking_focal"] = w.blocking_focal ? json(render(*w.blocking_focal)) : json(nullptr);
        if (witness && w.joint_weights) {
          result["joint_weights"] = json::array();
          for (const auto& [pair, weight] : *w.joint_weights) {
            json e;
            e["first"] = render(pair.first);
            e["second"] = render(pair.second);
            io::put_ratio(e, weight);
            result["joint_weights"].push_back(std::move(e));
          }
        }
        if (w.blocking_focal)
          diagnostics.push_back("focal element " + render(*w.blocking_focal) +
                                " is disjoint from every focal element of the other distribution");
      } else {
        bool c = conditional_combinable(m1, m2);
        result["combinable"] = c;
        result["conflict_weight"] = detail::ratio_json(conflict_weight(m1, m2).conflict_weight);
        if (witness && c) {
          ConditionalParent p = build_conflict_free_parent(m1, m2);
          result["parent_csv"] = io::conditional_parent_to_csv(p);
        }
      }
    } else if (sub == parent_cmd) {
      MassDistribution m1 = detail::load_mass(file1), m2 = detail::load_mass(file2);
      ConditionalParent p = build_conflict_free_parent(m1, m2);
      std::size_t shared = 0;
      for (const auto& r : p.rows) shared += r.tag_1 && r.tag_2;
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw error(errc::usage, "cannot write '" + out_path + "'");
      file << io::conditional_parent_to_csv(p, parent_attr);
      result["out"] = out_path;
      result["row_count"] = p.rows.size();
      result["shared_rows"] = shared;
      result["evidence_tags"] = {p.evidence_tags.first, p.evidence_tags.second};
    } else if (sub == propagate_cmd) {
      MassDistribution m = detail::load_mass(file1);
      MultivaluedMapping gamma = io::mapping_from_json(io::parse_json(detail::read_file(map_path), map_path));
      result = io::mass_to_json(propagate(m, gamma));
    } else if (sub == relcombine_cmd) {
      Relation r1 = detail::load_relation(file1, frames), r2 = detail::load_relation(file2, frames);
      result = io::relation_to_json(combine_relations(r1, r2, attr));
    } else if (sub == satisfies_cmd) {
      MassDistribution m = detail::load_mass(file2);
      ProbabilityDistribution p = io::probability_from_json(io::parse_json(detail::read_file(file1), file1), m.frame());
      bool holds = satisfies(p, m);
      result["satisfies"] = holds;
      if (!holds) {
        for_each_subset(m.frame(), [&](const FocalSet& a) {
          if (!result["violation"].is_null()) return;
          Ratio pa = p.measure(a), bel = belief(m, a), pls = plausibility(m, a);
          if (bel <= pa && pa <= pls) return;
          json v;
          v["set"] = render(a);
          v["bel"] = detail::ratio_json(bel);
          v["p"] = detail::ratio_json(pa);
          v["pls"] = detail::ratio_json(pls);
          result["violation"] = std::move(v);
        });
      }
    } else if (sub == satisfiable_cmd) {
      MassDistribution m1 = detail::load_mass(file1), m2 = detail::load_mass(file2);
      auto p = joint_satisfiable(m1, m2);
      result["satisfiable"] = p.has_value();
      result["witness"] = p ? io::probability_to_json(*p) : json(nullptr);
    } else if (sub == envelope_cmd) {
      Relation ra = detail::load_relation(file1, frames), rb = detail::load_relation(file2, frames);
      result["holds"] = check_envelope(ra, rb, attr);
    }
    report["result"] = std::move(result);
  } catch (const error& e) {
    err << detail::error_json(e).dump() << "\n";
    return is_input_error(e.code()) ? usage_error : domain_error;
  } catch (const std::exception& e) {
    json j;
    j["error"] = "internal";
    j["message"] = e.what();
    err << j.dump() << "\n";
    return domain_error;
  }

  report["diagnostics"] = std::move(diagnostics);
  out << (format == "table" ? detail::render_table(report) : report.dump(2) + "\n");
  return ok;
}

}  // namespace evicomb::cli
