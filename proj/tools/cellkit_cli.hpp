#pragma once

// Command-line front end. Exit codes: 0 success or a "yes" verdict, 1 a
// "no" verdict, 2 usage, input or validation errors.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cellkit/cellkit.hpp"

namespace cellkit::cli {

enum ExitStatus : int { success = 0, verdict_false = 1, usage_error = 2 };

namespace detail {

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    auto first = item.find_first_not_of(" \t");
    auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) continue;
    out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

inline std::string braces(const KripkeModel& k, const std::vector<StateId>& states) {
  std::string out = "{";
  for (std::size_t i = 0; i < states.size(); ++i) out += (i ? ", " : "") + k.states()[states[i]];
  return out + "}";
}

inline Json names(const KripkeModel& k, const std::vector<StateId>& states) {
  Json out = Json::array();
  for (StateId s : states) out.push_back(k.states()[s]);
  return out;
}

inline Json class_list(const KripkeModel& k, const Partition& p) {
  Json out = Json::array();
  for (const auto& c : p.classes) out.push_back(names(k, c));
  return out;
}

inline std::string class_line(const KripkeModel& k, const Partition& p) {
  std::string out;
  for (std::size_t i = 0; i < p.classes.size(); ++i) out += (i ? " " : "") + braces(k, p.classes[i]);
  return out;
}

}  // namespace detail

/// Runs the tool on `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"cellkit: S5 Kripke structures, partition refinement and common knowledge", "cellkit"};
  app.require_subcommand(1);

  std::string model_path;
  std::string formula_text;
  std::string event_text;
  std::string subset_text;
  std::string state;
  std::string other_state;
  std::string engine_name = "fast";
  bool trace_flag = false;
  bool json = false;
  bool no_prune = false;
  std::optional<std::size_t> cell_index;

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("-m,--model,model", model_path, "model file, or - for standard input")->required();
    sub->add_flag("--json", json, "machine-readable output");
  };

  auto* eval = app.add_subcommand("eval", "print the extension of a formula");
  add_model(eval);
  eval->add_option("-f,--formula", formula_text, "formula")->required();

  auto* refine = app.add_subcommand("refine", "compute the refinement sequence to its fixpoint");
  add_model(refine);
  refine->add_flag("--trace", trace_flag, "list every round");
  refine->add_option("--engine", engine_name, "naive, fast or splitter")
      ->check(CLI::IsMember({"naive", "fast", "splitter"}));

  auto* quot = app.add_subcommand("quotient", "collapse states that satisfy the same formulas");
  add_model(quot);

  auto* cells_cmd = app.add_subcommand("cells", "list the cells (common-knowledge components)");
  add_model(cells_cmd);

  auto* ck = app.add_subcommand("ck", "is an event common knowledge at a state");
  add_model(ck);
  auto* ck_event = ck->add_option("-e,--event", event_text, "comma-separated states");
  auto* ck_formula = ck->add_option("-f,--formula", formula_text, "event given as a formula's extension");
  ck_event->excludes(ck_formula);
  ck->add_option("-s,--state", state, "state")->required();

  auto* dist = app.add_subcommand("distinguish", "find a formula true at one state and false at another");
  add_model(dist);
  dist->add_option("-s,--state", state, "state where the formula holds")->required();
  dist->add_option("-t,--other", other_state, "state where it fails")->required();

  auto* good = app.add_subcommand("good", "does restricting to a subset preserve every member's theory");
  add_model(good);
  auto* good_subset = good->add_option("-A,--subset", subset_text, "comma-separated states");
  auto* good_formula = good->add_option("-f,--formula", formula_text, "subset given as a formula's extension");
  good_subset->excludes(good_formula);

  auto* excl = app.add_subcommand("exclusion-free", "check quotient cells for proper good subsets");
  add_model(excl);
  excl->add_flag("--no-prune", no_prune, "skip the candidate filter");

  auto* fan = app.add_subcommand("fanout", "block sizes and truncated-infinite blocks per cell");
  add_model(fan);
  fan->add_option("--cell", cell_index, "only this cell");

  auto* dot = app.add_subcommand("dot", "Graphviz rendering of the model");
  add_model(dot);
  dot->add_flag("--trace", trace_flag, "color states by refinement class");

  auto* val = app.add_subcommand("validate", "check the partition property");
  val->add_option("-m,--model,model", model_path, "model file, or - for standard input")->required();
  val->add_flag("--json", json, "machine-readable output");

  auto* gen = app.add_subcommand("gen", "generate a model file");
  gen->require_subcommand(1);
  std::size_t n = 0, m = 0;
  RandomModelParams random_params;
  auto* gen_nbar_cmd = gen->add_subcommand("nbar", "truncated grid example");
  gen_nbar_cmd->add_option("--n", n, "coordinates 1..n plus inf")->required();
  auto* gen_chain_cmd = gen->add_subcommand("chain", "electronic mail game chain");
  gen_chain_cmd->add_option("--n", n, "states s0..sn")->required();
  auto* gen_growing_cmd = gen->add_subcommand("growing", "chain with growing third-agent blocks");
  gen_growing_cmd->add_option("--m", m, "largest finite block")->required();
  auto* gen_random_cmd = gen->add_subcommand("random", "seeded random model");
  gen_random_cmd->add_option("--seed", random_params.seed)->required();
  gen_random_cmd->add_option("--states", random_params.states)->required();
  gen_random_cmd->add_option("--agents", random_params.agents)->required();
  gen_random_cmd->add_option("--atoms", random_params.atoms)->required();
  gen_random_cmd->add_option("--max-block", random_params.max_block)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? success : usage_error;
  }

  auto read_model = [&]() -> std::string {
    if (model_path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::ifstream file(model_path, std::ios::binary);
    if (!file) throw ModelError("cannot open '" + model_path + "'");
    return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
  };
  auto states_or_formula = [&](const KripkeModel& k, const std::string& list) {
    if (!formula_text.empty()) {
      Vocabulary vocabulary{k.atoms(), k.agents()};
      return extension(k, parse_formula(formula_text, vocabulary));
    }
    return k.state_set(detail::split_list(list));
  };

  try {
    if (*gen) {
      KripkeModel k;
      if (*gen_nbar_cmd) k = gen_nbar(n);
      else if (*gen_chain_cmd) k = gen_email_chain(n);
      else if (*gen_growing_cmd) k = gen_growing_blocks(m);
      else k = gen_random(random_params);
      out << save_model(k);
      return success;
    }

    if (*val) {
      Json doc;
      try {
        doc = Json::parse(read_model());
      } catch (const Json::parse_error& e) {
        throw ModelError(std::string("malformed model file: ") + e.what());
      }
      KripkeModel k = model_from_json(doc);
      auto violations = validate(k);
      if (json) {
        Json report = Json::array();
        for (const auto& v : violations) report.push_back({{"kind", v.kind}, {"detail", v.detail}});
        out << Json{{"violations", report}}.dump(2) << "\n";
      } else if (violations.empty()) {
        out << "ok\n";
      } else {
        for (const auto& v : violations) out << v.kind << ": " << v.detail << "\n";
      }
      return violations.empty() ? success : verdict_false;
    }

    const KripkeModel k = load_model(read_model());

    if (*eval) {
      Vocabulary vocabulary{k.atoms(), k.agents()};
      Formula f = parse_formula(formula_text, vocabulary);
      StateSet ext = extension(k, f);
      if (json) {
        Json truth = Json::object();
        for (StateId s = 0; s < k.num_states(); ++s) truth[k.states()[s]] = ext.contains(s);
        out << Json{{"formula", render(f)}, {"extension", detail::names(k, ext.members())}, {"truth", truth}}.dump(2)
            << "\n";
      } else {
        out << "formula: " << render(f) << "\n";
        out << "extension: " << detail::braces(k, ext.members()) << "\n";
        for (StateId s = 0; s < k.num_states(); ++s)
          out << k.states()[s] << ": " << (ext.contains(s) ? "true" : "false") << "\n";
      }
      return success;
    }

    if (*refine) {
      if (engine_name == "splitter") {
        Partition p = refine_splitter(k);
        if (json) out << Json{{"classes", detail::class_list(k, p)}}.dump(2) << "\n";
        else out << "classes: " << p.size() << "\n" << "R_inf: " << detail::class_line(k, p) << "\n";
        return success;
      }
      RefinementTrace trace = refine_fixpoint(k, engine_name == "naive" ? Engine::naive : Engine::fast);
      if (json) {
        Json doc{{"stabilized_at", trace.stabilized_at}, {"classes", detail::class_list(k, trace.final_partition())}};
        if (trace_flag) {
          Json rounds = Json::array();
          for (const auto& r : trace.rounds) rounds.push_back(detail::class_list(k, r));
          doc["rounds"] = std::move(rounds);
        }
        out << doc.dump(2) << "\n";
      } else {
        out << "stabilized at round " << trace.stabilized_at << "\n";
        out << "classes: " << trace.final_partition().size() << "\n";
        if (trace_flag)
          for (std::size_t i = 0; i < trace.rounds.size(); ++i)
            out << "R" << i << ": " << detail::class_line(k, trace.rounds[i]) << "\n";
        else
          out << "R_inf: " << detail::class_line(k, trace.final_partition()) << "\n";
      }
      return success;
    }

    if (*quot) {
      RefinementTrace trace = refine_fixpoint(k);
      QuotientModel q = quotient(k, trace.final_partition());
      if (json) {
        out << save_model(q.model);
      } else {
        out << "quotient: " << q.model.num_states() << " states (from " << k.num_states() << ")\n";
        for (StateId c = 0; c < q.model.num_states(); ++c)
          out << q.model.states()[c] << " <- " << detail::braces(k, trace.final_partition().classes[c]) << "\n";
      }
      return success;
    }

    if (*cells_cmd) {
      CellReport report = cells(k);
      if (json) {
        Json list = Json::array();
        for (const auto& c : report.cells) list.push_back(detail::names(k, c));
        out << Json{{"cells", list}}.dump(2) << "\n";
      } else {
        out << "cells: " << report.cells.size() << " (" << k.num_states() << " states)\n";
        for (std::size_t i = 0; i < report.cells.size(); ++i)
          out << "cell " << i << ": " << detail::braces(k, report.cells[i]) << "\n";
      }
      return success;
    }

    if (*ck) {
      if (event_text.empty() && formula_text.empty()) throw ModelError("ck needs an event (-e) or a formula (-f)");
      bool verdict = common_knowledge(k, states_or_formula(k, event_text), k.state_id(state));
      if (json) out << Json{{"common_knowledge", verdict}}.dump(2) << "\n";
      else out << "common knowledge: " << (verdict ? "yes" : "no") << "\n";
      return verdict ? success : verdict_false;
    }

    if (*dist) {
      Distinguisher d(k);
      auto f = d.distinguish(k.state_id(state), k.state_id(other_state));
      if (json) {
        Json doc{{"formula", nullptr}};
        if (f) doc = Json{{"formula", render(*f)}, {"depth", modal_depth(*f)}};
        out << doc.dump(2) << "\n";
      } else if (f) {
        out << render(*f) << "\n";
      } else {
        out << "none: " << state << " and " << other_state << " satisfy the same formulas\n";
      }
      return f ? success : verdict_false;
    }

    if (*good) {
      if (subset_text.empty() && formula_text.empty()) throw ModelError("good needs a subset (-A) or a formula (-f)");
      StateSet subset = states_or_formula(k, subset_text);
      if (subset.empty()) throw ModelError("the subset is empty");
      bool verdict = is_good_subset(k, subset);
      if (json) out << Json{{"good", verdict}}.dump(2) << "\n";
      else out << "good subset: " << (verdict ? "yes" : "no") << "\n";
      return verdict ? success : verdict_false;
    }

    if (*excl) {
      QuotientModel q = quotient(k);
      auto verdicts = exclusion_free(q, no_prune ? Pruning::off : Pruning::on);
      bool all = true;
      Json list = Json::array();
      for (std::size_t i = 0; i < verdicts.size(); ++i) {
        all = all && verdicts[i].exclusion_free;
        if (json) {
          list.push_back({{"states", detail::names(q.model, verdicts[i].cell)},
                          {"exclusion_free", verdicts[i].exclusion_free}});
        } else {
          out << "cell " << i << " " << detail::braces(q.model, verdicts[i].cell) << ": "
              << (verdicts[i].exclusion_free ? "exclusion-free" : "has a proper good subset") << "\n";
        }
      }
      if (json) out << Json{{"cells", list}}.dump(2) << "\n";
      return all ? success : verdict_false;
    }

    if (*fan) {
      CellReport report = cells(k);
      if (cell_index && *cell_index >= report.cells.size()) throw ModelError("no cell " + std::to_string(*cell_index));
      Json list = Json::array();
      for (std::size_t i = 0; i < report.cells.size(); ++i) {
        if (cell_index && *cell_index != i) continue;
        FanoutReport f = fanout_report(k, report.cell_set(i, k.num_states()));
        if (json) {
          Json sizes = Json::object();
          for (AgentId j = 0; j < k.num_agents(); ++j) sizes[k.agents()[j]] = f.max_block_size[j];
          Json flagged = Json::array();
          for (const auto& b : f.flagged)
            flagged.push_back({{"agent", k.agents()[b.agent]}, {"block_index", b.block_index}, {"size", b.size}});
          list.push_back({{"cell", i}, {"max_block_size", sizes}, {"limit_infinite", flagged}});
        } else {
          out << "cell " << i << " (" << report.cells[i].size() << " states)\n";
          for (AgentId j = 0; j < k.num_agents(); ++j)
            out << "  agent " << k.agents()[j] << ": max block " << f.max_block_size[j] << "\n";
          for (const auto& b : f.flagged)
            out << "  limit_infinite: agent " << k.agents()[b.agent] << " block " << b.block_index << " (" << b.size
                << " states)\n";
        }
      }
      if (json) out << Json{{"cells", list}}.dump(2) << "\n";
      return success;
    }

    if (*dot) {
      if (trace_flag) {
        Partition p = refine_fixpoint(k).final_partition();
        out << dot_export(k, &p);
      } else {
        out << dot_export(k);
      }
      return success;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  }
  return usage_error;
}

inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv + 1, argv + argc), in, out, err);
}

}  // namespace cellkit::cli
