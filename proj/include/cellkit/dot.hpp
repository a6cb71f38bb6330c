#pragma once

// Graphviz export: one node per state, one undirected edge per pair of
// states sharing a block, styled per agent.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "cellkit/model.hpp"
#include "cellkit/refinement.hpp"

namespace cellkit {

namespace detail {

inline std::string dot_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string dot_quote(std::string_view text) { return '"' + dot_escape(text) + '"'; }

inline constexpr std::array<std::string_view, 8> agent_colors = {"black",   "blue",      "red",   "darkgreen",
                                                                 "orange3", "purple",    "brown", "gray40"};
inline constexpr std::array<std::string_view, 10> class_colors = {
    "lightblue", "lightpink", "palegreen", "khaki", "plum", "lightsalmon", "lightcyan", "wheat", "thistle", "lightgray"};
inline constexpr std::array<std::string_view, 4> agent_styles = {"solid", "dashed", "dotted", "bold"};

}  // namespace detail

/// DOT text for `k`. With `final_partition`, nodes are filled by class.
inline std::string dot_export(const KripkeModel& k, const Partition* final_partition = nullptr) {
  std::string out = "graph kripke {\n  node [shape=ellipse];\n";
  for (StateId s = 0; s < k.num_states(); ++s) {
    std::string label = detail::dot_escape(k.states()[s]);
    std::string atoms;
    for (AtomId a = 0; a < k.num_atoms(); ++a)
      if (k.holds(s, a)) atoms += (atoms.empty() ? "" : ",") + k.atoms()[a];
    if (!atoms.empty()) label += "\\n" + detail::dot_escape(atoms);
    out += "  " + detail::dot_quote(k.states()[s]) + " [label=\"" + label + "\"";
    if (final_partition != nullptr) {
      ClassId c = final_partition->class_of[s];
      out += ", style=filled, fillcolor=" + std::string(detail::class_colors[c % detail::class_colors.size()]) +
             ", tooltip=\"class " + std::to_string(c) + "\"";
    }
    out += "];\n";
  }
  for (AgentId j = 0; j < k.num_agents(); ++j) {
    std::string style = " [label=" + detail::dot_quote(k.agents()[j]) +
                        ", color=" + std::string(detail::agent_colors[j % detail::agent_colors.size()]) +
                        ", style=" + std::string(detail::agent_styles[j % detail::agent_styles.size()]) + "];\n";
    for (const auto& block : k.partition(j))
      for (std::size_t a = 0; a < block.size(); ++a)
        for (std::size_t b = a + 1; b < block.size(); ++b)
          out += "  " + detail::dot_quote(k.states()[block[a]]) + " -- " + detail::dot_quote(k.states()[block[b]]) +
                 style;
  }
  out += "}\n";
  return out;
}

}  // namespace cellkit
