#pragma once

// Small hand-built models and independent oracles shared by the suites.
// The oracles follow the definitions directly and share no code paths with
// the library routines they check.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "cellkit/cellkit.hpp"

namespace cellkit::testing {

// FIX1: one state s with x true, one agent.
inline KripkeModel fix1() { return KripkeModel({"s"}, {"x"}, {"1"}, {{true}}, {{{0}}}); }

// FIX2: a, b; x only at a; agent 1 cannot tell them apart, agent 2 can.
inline KripkeModel fix2() {
  return KripkeModel({"a", "b"}, {"x"}, {"1", "2"}, {{true}, {false}}, {{{0, 1}}, {{0}, {1}}});
}

// FIX3: as FIX2 but x holds at both states.
inline KripkeModel fix3() {
  return KripkeModel({"a", "b"}, {"x"}, {"1", "2"}, {{true}, {true}}, {{{0, 1}}, {{0}, {1}}});
}

// FIX4(n): the email chain s0..sn.
inline KripkeModel fix4(std::size_t n) { return gen_email_chain(n); }

// Truth of f at s by direct recursion on the definition, no memoization.
// Knowledge scans every block of the agent for the one containing s.
inline bool naive_holds(const KripkeModel& k, StateId s, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::atom:
      return k.valuation(s)[k.atom_id(f.name())];
    case FormulaKind::negation:
      return !naive_holds(k, s, f.child());
    case FormulaKind::conjunction:
      return naive_holds(k, s, f.left()) && naive_holds(k, s, f.right());
    case FormulaKind::knowledge: {
      AgentId j = k.agent_id(f.name());
      for (const auto& block : k.partition(j)) {
        if (std::find(block.begin(), block.end(), s) == block.end()) continue;
        for (StateId t : block)
          if (!naive_holds(k, t, f.child())) return false;
        return true;
      }
      return false;
    }
  }
  return false;
}

inline std::vector<StateId> naive_extension(const KripkeModel& k, const Formula& f) {
  std::vector<StateId> out;
  for (StateId s = 0; s < k.num_states(); ++s)
    if (naive_holds(k, s, f)) out.push_back(s);
  return out;
}

// Components of block adjacency by repeated closure until nothing changes.
inline std::vector<std::vector<StateId>> closure_cells(const KripkeModel& k) {
  std::vector<std::vector<StateId>> out;
  std::vector<bool> placed(k.num_states(), false);
  for (StateId root = 0; root < k.num_states(); ++root) {
    if (placed[root]) continue;
    std::vector<bool> in(k.num_states(), false);
    in[root] = true;
    for (bool grew = true; grew;) {
      grew = false;
      for (AgentId j = 0; j < k.num_agents(); ++j)
        for (const auto& block : k.partition(j)) {
          bool meets = std::any_of(block.begin(), block.end(), [&](StateId s) { return in[s]; });
          if (!meets) continue;
          for (StateId s : block)
            if (!in[s]) in[s] = grew = true;
        }
    }
    std::vector<StateId> cell;
    for (StateId s = 0; s < k.num_states(); ++s)
      if (in[s]) {
        cell.push_back(s);
        placed[s] = true;
      }
    out.push_back(std::move(cell));
  }
  return out;
}

// The small random models used by property tests: up to 40 states, up to 3
// agents, 1-2 atoms, block sizes up to 6.
inline KripkeModel suite_model(std::uint64_t seed, std::size_t max_states = 40) {
  SeededRng rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  RandomModelParams p;
  p.seed = seed;
  p.states = rng.between(1, max_states);
  p.agents = rng.between(1, 3);
  p.atoms = rng.between(1, 2);
  p.max_block = rng.between(1, 6);
  return gen_random(p);
}

}  // namespace cellkit::testing
