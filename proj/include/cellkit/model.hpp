#pragma once

// Finite multi-agent S5 Kripke structures: states, atoms, agents, a
// valuation and one partition of the states per agent.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cellkit/error.hpp"

namespace cellkit {

using StateId = std::uint32_t;
using AgentId = std::size_t;
using AtomId = std::size_t;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// A subset of a model's states (an event), stored as a bit vector over the
/// model's state indices.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe, bool full = false) : bits_(universe, full) {}

  static StateSet of(std::size_t universe, std::span<const StateId> members) {
    StateSet set(universe);
    for (StateId s : members) set.insert(s);
    return set;
  }
  static StateSet of(std::size_t universe, std::initializer_list<StateId> members) {
    return of(universe, std::span<const StateId>(members.begin(), members.size()));
  }

  std::size_t universe() const { return bits_.size(); }
  std::size_t count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }
  bool empty() const { return std::find(bits_.begin(), bits_.end(), true) == bits_.end(); }
  bool full() const { return std::find(bits_.begin(), bits_.end(), false) == bits_.end(); }

  bool contains(StateId s) const { return s < bits_.size() && bits_[s]; }
  void insert(StateId s) {
    if (s >= bits_.size()) throw ModelError("state index out of range");
    bits_[s] = true;
  }
  void erase(StateId s) {
    if (s < bits_.size()) bits_[s] = false;
  }

  std::vector<StateId> members() const {
    std::vector<StateId> out;
    for (std::size_t s = 0; s < bits_.size(); ++s)
      if (bits_[s]) out.push_back(static_cast<StateId>(s));
    return out;
  }

  StateSet complement() const {
    StateSet out = *this;
    out.bits_.flip();
    return out;
  }
  StateSet& operator&=(const StateSet& other) {
    for (std::size_t s = 0; s < bits_.size(); ++s) bits_[s] = bits_[s] && other.contains(static_cast<StateId>(s));
    return *this;
  }
  StateSet& operator|=(const StateSet& other) {
    for (std::size_t s = 0; s < bits_.size(); ++s) bits_[s] = bits_[s] || other.contains(static_cast<StateId>(s));
    return *this;
  }
  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }

  bool is_subset_of(const StateSet& other) const {
    for (std::size_t s = 0; s < bits_.size(); ++s)
      if (bits_[s] && !other.contains(static_cast<StateId>(s))) return false;
    return true;
  }

  friend bool operator==(const StateSet&, const StateSet&) = default;

 private:
  std::vector<bool> bits_;
};

struct BlockMeta {
  /// The block is a finite truncation of an infinite block.
  bool limit_infinite = false;
  friend bool operator==(const BlockMeta&, const BlockMeta&) = default;
};

struct Violation {
  std::string kind;  // "overlap", "coverage", "empty-block", ...
  std::string detail;
};

/// A finite S5 Kripke structure. Immutable after construction; names keep
/// the order they were given in, which is the canonical order of all output.
///
/// The constructor accepts structurally inconsistent input (overlapping or
/// non-covering blocks) so that validate() can report it; every other
/// operation expects a model for which validate() is empty.
class KripkeModel {
 public:
  using Block = std::vector<StateId>;
  using BlockList = std::vector<Block>;

  KripkeModel() = default;

  /// `valuation[s][a]` is the truth value of atom `a` at state `s`.
  /// `block_meta`, if non-empty, has one entry per block of each agent.
  KripkeModel(std::vector<std::string> states, std::vector<std::string> atoms, std::vector<std::string> agents,
              std::vector<std::vector<bool>> valuation, std::vector<BlockList> partitions,
              std::vector<std::vector<BlockMeta>> block_meta = {})
      : states_(std::move(states)),
        atoms_(std::move(atoms)),
        agents_(std::move(agents)),
        valuation_(std::move(valuation)),
        partitions_(std::move(partitions)),
        block_meta_(std::move(block_meta)) {
    if (partitions_.size() != agents_.size()) throw ModelError("one partition per agent is required");
    if (block_meta_.empty()) {
      block_meta_.resize(agents_.size());
      for (AgentId j = 0; j < agents_.size(); ++j) block_meta_[j].resize(partitions_[j].size());
    }
    if (block_meta_.size() != agents_.size()) throw ModelError("block metadata must cover every agent");
    for (AgentId j = 0; j < agents_.size(); ++j)
      if (block_meta_[j].size() != partitions_[j].size())
        throw ModelError("block metadata must have one entry per block of agent '" + agents_[j] + "'");
    index();
  }

  std::size_t num_states() const { return states_.size(); }
  std::size_t num_atoms() const { return atoms_.size(); }
  std::size_t num_agents() const { return agents_.size(); }

  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::vector<std::string>& agents() const { return agents_; }

  const std::vector<std::vector<bool>>& valuation() const { return valuation_; }
  const std::vector<bool>& valuation(StateId s) const { return valuation_.at(s); }
  bool holds(StateId s, AtomId atom) const { return valuation_[s][atom]; }

  const BlockList& partition(AgentId j) const { return partitions_.at(j); }
  const std::vector<BlockList>& partitions() const { return partitions_; }
  const BlockMeta& meta(AgentId j, std::size_t block) const { return block_meta_.at(j).at(block); }
  const std::vector<std::vector<BlockMeta>>& block_meta() const { return block_meta_; }
  bool has_block_meta() const {
    for (const auto& per_agent : block_meta_)
      for (const BlockMeta& m : per_agent)
        if (m.limit_infinite) return true;
    return false;
  }

  /// Index of the agent-j block containing s (first one, if blocks overlap);
  /// npos if s is uncovered.
  std::size_t block_index(AgentId j, StateId s) const { return block_of_.at(j).at(s); }

  const Block& block(AgentId j, StateId s) const {
    std::size_t b = block_index(j, s);
    if (b == npos) throw ModelError("state '" + states_.at(s) + "' has no block for agent '" + agents_.at(j) + "'");
    return partitions_[j][b];
  }

  std::optional<StateId> find_state(std::string_view name) const { return lookup(state_ids_, name); }
  std::optional<AgentId> find_agent(std::string_view name) const { return lookup(agent_ids_, name); }
  std::optional<AtomId> find_atom(std::string_view name) const { return lookup(atom_ids_, name); }

  StateId state_id(std::string_view name) const {
    if (auto s = find_state(name)) return *s;
    throw ModelError("unknown state '" + std::string(name) + "'");
  }
  AgentId agent_id(std::string_view name) const {
    if (auto j = find_agent(name)) return *j;
    throw ModelError("unknown agent '" + std::string(name) + "'");
  }
  AtomId atom_id(std::string_view name) const {
    if (auto a = find_atom(name)) return *a;
    throw ModelError("unknown atom '" + std::string(name) + "'");
  }

  StateSet all_states() const { return StateSet(num_states(), true); }
  StateSet state_set(std::span<const std::string> names) const {
    StateSet set(num_states());
    for (const std::string& n : names) set.insert(state_id(n));
    return set;
  }

  friend bool operator==(const KripkeModel& a, const KripkeModel& b) {
    return a.states_ == b.states_ && a.atoms_ == b.atoms_ && a.agents_ == b.agents_ &&
           a.valuation_ == b.valuation_ && a.partitions_ == b.partitions_ && a.block_meta_ == b.block_meta_;
  }

 private:
  using NameIndex = std::unordered_map<std::string, std::size_t>;

  static std::optional<std::size_t> lookup(const NameIndex& index, std::string_view name) {
    auto it = index.find(std::string(name));
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  void index() {
    for (std::size_t i = 0; i < states_.size(); ++i) state_ids_.emplace(states_[i], i);
    for (std::size_t i = 0; i < atoms_.size(); ++i) atom_ids_.emplace(atoms_[i], i);
    for (std::size_t i = 0; i < agents_.size(); ++i) agent_ids_.emplace(agents_[i], i);
    block_of_.assign(agents_.size(), std::vector<std::size_t>(states_.size(), npos));
    for (AgentId j = 0; j < agents_.size(); ++j)
      for (std::size_t b = 0; b < partitions_[j].size(); ++b)
        for (StateId s : partitions_[j][b])
          if (s < states_.size() && block_of_[j][s] == npos) block_of_[j][s] = b;
  }

  std::vector<std::string> states_;
  std::vector<std::string> atoms_;
  std::vector<std::string> agents_;
  std::vector<std::vector<bool>> valuation_;
  std::vector<BlockList> partitions_;
  std::vector<std::vector<BlockMeta>> block_meta_;

  NameIndex state_ids_;
  NameIndex atom_ids_;
  NameIndex agent_ids_;
  std::vector<std::vector<std::size_t>> block_of_;
};

namespace detail {

inline void check_unique(const std::vector<std::string>& names, const char* what, std::vector<Violation>& out) {
  std::set<std::string_view> seen;
  for (const std::string& n : names)
    if (!seen.insert(n).second) out.push_back({std::string("duplicate-") + what, "'" + n + "'"});
}

}  // namespace detail

/// Empty iff the model is a well-formed S5 structure.
inline std::vector<Violation> validate(const KripkeModel& k) {
  std::vector<Violation> out;
  detail::check_unique(k.states(), "state", out);
  detail::check_unique(k.atoms(), "atom", out);
  detail::check_unique(k.agents(), "agent", out);

  if (k.valuation().size() != k.num_states()) {
    out.push_back({"valuation", "valuation has " + std::to_string(k.valuation().size()) + " rows for " +
                                    std::to_string(k.num_states()) + " states"});
  } else {
    for (StateId s = 0; s < k.num_states(); ++s)
      if (k.valuation(s).size() != k.num_atoms())
        out.push_back({"valuation", "state '" + k.states()[s] + "' has a valuation of the wrong width"});
  }

  for (AgentId j = 0; j < k.num_agents(); ++j) {
    const std::string& agent = k.agents()[j];
    std::vector<int> hits(k.num_states(), 0);
    for (std::size_t b = 0; b < k.partition(j).size(); ++b) {
      const auto& block = k.partition(j)[b];
      if (block.empty()) out.push_back({"empty-block", "agent '" + agent + "' block " + std::to_string(b)});
      for (StateId s : block) {
        if (s >= k.num_states()) {
          out.push_back({"unknown-state", "agent '" + agent + "' block " + std::to_string(b)});
          continue;
        }
        if (++hits[s] == 2)
          out.push_back({"overlap", "state '" + k.states()[s] + "' is in two blocks of agent '" + agent + "'"});
      }
    }
    for (StateId s = 0; s < k.num_states(); ++s)
      if (hits[s] == 0)
        out.push_back({"coverage", "state '" + k.states()[s] + "' is in no block of agent '" + agent + "'"});
  }
  return out;
}

inline const KripkeModel::Block& block_of(const KripkeModel& k, AgentId j, StateId s) {
  if (j >= k.num_agents()) throw ModelError("unknown agent index");
  if (s >= k.num_states()) throw ModelError("unknown state index");
  return k.block(j, s);
}

inline const KripkeModel::Block& block_of(const KripkeModel& k, std::string_view agent, std::string_view state) {
  return k.block(k.agent_id(agent), k.state_id(state));
}

/// The substructure on `subset`: each block F becomes F ∩ subset when that is
/// non-empty. Block metadata is dropped.
inline KripkeModel restrict(const KripkeModel& k, const StateSet& subset) {
  if (subset.universe() != k.num_states()) throw ModelError("subset does not belong to this model");
  if (subset.empty()) throw ModelError("cannot restrict to an empty set of states");

  std::vector<StateId> kept = subset.members();
  std::vector<StateId> renumber(k.num_states(), std::numeric_limits<StateId>::max());
  std::vector<std::string> names;
  std::vector<std::vector<bool>> valuation;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    renumber[kept[i]] = static_cast<StateId>(i);
    names.push_back(k.states()[kept[i]]);
    valuation.push_back(k.valuation(kept[i]));
  }

  std::vector<KripkeModel::BlockList> partitions(k.num_agents());
  for (AgentId j = 0; j < k.num_agents(); ++j) {
    for (const auto& block : k.partition(j)) {
      KripkeModel::Block part;
      for (StateId s : block)
        if (subset.contains(s)) part.push_back(renumber[s]);
      if (!part.empty()) partitions[j].push_back(std::move(part));
    }
  }
  return KripkeModel(std::move(names), k.atoms(), k.agents(), std::move(valuation), std::move(partitions));
}

/// Side-by-side copy of two models over the same atoms and agents. States of
/// the first keep indices 0..|K1|-1 and are named "<id>#1"; states of the
/// second follow and are named "<id>#2". Atom and agent order follow `first`.
inline KripkeModel disjoint_union(const KripkeModel& first, const KripkeModel& second) {
  auto same_names = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return std::set<std::string>(a.begin(), a.end()) == std::set<std::string>(b.begin(), b.end()) &&
           a.size() == b.size();
  };
  if (!same_names(first.agents(), second.agents())) throw ModelError("agent sets differ");
  if (!same_names(first.atoms(), second.atoms())) throw ModelError("atom sets differ");

  const auto offset = static_cast<StateId>(first.num_states());
  std::vector<std::string> names;
  std::vector<std::vector<bool>> valuation;
  for (StateId s = 0; s < first.num_states(); ++s) {
    names.push_back(first.states()[s] + "#1");
    valuation.push_back(first.valuation(s));
  }
  for (StateId s = 0; s < second.num_states(); ++s) {
    names.push_back(second.states()[s] + "#2");
    std::vector<bool> row(first.num_atoms());
    for (AtomId a = 0; a < first.num_atoms(); ++a) row[a] = second.holds(s, second.atom_id(first.atoms()[a]));
    valuation.push_back(std::move(row));
  }

  std::vector<KripkeModel::BlockList> partitions(first.num_agents());
  std::vector<std::vector<BlockMeta>> meta(first.num_agents());
  for (AgentId j = 0; j < first.num_agents(); ++j) {
    partitions[j] = first.partition(j);
    meta[j] = first.block_meta()[j];
    AgentId j2 = second.agent_id(first.agents()[j]);
    for (std::size_t b = 0; b < second.partition(j2).size(); ++b) {
      KripkeModel::Block shifted;
      for (StateId s : second.partition(j2)[b]) shifted.push_back(s + offset);
      partitions[j].push_back(std::move(shifted));
      meta[j].push_back(second.meta(j2, b));
    }
  }
  return KripkeModel(std::move(names), first.atoms(), first.agents(), std::move(valuation), std::move(partitions),
                     std::move(meta));
}

}  // namespace cellkit
