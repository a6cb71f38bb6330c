#pragma once

// Cells, common knowledge, fanout, good subsets and the proper-good-subset
// search on quotient cells.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <vector>

#include "cellkit/model.hpp"
#include "cellkit/refinement.hpp"

namespace cellkit {

/// Connected components of the "share some agent's block" relation.
/// Cells are numbered by their smallest state.
struct CellReport {
  std::vector<std::vector<StateId>> cells;
  std::vector<std::size_t> cell_of;

  StateSet cell_set(std::size_t cell, std::size_t universe) const { return StateSet::of(universe, cells.at(cell)); }
};

namespace detail {

inline CellReport cells_from_labels(const std::vector<std::size_t>& labels) {
  Partition p = Partition::from_labels(labels);
  CellReport report;
  report.cells = std::move(p.classes);
  report.cell_of.assign(p.class_of.begin(), p.class_of.end());
  return report;
}

}  // namespace detail

/// Breadth-first search over block adjacency; each block is expanded once.
inline CellReport cells(const KripkeModel& k) {
  const std::size_t n = k.num_states();
  std::vector<std::size_t> label(n, npos);
  std::vector<std::vector<char>> block_done(k.num_agents());
  for (AgentId j = 0; j < k.num_agents(); ++j) block_done[j].assign(k.partition(j).size(), 0);

  std::size_t next = 0;
  std::queue<StateId> frontier;
  for (StateId root = 0; root < n; ++root) {
    if (label[root] != npos) continue;
    label[root] = next;
    frontier.push(root);
    while (!frontier.empty()) {
      StateId s = frontier.front();
      frontier.pop();
      for (AgentId j = 0; j < k.num_agents(); ++j) {
        std::size_t b = k.block_index(j, s);
        if (block_done[j][b]) continue;
        block_done[j][b] = 1;
        for (StateId t : k.partition(j)[b]) {
          if (label[t] != npos) continue;
          label[t] = next;
          frontier.push(t);
        }
      }
    }
    ++next;
  }
  return detail::cells_from_labels(label);
}

/// Same components via union-find over block members.
inline CellReport cells_union_find(const KripkeModel& k) {
  std::vector<std::size_t> parent(k.num_states());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (AgentId j = 0; j < k.num_agents(); ++j)
    for (const auto& block : k.partition(j))
      for (StateId s : block) {
        std::size_t a = find(block.front()), b = find(s);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<std::size_t> labels(k.num_states());
  for (std::size_t s = 0; s < labels.size(); ++s) labels[s] = find(s);
  return detail::cells_from_labels(labels);
}

/// Whether event E is common knowledge at s: the cell of s lies inside E.
/// s must belong to E.
inline bool common_knowledge(const KripkeModel& k, const StateSet& event, StateId s) {
  if (s >= k.num_states()) throw ModelError("unknown state index");
  if (event.universe() != k.num_states()) throw ModelError("event does not belong to this model");
  if (!event.contains(s)) throw ModelError("state '" + k.states()[s] + "' is not in the event");
  CellReport report = cells(k);
  for (StateId t : report.cells[report.cell_of[s]])
    if (!event.contains(t)) return false;
  return true;
}

struct FlaggedBlock {
  AgentId agent;
  std::size_t block_index;
  std::size_t size;
};

struct FanoutReport {
  std::vector<std::size_t> max_block_size;  // per agent, over blocks inside the cell
  std::vector<FlaggedBlock> flagged;        // blocks marked limit_infinite
};

inline FanoutReport fanout_report(const KripkeModel& k, const StateSet& cell) {
  FanoutReport report;
  report.max_block_size.assign(k.num_agents(), 0);
  for (AgentId j = 0; j < k.num_agents(); ++j) {
    for (std::size_t b = 0; b < k.partition(j).size(); ++b) {
      const auto& block = k.partition(j)[b];
      if (!cell.contains(block.front())) continue;
      report.max_block_size[j] = std::max(report.max_block_size[j], block.size());
      if (k.meta(j, b).limit_infinite) report.flagged.push_back({j, b, block.size()});
    }
  }
  return report;
}

/// A subset is good when restricting the model to it changes no member's
/// theory: every z in A satisfies the same formulas in restrict(K, A) as in K.
inline bool is_good_subset(const KripkeModel& k, const StateSet& subset) {
  if (subset.empty()) throw ModelError("good-subset check needs a non-empty subset");
  KripkeModel restricted = restrict(k, subset);
  KripkeModel both = disjoint_union(restricted, k);
  Partition r = refine_fixpoint(both).final_partition();
  std::vector<StateId> kept = subset.members();
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (!r.same_class(static_cast<StateId>(i), static_cast<StateId>(restricted.num_states() + kept[i])))
      return false;
  return true;
}

inline constexpr std::size_t max_brute_force_cell = 20;

enum class Pruning { on, off };

namespace detail {

// Necessary condition for goodness of `kept` inside a single cell: whenever a
// removed state r shares a j-block with survivors, one of those survivors is
// R_inf-equivalent to r. Otherwise a survivor in that block would lose
// ~Kj ~char(class of r) under restriction.
inline bool may_be_good(const KripkeModel& cell_model, const Partition& r_inf, std::uint32_t kept) {
  for (StateId r = 0; r < cell_model.num_states(); ++r) {
    if (kept >> r & 1U) continue;
    for (AgentId j = 0; j < cell_model.num_agents(); ++j) {
      bool meets = false, witnessed = false;
      for (StateId z : cell_model.block(j, r)) {
        if (!(kept >> z & 1U)) continue;
        meets = true;
        if (r_inf.same_class(r, z)) witnessed = true;
      }
      if (meets && !witnessed) return false;
    }
  }
  return true;
}

// Calls visit(mask) for all masks of `n` bits with `k` bits set, in
// lexicographic order of the sorted index lists.
template <class Visit>
void for_each_combination(std::size_t n, std::size_t k, Visit visit) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (;;) {
    std::uint32_t mask = 0;
    for (std::size_t i : idx) mask |= 1U << i;
    visit(mask);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t m = i; m < k; ++m) idx[m] = idx[m - 1] + 1;
  }
}

}  // namespace detail

/// Every non-empty proper subset A of `cell` that is good in the model
/// restricted to the cell, by exhaustive enumeration. Results are ordered by
/// size, then lexicographically by state order. With pruning, candidates
/// failing a cheap necessary condition are skipped; every reported subset is
/// fully checked either way.
inline std::vector<StateSet> proper_good_subsets(const KripkeModel& k, const StateSet& cell,
                                                 Pruning pruning = Pruning::on) {
  if (cell.universe() != k.num_states()) throw ModelError("cell does not belong to this model");
  const std::size_t n = cell.count();
  if (n > max_brute_force_cell)
    throw LimitError("cell of " + std::to_string(n) + " states exceeds the brute-force limit of " +
                     std::to_string(max_brute_force_cell));
  if (n == 0) throw ModelError("empty cell");

  const std::vector<StateId> members = cell.members();
  KripkeModel local = restrict(k, cell);
  Partition r_inf = refine_fixpoint(local).final_partition();

  std::vector<StateSet> out;
  for (std::size_t size = 1; size < n; ++size) {
    detail::for_each_combination(n, size, [&](std::uint32_t mask) {
      if (pruning == Pruning::on && !detail::may_be_good(local, r_inf, mask)) return;
      StateSet subset(n);
      for (StateId i = 0; i < n; ++i)
        if (mask >> i & 1U) subset.insert(i);
      if (!is_good_subset(local, subset)) return;
      StateSet result(k.num_states());
      for (StateId i = 0; i < n; ++i)
        if (mask >> i & 1U) result.insert(members[i]);
      out.push_back(std::move(result));
    });
  }
  return out;
}

struct CellVerdict {
  std::vector<StateId> cell;  // states of the quotient
  bool exclusion_free = false;
};

/// For each cell of quotient(K): true iff it has no proper good subset, i.e.
/// no structure can map into the cell while leaving part of it out.
inline std::vector<CellVerdict> exclusion_free(const QuotientModel& q, Pruning pruning = Pruning::on) {
  CellReport report = cells(q.model);
  for (const auto& c : report.cells)
    if (c.size() > max_brute_force_cell)
      throw LimitError("quotient cell of " + std::to_string(c.size()) + " states exceeds the brute-force limit of " +
                       std::to_string(max_brute_force_cell));
  std::vector<CellVerdict> verdicts;
  for (const auto& c : report.cells) {
    StateSet cell = StateSet::of(q.model.num_states(), c);
    verdicts.push_back({c, proper_good_subsets(q.model, cell, pruning).empty()});
  }
  return verdicts;
}

inline std::vector<CellVerdict> exclusion_free(const KripkeModel& k, Pruning pruning = Pruning::on) {
  return exclusion_free(quotient(k), pruning);
}

}  // namespace cellkit
