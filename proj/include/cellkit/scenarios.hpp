#pragma once

// Generators for the example structures and for seeded random models.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cellkit/model.hpp"

namespace cellkit {

/// Seeded random source with the same output on every platform.
/// std::mt19937_64 is fully specified; the standard distributions and
/// std::shuffle are not, so bounded draws and shuffling are done here.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
  }

  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  bool coin() { return (engine_() >> 63) != 0; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

inline std::vector<std::string> numbered(const std::string& prefix, std::size_t from, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(from + i));
  return out;
}

// Two-agent chain over states 0..n: agent 1 blocks {0},{1,2},{3,4},...;
// agent 2 blocks {0,1},{2,3},...
inline std::pair<KripkeModel::BlockList, KripkeModel::BlockList> chain_blocks(std::size_t states) {
  KripkeModel::BlockList first{{0}}, second;
  for (StateId s = 1; s < states; s += 2) {
    KripkeModel::Block b{s};
    if (s + 1 < states) b.push_back(s + 1);
    first.push_back(std::move(b));
  }
  for (StateId s = 0; s < states; s += 2) {
    KripkeModel::Block b{s};
    if (s + 1 < states) b.push_back(s + 1);
    second.push_back(std::move(b));
  }
  return {std::move(first), std::move(second)};
}

}  // namespace detail

/// Truncated grid {1..n, inf}^2 with three agents: agent 1 sees the row,
/// agent 2 the column, agent 3 the anti-diagonal k + l for finite
/// coordinates and one border block for everything with an infinite
/// coordinate. x holds at (1,1) and (2,1). Rows, columns and the border
/// are flagged as truncations of infinite blocks.
///
/// States are named "<row>_<col>" with "inf" for the limit coordinate and
/// listed row-major.
inline KripkeModel gen_nbar(std::size_t n) {
  if (n < 2) throw ModelError("gen_nbar needs n >= 2");
  const std::size_t side = n + 1;  // 1..n, then inf at index n
  auto coord = [n](std::size_t i) { return i == n ? std::string("inf") : std::to_string(i + 1); };
  auto id = [side](std::size_t row, std::size_t col) { return static_cast<StateId>(row * side + col); };

  std::vector<std::string> names;
  std::vector<std::vector<bool>> valuation;
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) {
      names.push_back(coord(r) + "_" + coord(c));
      valuation.push_back({(r == 0 || r == 1) && c == 0});
    }

  std::vector<KripkeModel::BlockList> partitions(3);
  std::vector<std::vector<BlockMeta>> meta(3);
  for (std::size_t i = 0; i < side; ++i) {
    KripkeModel::Block row, col;
    for (std::size_t t = 0; t < side; ++t) {
      row.push_back(id(i, t));
      col.push_back(id(t, i));
    }
    std::sort(col.begin(), col.end());
    partitions[0].push_back(std::move(row));
    partitions[1].push_back(std::move(col));
    meta[0].push_back({true});
    meta[1].push_back({true});
  }
  // Anti-diagonals k + l = sum over finite coordinates, sum = 2..2n.
  for (std::size_t sum = 2; sum <= 2 * n; ++sum) {
    KripkeModel::Block diag;
    for (std::size_t r = 1; r <= n; ++r)
      if (sum > r && sum - r <= n) diag.push_back(id(r - 1, sum - r - 1));
    std::sort(diag.begin(), diag.end());
    partitions[2].push_back(std::move(diag));
    meta[2].push_back({false});
  }
  KripkeModel::Block border;
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c)
      if (r == n || c == n) border.push_back(id(r, c));
  partitions[2].push_back(std::move(border));
  meta[2].push_back({true});

  return KripkeModel(std::move(names), {"x"}, {"1", "2", "3"}, std::move(valuation), std::move(partitions),
                     std::move(meta));
}

/// Chain s0..sn of alternating two-agent blocks with x true only at s0, the
/// information structure of the electronic mail game.
inline KripkeModel gen_email_chain(std::size_t n) {
  if (n < 1) throw ModelError("gen_email_chain needs n >= 1");
  const std::size_t count = n + 1;
  std::vector<std::vector<bool>> valuation(count, std::vector<bool>{false});
  valuation[0][0] = true;
  auto [first, second] = detail::chain_blocks(count);
  return KripkeModel(detail::numbered("s", 0, count), {"x"}, {"1", "2"}, std::move(valuation),
                     {std::move(first), std::move(second)});
}

/// The two-agent chain over m(m+1)/2 + m + 1 states, plus a third agent
/// whose blocks are consecutive segments of sizes 1, 2, ..., m and a final
/// segment of size m + 1 flagged as a truncated infinite block.
inline KripkeModel gen_growing_blocks(std::size_t m) {
  if (m < 1) throw ModelError("gen_growing_blocks needs m >= 1");
  const std::size_t count = m * (m + 1) / 2 + (m + 1);
  std::vector<std::vector<bool>> valuation(count, std::vector<bool>{false});
  valuation[0][0] = true;
  auto [first, second] = detail::chain_blocks(count);

  KripkeModel::BlockList third;
  std::vector<BlockMeta> third_meta;
  StateId next = 0;
  for (std::size_t size = 1; size <= m + 1; ++size) {
    KripkeModel::Block b;
    for (std::size_t i = 0; i < size; ++i) b.push_back(next++);
    third.push_back(std::move(b));
    third_meta.push_back({size == m + 1});
  }
  std::vector<std::vector<BlockMeta>> meta{std::vector<BlockMeta>(first.size()),
                                           std::vector<BlockMeta>(second.size()), std::move(third_meta)};
  return KripkeModel(detail::numbered("s", 0, count), {"x"}, {"1", "2", "3"}, std::move(valuation),
                     {std::move(first), std::move(second), std::move(third)}, std::move(meta));
}

struct RandomModelParams {
  std::uint64_t seed = 0;
  std::size_t states = 1;
  std::size_t agents = 1;
  std::size_t atoms = 1;
  std::size_t max_block = 1;
};

/// Random model: each agent's partition cuts a shuffled state list into
/// segments of uniform random length in [1, max_block]; each atom holds at
/// each state with probability 1/2. Same parameters, same model.
inline KripkeModel gen_random(const RandomModelParams& p) {
  if (p.states < 1 || p.agents < 1 || p.atoms < 1 || p.max_block < 1)
    throw ModelError("gen_random parameters must all be at least 1");
  SeededRng rng(p.seed);

  std::vector<std::vector<bool>> valuation(p.states, std::vector<bool>(p.atoms));
  for (auto& row : valuation)
    for (std::size_t a = 0; a < p.atoms; ++a) row[a] = rng.coin();

  std::vector<KripkeModel::BlockList> partitions(p.agents);
  std::vector<StateId> order(p.states);
  for (std::size_t i = 0; i < p.states; ++i) order[i] = static_cast<StateId>(i);
  for (auto& partition : partitions) {
    rng.shuffle(order);
    for (std::size_t pos = 0; pos < order.size();) {
      std::size_t len = std::min<std::size_t>(rng.between(1, p.max_block), order.size() - pos);
      KripkeModel::Block block(order.begin() + static_cast<std::ptrdiff_t>(pos),
                               order.begin() + static_cast<std::ptrdiff_t>(pos + len));
      std::sort(block.begin(), block.end());
      partition.push_back(std::move(block));
      pos += len;
    }
  }
  std::vector<std::string> atoms = p.atoms == 1 ? std::vector<std::string>{"x"} : detail::numbered("x", 0, p.atoms);
  return KripkeModel(detail::numbered("s", 0, p.states), std::move(atoms), detail::numbered("", 1, p.agents),
                     std::move(valuation), std::move(partitions));
}

inline KripkeModel gen_random(std::uint64_t seed, std::size_t states, std::size_t agents, std::size_t atoms,
                              std::size_t max_block) {
  return gen_random(RandomModelParams{seed, states, agents, atoms, max_block});
}

}  // namespace cellkit
