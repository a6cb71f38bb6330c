#pragma once

// Partition refinement on S5 structures.
//
// R_0 groups states by valuation. x and y stay together in R_{i+1} iff they
// are together in R_i and, for every agent j, the j-blocks of x and y meet
// exactly the same classes of R_i. On a finite model the sequence reaches a
// fixpoint R_inf after at most |S| - 1 rounds; two states share a class of
// R_inf iff they satisfy the same formulas.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cellkit/formula.hpp"
#include "cellkit/model.hpp"

namespace cellkit {

using ClassId = std::uint32_t;

/// A partition of a model's states. Classes are numbered in order of their
/// smallest state, and each class lists its states in increasing order.
struct Partition {
  std::vector<ClassId> class_of;
  std::vector<std::vector<StateId>> classes;

  /// Canonical partition whose classes are the label groups.
  template <class Label>
  static Partition from_labels(std::span<const Label> labels) {
    Partition p;
    p.class_of.resize(labels.size());
    std::unordered_map<Label, ClassId> renumber;
    for (std::size_t s = 0; s < labels.size(); ++s) {
      auto [it, fresh] = renumber.emplace(labels[s], static_cast<ClassId>(p.classes.size()));
      if (fresh) p.classes.emplace_back();
      p.class_of[s] = it->second;
      p.classes[it->second].push_back(static_cast<StateId>(s));
    }
    return p;
  }
  template <class Label>
  static Partition from_labels(const std::vector<Label>& labels) {
    return from_labels(std::span<const Label>(labels));
  }

  std::size_t size() const { return classes.size(); }
  bool discrete() const { return classes.size() == class_of.size(); }
  bool same_class(StateId s, StateId t) const { return class_of[s] == class_of[t]; }

  /// True if every class of this partition lies inside a class of `coarser`.
  bool refines(const Partition& coarser) const {
    for (const auto& c : classes)
      for (StateId s : c)
        if (coarser.class_of[s] != coarser.class_of[c.front()]) return false;
    return true;
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.class_of == b.class_of; }
};

struct RefinementTrace {
  std::vector<Partition> rounds;  // R_0 .. R_m
  std::size_t stabilized_at = 0;  // m: R_{m+1} == R_m

  const Partition& final_partition() const { return rounds.back(); }

  /// First round whose partition separates s and t, if any.
  std::optional<std::size_t> separating_round(StateId s, StateId t) const {
    for (std::size_t i = 0; i < rounds.size(); ++i)
      if (!rounds[i].same_class(s, t)) return i;
    return std::nullopt;
  }
};

enum class Engine {
  /// Follows the definition literally; quadratic. Used as a test oracle.
  naive,
  /// Per-round hashing of canonical (class, met-class-sets) keys.
  fast,
};

inline Partition initial_partition(const KripkeModel& k) {
  std::map<std::vector<bool>, ClassId> ids;
  std::vector<ClassId> labels(k.num_states());
  for (StateId s = 0; s < k.num_states(); ++s)
    labels[s] = ids.emplace(k.valuation(s), static_cast<ClassId>(ids.size())).first->second;
  return Partition::from_labels(labels);
}

namespace detail {

// Classes of `r` met by `block`, sorted and without repetition.
inline std::vector<ClassId> classes_met(const Partition& r, std::span<const StateId> block) {
  std::vector<ClassId> met;
  met.reserve(block.size());
  for (StateId s : block) met.push_back(r.class_of[s]);
  std::sort(met.begin(), met.end());
  met.erase(std::unique(met.begin(), met.end()), met.end());
  return met;
}

inline Partition refine_step_naive(const KripkeModel& k, const Partition& r) {
  const std::size_t n = k.num_states();
  // meets[s][j]: classes met by the j-block of s, found by scanning every block.
  std::vector<std::vector<std::vector<ClassId>>> meets(n, std::vector<std::vector<ClassId>>(k.num_agents()));
  for (StateId s = 0; s < n; ++s) {
    for (AgentId j = 0; j < k.num_agents(); ++j) {
      for (const auto& block : k.partition(j)) {
        if (std::find(block.begin(), block.end(), s) == block.end()) continue;
        meets[s][j] = classes_met(r, block);
        break;
      }
    }
  }
  std::vector<StateId> representative;
  std::vector<ClassId> labels(n);
  for (StateId s = 0; s < n; ++s) {
    std::size_t c = 0;
    for (; c < representative.size(); ++c) {
      StateId t = representative[c];
      if (r.class_of[s] == r.class_of[t] && meets[s] == meets[t]) break;
    }
    if (c == representative.size()) representative.push_back(s);
    labels[s] = static_cast<ClassId>(c);
  }
  return Partition::from_labels(labels);
}

struct KeyHash {
  std::size_t operator()(const std::vector<ClassId>& key) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (ClassId c : key) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// Interns keys; the hash map compares full keys, so colliding hashes never
// merge distinct keys.
class KeyInterner {
 public:
  ClassId intern(std::vector<ClassId> key) {
    auto [it, fresh] = ids_.emplace(std::move(key), static_cast<ClassId>(ids_.size()));
    return it->second;
  }
  void reserve(std::size_t n) { ids_.reserve(n); }

 private:
  std::unordered_map<std::vector<ClassId>, ClassId, KeyHash> ids_;
};

inline Partition refine_step_fast(const KripkeModel& k, const Partition& r) {
  const std::size_t n = k.num_states();
  // One id per distinct met-class set, per agent, computed once per block.
  std::vector<std::vector<ClassId>> block_key(k.num_agents());
  for (AgentId j = 0; j < k.num_agents(); ++j) {
    KeyInterner sets;
    sets.reserve(k.partition(j).size());
    block_key[j].reserve(k.partition(j).size());
    for (const auto& block : k.partition(j)) block_key[j].push_back(sets.intern(classes_met(r, block)));
  }
  KeyInterner states;
  states.reserve(n);
  std::vector<ClassId> labels(n);
  std::vector<ClassId> key(k.num_agents() + 1);
  for (StateId s = 0; s < n; ++s) {
    key[0] = r.class_of[s];
    for (AgentId j = 0; j < k.num_agents(); ++j) key[j + 1] = block_key[j][k.block_index(j, s)];
    labels[s] = states.intern(key);
  }
  return Partition::from_labels(labels);
}

}  // namespace detail

inline Partition refine_step(const KripkeModel& k, const Partition& r, Engine engine = Engine::fast) {
  return engine == Engine::naive ? detail::refine_step_naive(k, r) : detail::refine_step_fast(k, r);
}

/// R_0, R_1, ... up to the first round that equals its successor.
inline RefinementTrace refine_fixpoint(const KripkeModel& k, Engine engine = Engine::fast) {
  RefinementTrace trace;
  trace.rounds.push_back(initial_partition(k));
  for (;;) {
    Partition next = refine_step(k, trace.rounds.back(), engine);
    // Each round refines the previous one, so equal class counts mean equal partitions.
    if (next.size() == trace.rounds.back().size()) break;
    trace.rounds.push_back(std::move(next));
  }
  trace.stabilized_at = trace.rounds.size() - 1;
  return trace;
}

/// R_inf computed with a splitter worklist instead of whole rounds. Each
/// class taken from the worklist splits every class by "j-block meets the
/// splitter or not"; the pieces of every split class go back on the worklist.
inline Partition refine_splitter(const KripkeModel& k) {
  const std::size_t n = k.num_states();
  const Partition r0 = initial_partition(k);
  if (n == 0) return r0;

  std::vector<ClassId> class_of = r0.class_of;
  std::vector<std::vector<StateId>> members = r0.classes;
  std::deque<ClassId> worklist;
  std::vector<char> queued(members.size(), 1);
  for (ClassId c = 0; c < members.size(); ++c) worklist.push_back(c);

  std::vector<std::vector<char>> block_marked(k.num_agents());
  for (AgentId j = 0; j < k.num_agents(); ++j) block_marked[j].assign(k.partition(j).size(), 0);
  std::vector<char> state_marked(n, 0);
  std::vector<StateId> touched;
  std::vector<std::size_t> touched_blocks;
  std::vector<StateId> marked_states;

  while (!worklist.empty()) {
    ClassId splitter = worklist.front();
    worklist.pop_front();
    queued[splitter] = 0;

    for (AgentId j = 0; j < k.num_agents(); ++j) {
      // States whose j-block meets the splitter.
      touched_blocks.clear();
      marked_states.clear();
      for (StateId s : members[splitter]) {
        std::size_t b = k.block_index(j, s);
        if (block_marked[j][b]) continue;
        block_marked[j][b] = 1;
        touched_blocks.push_back(b);
        for (StateId t : k.partition(j)[b]) {
          if (!state_marked[t]) {
            state_marked[t] = 1;
            marked_states.push_back(t);
          }
        }
      }
      for (std::size_t b : touched_blocks) block_marked[j][b] = 0;

      // Split each class that is partly marked.
      std::vector<ClassId> affected;
      for (StateId s : marked_states) affected.push_back(class_of[s]);
      std::sort(affected.begin(), affected.end());
      affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
      for (ClassId c : affected) {
        std::vector<StateId> in, out;
        for (StateId s : members[c]) (state_marked[s] ? in : out).push_back(s);
        if (out.empty()) continue;
        auto fresh = static_cast<ClassId>(members.size());
        for (StateId s : out) class_of[s] = fresh;
        members[c] = std::move(in);
        members.push_back(std::move(out));
        queued.push_back(0);
        for (ClassId piece : {c, fresh}) {
          if (!queued[piece]) {
            queued[piece] = 1;
            worklist.push_back(piece);
          }
        }
      }
      for (StateId s : marked_states) state_marked[s] = 0;
    }
  }
  return Partition::from_labels(class_of);
}

// ---------------------------------------------------------------------------
// Signatures

struct Signature;
using SignaturePtr = std::shared_ptr<const Signature>;

/// Depth-d knowledge type of a state. Depth 0 is the valuation; depth d
/// pairs the depth-(d-1) signature with, per agent, the set of depth-(d-1)
/// signatures occurring in the state's block for that agent.
struct Signature {
  std::size_t depth = 0;
  std::vector<bool> valuation;                  // depth 0 only
  SignaturePtr previous;                        // depth > 0 only
  std::vector<std::vector<SignaturePtr>> seen;  // per agent, sorted, no repeats

  static std::strong_ordering compare(const Signature& a, const Signature& b) {
    if (&a == &b) return std::strong_ordering::equal;
    if (auto c = a.depth <=> b.depth; c != 0) return c;
    if (a.depth == 0) return a.valuation <=> b.valuation;
    if (auto c = compare(*a.previous, *b.previous); c != 0) return c;
    if (auto c = a.seen.size() <=> b.seen.size(); c != 0) return c;
    for (std::size_t j = 0; j < a.seen.size(); ++j) {
      const auto& x = a.seen[j];
      const auto& y = b.seen[j];
      for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
        if (auto c = compare(*x[i], *y[i]); c != 0) return c;
      if (auto c = x.size() <=> y.size(); c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

  friend std::strong_ordering operator<=>(const Signature& a, const Signature& b) { return compare(a, b); }
  friend bool operator==(const Signature& a, const Signature& b) { return compare(a, b) == 0; }

  static SignaturePtr leaf(std::vector<bool> valuation) {
    auto sig = std::make_shared<Signature>();
    sig->valuation = std::move(valuation);
    return sig;
  }
  static SignaturePtr node(SignaturePtr previous, std::vector<std::vector<SignaturePtr>> seen) {
    auto sig = std::make_shared<Signature>();
    sig->depth = previous->depth + 1;
    sig->previous = std::move(previous);
    for (auto& set : seen) {
      std::sort(set.begin(), set.end(), [](const SignaturePtr& x, const SignaturePtr& y) { return *x < *y; });
      set.erase(std::unique(set.begin(), set.end(), [](const SignaturePtr& x, const SignaturePtr& y) { return *x == *y; }),
                set.end());
    }
    sig->seen = std::move(seen);
    return sig;
  }
};

/// Depth-d signatures of every state. Equal signatures share one node.
inline std::vector<SignaturePtr> signatures(const KripkeModel& k, std::size_t depth) {
  auto less = [](const SignaturePtr& x, const SignaturePtr& y) { return *x < *y; };
  auto intern = [&](std::vector<SignaturePtr>& level) {
    std::map<SignaturePtr, SignaturePtr, decltype(less)> canonical(less);
    for (auto& sig : level) sig = canonical.emplace(sig, sig).first->second;
  };

  std::vector<SignaturePtr> level(k.num_states());
  for (StateId s = 0; s < k.num_states(); ++s) level[s] = Signature::leaf(k.valuation(s));
  intern(level);
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<SignaturePtr> next(k.num_states());
    for (StateId s = 0; s < k.num_states(); ++s) {
      std::vector<std::vector<SignaturePtr>> seen(k.num_agents());
      for (AgentId j = 0; j < k.num_agents(); ++j)
        for (StateId t : k.block(j, s)) seen[j].push_back(level[t]);
      next[s] = Signature::node(level[s], std::move(seen));
    }
    intern(next);
    level = std::move(next);
  }
  return level;
}

inline SignaturePtr signature(const KripkeModel& k, StateId s, std::size_t depth) {
  if (s >= k.num_states()) throw ModelError("unknown state index");
  return signatures(k, depth)[s];
}

// ---------------------------------------------------------------------------
// Quotient

/// The model whose states are the classes of R_inf. State i is named after
/// the first member of class i and `quotient_map[s]` is the class of s.
struct QuotientModel {
  KripkeModel model;
  std::vector<StateId> quotient_map;
};

inline QuotientModel quotient(const KripkeModel& k, const Partition& r_inf) {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> valuation;
  for (const auto& c : r_inf.classes) {
    names.push_back(k.states()[c.front()]);
    valuation.push_back(k.valuation(c.front()));
  }
  std::vector<KripkeModel::BlockList> partitions(k.num_agents());
  for (AgentId j = 0; j < k.num_agents(); ++j) {
    std::map<std::vector<ClassId>, bool> emitted;
    for (const auto& block : k.partition(j)) {
      std::vector<ClassId> image = detail::classes_met(r_inf, block);
      if (emitted.emplace(image, true).second)
        partitions[j].emplace_back(image.begin(), image.end());
    }
  }
  QuotientModel q{KripkeModel(std::move(names), k.atoms(), k.agents(), std::move(valuation), std::move(partitions)),
                  {}};
  q.quotient_map.assign(r_inf.class_of.begin(), r_inf.class_of.end());
  return q;
}

inline QuotientModel quotient(const KripkeModel& k) { return quotient(k, refine_fixpoint(k).final_partition()); }

/// True iff s1 in `first` and s2 in `second` satisfy the same formulas.
inline bool bisimilar_across(const KripkeModel& first, const KripkeModel& second, StateId s1, StateId s2) {
  if (s1 >= first.num_states() || s2 >= second.num_states()) throw ModelError("unknown state index");
  KripkeModel both = disjoint_union(first, second);
  Partition r = refine_fixpoint(both).final_partition();
  return r.same_class(s1, static_cast<StateId>(first.num_states() + s2));
}

// ---------------------------------------------------------------------------
// Distinguishing formulas

/// Builds formulas true at one state and false at another, following the
/// rounds of a refinement trace. A pair first separated in round i gets a
/// formula of modal depth at most i:
///   round 0: a literal on which the valuations differ;
///   round i: for the lowest agent j and lowest R_{i-1} class c met by
///            exactly one of the two j-blocks, ~Kj ~char(c) or Kj ~char(c),
/// where char(c) is the conjunction of the formulas separating c from every
/// other class of R_{i-1}. char(c) is cached per (round, class).
class Distinguisher {
 public:
  explicit Distinguisher(const KripkeModel& k) : k_(k), trace_(refine_fixpoint(k)) {}
  Distinguisher(const KripkeModel& k, RefinementTrace trace) : k_(k), trace_(std::move(trace)) {}

  const RefinementTrace& trace() const { return trace_; }

  std::optional<Formula> distinguish(StateId s, StateId t) {
    if (s >= k_.num_states() || t >= k_.num_states()) throw ModelError("unknown state index");
    auto round = trace_.separating_round(s, t);
    if (!round) return std::nullopt;
    return separate(*round, s, t);
  }

 private:
  Formula separate(std::size_t round, StateId s, StateId t) {
    if (round == 0) {
      for (AtomId a = 0; a < k_.num_atoms(); ++a) {
        if (k_.holds(s, a) == k_.holds(t, a)) continue;
        Formula atom = Formula::atom(k_.atoms()[a]);
        return k_.holds(s, a) ? atom : Formula::negation(atom);
      }
      throw Error("states separated in round 0 have equal valuations");
    }
    const Partition& prev = trace_.rounds[round - 1];
    for (AgentId j = 0; j < k_.num_agents(); ++j) {
      auto met_s = detail::classes_met(prev, k_.block(j, s));
      auto met_t = detail::classes_met(prev, k_.block(j, t));
      std::vector<ClassId> diff;
      std::set_symmetric_difference(met_s.begin(), met_s.end(), met_t.begin(), met_t.end(), std::back_inserter(diff));
      if (diff.empty()) continue;
      ClassId c = diff.front();
      Formula avoids = Formula::knows(k_.agents()[j], Formula::negation(characteristic(round - 1, c)));
      bool s_meets = std::binary_search(met_s.begin(), met_s.end(), c);
      return s_meets ? Formula::negation(avoids) : avoids;
    }
    throw Error("states separated in round " + std::to_string(round) + " have identical block profiles");
  }

  // Formula true exactly on class c of R_round.
  Formula characteristic(std::size_t round, ClassId c) {
    auto key = std::make_pair(round, c);
    if (auto it = characteristic_.find(key); it != characteristic_.end()) return it->second;
    const Partition& r = trace_.rounds[round];
    StateId rep = r.classes[c].front();
    std::optional<Formula> conj;
    for (ClassId d = 0; d < r.size(); ++d) {
      if (d == c) continue;
      StateId other = r.classes[d].front();
      Formula part = separate(*trace_.separating_round(rep, other), rep, other);
      conj = conj ? Formula::conjunction(*conj, part) : part;
    }
    if (!conj) throw Error("characteristic formula requested for a single-class partition");
    return characteristic_.emplace(key, *conj).first->second;
  }

  const KripkeModel& k_;
  RefinementTrace trace_;
  std::map<std::pair<std::size_t, ClassId>, Formula> characteristic_;
};

inline std::optional<Formula> distinguishing_formula(const KripkeModel& k, StateId s, StateId t) {
  return Distinguisher(k).distinguish(s, t);
}

inline std::optional<Formula> distinguishing_formula(const KripkeModel& k, std::string_view s, std::string_view t) {
  return distinguishing_formula(k, k.state_id(s), k.state_id(t));
}

}  // namespace cellkit
