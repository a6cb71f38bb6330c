#pragma once

// Truth sets of formulas in a Kripke model, plus an S5 soundness harness.

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "cellkit/formula.hpp"
#include "cellkit/model.hpp"

namespace cellkit {

namespace detail {

class Evaluator {
 public:
  explicit Evaluator(const KripkeModel& k) : k_(k) {}

  const StateSet& eval(const Formula& f) {
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
    StateSet out;
    switch (f.kind()) {
      case FormulaKind::atom: {
        AtomId a = k_.atom_id(f.name());
        out = StateSet(k_.num_states());
        for (StateId s = 0; s < k_.num_states(); ++s)
          if (k_.holds(s, a)) out.insert(s);
        break;
      }
      case FormulaKind::negation:
        out = eval(f.child()).complement();
        break;
      case FormulaKind::conjunction: {
        out = eval(f.left());
        out &= eval(f.right());
        break;
      }
      case FormulaKind::knowledge: {
        AgentId j = k_.agent_id(f.name());
        const StateSet& inner = eval(f.child());
        out = StateSet(k_.num_states());
        for (const auto& block : k_.partition(j)) {
          bool all = true;
          for (StateId s : block) all = all && inner.contains(s);
          if (all)
            for (StateId s : block) out.insert(s);
        }
        break;
      }
    }
    return memo_.emplace(f.id(), std::move(out)).first->second;
  }

 private:
  const KripkeModel& k_;
  // Keyed by node identity; the formula outlives the evaluator.
  std::unordered_map<const Formula::Node*, StateSet> memo_;
};

}  // namespace detail

/// The set of states where `f` holds. Throws ModelError on unknown atoms or
/// agents.
inline StateSet extension(const KripkeModel& k, const Formula& f) {
  detail::Evaluator evaluator(k);
  return evaluator.eval(f);
}

inline bool satisfies(const KripkeModel& k, StateId s, const Formula& f) {
  if (s >= k.num_states()) throw ModelError("unknown state index");
  return extension(k, f).contains(s);
}

inline bool satisfies(const KripkeModel& k, std::string_view state, const Formula& f) {
  return satisfies(k, k.state_id(state), f);
}

inline bool valid_in(const KripkeModel& k, const Formula& f) { return extension(k, f).full(); }

/// Seeded generator of random formulas over a model's atoms and agents.
class FormulaSampler {
 public:
  FormulaSampler(std::vector<std::string> atoms, std::vector<std::string> agents, std::uint64_t seed)
      : atoms_(std::move(atoms)), agents_(std::move(agents)), rng_(seed) {
    if (atoms_.empty()) throw ModelError("cannot sample formulas without atoms");
  }
  FormulaSampler(const KripkeModel& k, std::uint64_t seed) : FormulaSampler(k.atoms(), k.agents(), seed) {}

  /// Random formula of modal and connective depth at most `depth`.
  Formula sample(std::size_t depth) {
    if (depth == 0) return Formula::atom(pick(atoms_));
    std::uint64_t choice = below(agents_.empty() ? 3 : 4);
    switch (choice) {
      case 0:
        return Formula::atom(pick(atoms_));
      case 1:
        return Formula::negation(sample(depth - 1));
      case 2: {
        Formula l = sample(depth - 1);
        return Formula::conjunction(l, sample(depth - 1));
      }
      default: {
        std::string agent = pick(agents_);
        return Formula::knows(std::move(agent), sample(depth - 1));
      }
    }
  }

  const std::string& agent() { return pick(agents_); }

 private:
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  const std::string& pick(const std::vector<std::string>& v) { return v[below(v.size())]; }

  std::vector<std::string> atoms_;
  std::vector<std::string> agents_;
  std::mt19937_64 rng_;
};

struct S5Report {
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::vector<std::string> violations;  // rendered failing instances
  bool ok() const { return violations.empty(); }
};

/// Samples `samples` triples (f, g, j) with formulas of depth <= `depth` and
/// checks validity of the S5 axiom schemas
///   (Kj f & Kj (f -> g)) -> Kj g,  Kj f -> f,  Kj f -> Kj Kj f,
///   ~Kj f -> Kj ~Kj f
/// plus necessitation (valid f implies valid Kj f) on f, on the tautology
/// f -> f, and on each axiom instance. Any violation is an evaluator bug.
inline S5Report s5_suite(const KripkeModel& k, std::uint64_t seed, std::size_t samples, std::size_t depth = 3) {
  S5Report report;
  report.seed = seed;
  if (k.num_atoms() == 0 || k.num_agents() == 0) return report;
  FormulaSampler sampler(k, seed);

  auto check = [&](const char* schema, const Formula& instance) {
    ++report.instances;
    if (!valid_in(k, instance)) report.violations.push_back(std::string(schema) + ": " + render(instance));
  };
  auto necessitation = [&](const std::string& agent, const Formula& f) {
    ++report.instances;
    if (valid_in(k, f) && !valid_in(k, Formula::knows(agent, f)))
      report.violations.push_back("necessitation: " + render(f));
  };

  for (std::size_t i = 0; i < samples; ++i) {
    Formula f = sampler.sample(depth);
    Formula g = sampler.sample(depth);
    std::string j = sampler.agent();
    Formula kf = Formula::knows(j, f);

    Formula distribution = Formula::implication(
        Formula::conjunction(kf, Formula::knows(j, Formula::implication(f, g))), Formula::knows(j, g));
    Formula truth = Formula::implication(kf, f);
    Formula positive = Formula::implication(kf, Formula::knows(j, kf));
    Formula negative =
        Formula::implication(Formula::negation(kf), Formula::knows(j, Formula::negation(kf)));

    check("distribution", distribution);
    check("truth", truth);
    check("positive introspection", positive);
    check("negative introspection", negative);

    necessitation(j, f);
    necessitation(j, Formula::implication(f, f));
    for (const Formula& axiom : {distribution, truth, positive, negative}) necessitation(j, axiom);
  }
  return report;
}

}  // namespace cellkit
