#pragma once

// JSON model files:
//
//   {
//     "atoms": ["x"], "agents": ["1", "2"], "states": ["a", "b"],
//     "valuation": {"a": ["x"], "b": []},
//     "partitions": {"1": [["a", "b"]], "2": [["a"], ["b"]]},
//     "block_meta": {"1": [{"block_index": 0, "limit_infinite": true}]}
//   }
//
// "block_meta" is optional. Unknown keys are rejected.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cellkit/model.hpp"

namespace cellkit {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::vector<std::string> string_list(const Json& j, const std::string& key) {
  if (!j.is_array()) throw ModelError("'" + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const Json& item : j) {
    if (!item.is_string()) throw ModelError("'" + key + "' must be an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

inline void require_unique(const std::vector<std::string>& names, const std::string& what) {
  std::set<std::string> seen;
  for (const std::string& n : names)
    if (!seen.insert(n).second) throw ModelError("duplicate " + what + " '" + n + "'");
}

inline std::string describe(const std::vector<Violation>& violations) {
  std::string out = "invalid model:";
  for (const Violation& v : violations) out += "\n  " + v.kind + ": " + v.detail;
  return out;
}

}  // namespace detail

/// Builds a model from its JSON form without checking the partition
/// property. Structural problems (wrong types, unknown names, duplicate ids,
/// missing valuation entries) throw ModelError.
inline KripkeModel model_from_json(const Json& doc) {
  if (!doc.is_object()) throw ModelError("model file must contain a JSON object");
  static const std::set<std::string> known = {"atoms", "agents", "states", "valuation", "partitions", "block_meta"};
  for (const auto& [key, value] : doc.items())
    if (!known.contains(key)) throw ModelError("unknown key '" + key + "'");
  for (const char* key : {"atoms", "agents", "states", "valuation", "partitions"})
    if (!doc.contains(key)) throw ModelError(std::string("missing key '") + key + "'");

  auto atoms = detail::string_list(doc["atoms"], "atoms");
  auto agents = detail::string_list(doc["agents"], "agents");
  auto states = detail::string_list(doc["states"], "states");
  detail::require_unique(atoms, "atom");
  detail::require_unique(agents, "agent");
  detail::require_unique(states, "state");

  auto index_of = [](const std::vector<std::string>& names, const std::string& name,
                     const std::string& what) -> std::size_t {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw ModelError("unknown " + what + " '" + name + "'");
  };

  const Json& val = doc["valuation"];
  if (!val.is_object()) throw ModelError("'valuation' must be an object");
  for (const auto& [key, value] : val.items()) index_of(states, key, "state");
  std::vector<std::vector<bool>> valuation(states.size(), std::vector<bool>(atoms.size(), false));
  for (std::size_t s = 0; s < states.size(); ++s) {
    if (!val.contains(states[s])) throw ModelError("no valuation for state '" + states[s] + "'");
    for (const std::string& atom : detail::string_list(val[states[s]], "valuation")) {
      valuation[s][index_of(atoms, atom, "atom")] = true;
    }
  }

  const Json& parts = doc["partitions"];
  if (!parts.is_object()) throw ModelError("'partitions' must be an object");
  for (const auto& [key, value] : parts.items()) index_of(agents, key, "agent");
  std::vector<KripkeModel::BlockList> partitions(agents.size());
  for (AgentId j = 0; j < agents.size(); ++j) {
    if (!parts.contains(agents[j])) throw ModelError("no partition for agent '" + agents[j] + "'");
    const Json& blocks = parts[agents[j]];
    if (!blocks.is_array()) throw ModelError("partition of agent '" + agents[j] + "' must be an array of blocks");
    for (const Json& block : blocks) {
      KripkeModel::Block ids;
      for (const std::string& s : detail::string_list(block, "partitions"))
        ids.push_back(static_cast<StateId>(index_of(states, s, "state")));
      partitions[j].push_back(std::move(ids));
    }
  }

  std::vector<std::vector<BlockMeta>> meta(agents.size());
  for (AgentId j = 0; j < agents.size(); ++j) meta[j].resize(partitions[j].size());
  if (doc.contains("block_meta")) {
    const Json& bm = doc["block_meta"];
    if (!bm.is_object()) throw ModelError("'block_meta' must be an object");
    for (const auto& [agent, entries] : bm.items()) {
      AgentId j = index_of(agents, agent, "agent");
      if (!entries.is_array()) throw ModelError("block_meta of agent '" + agent + "' must be an array");
      for (const Json& entry : entries) {
        if (!entry.is_object()) throw ModelError("block_meta entries must be objects");
        for (const auto& [key, value] : entry.items())
          if (key != "block_index" && key != "limit_infinite") throw ModelError("unknown key '" + key + "'");
        if (!entry.contains("block_index") || !entry["block_index"].is_number_integer())
          throw ModelError("block_meta entry needs an integer 'block_index'");
        auto b = entry["block_index"].get<long long>();
        if (b < 0 || static_cast<std::size_t>(b) >= partitions[j].size())
          throw ModelError("block_meta refers to missing block " + std::to_string(b) + " of agent '" + agent + "'");
        if (entry.contains("limit_infinite")) {
          if (!entry["limit_infinite"].is_boolean()) throw ModelError("'limit_infinite' must be a boolean");
          meta[j][static_cast<std::size_t>(b)].limit_infinite = entry["limit_infinite"].get<bool>();
        }
      }
    }
  }

  return KripkeModel(std::move(states), std::move(atoms), std::move(agents), std::move(valuation),
                     std::move(partitions), std::move(meta));
}

inline Json model_to_json(const KripkeModel& k) {
  Json doc;
  doc["atoms"] = k.atoms();
  doc["agents"] = k.agents();
  doc["states"] = k.states();
  Json val = Json::object();
  for (StateId s = 0; s < k.num_states(); ++s) {
    Json atoms = Json::array();
    for (AtomId a = 0; a < k.num_atoms(); ++a)
      if (k.holds(s, a)) atoms.push_back(k.atoms()[a]);
    val[k.states()[s]] = std::move(atoms);
  }
  doc["valuation"] = std::move(val);
  Json parts = Json::object();
  for (AgentId j = 0; j < k.num_agents(); ++j) {
    Json blocks = Json::array();
    for (const auto& block : k.partition(j)) {
      Json names = Json::array();
      for (StateId s : block) names.push_back(k.states()[s]);
      blocks.push_back(std::move(names));
    }
    parts[k.agents()[j]] = std::move(blocks);
  }
  doc["partitions"] = std::move(parts);
  if (k.has_block_meta()) {
    Json bm = Json::object();
    for (AgentId j = 0; j < k.num_agents(); ++j) {
      Json entries = Json::array();
      for (std::size_t b = 0; b < k.partition(j).size(); ++b)
        if (k.meta(j, b).limit_infinite) entries.push_back({{"block_index", b}, {"limit_infinite", true}});
      if (!entries.empty()) bm[k.agents()[j]] = std::move(entries);
    }
    doc["block_meta"] = std::move(bm);
  }
  return doc;
}

/// Parses and validates a model file.
inline KripkeModel load_model(std::string_view bytes) {
  Json doc;
  try {
    doc = Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
  KripkeModel k = model_from_json(doc);
  if (auto violations = validate(k); !violations.empty()) throw ModelError(detail::describe(violations));
  return k;
}

/// Canonical file text: two-space indentation, trailing newline.
inline std::string save_model(const KripkeModel& k) { return model_to_json(k).dump(2) + "\n"; }

}  // namespace cellkit
