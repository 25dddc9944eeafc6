#include "cgtree/tree_json.hpp"

#include "cgtree/errors.hpp"

namespace cgtree {

nlohmann::ordered_json tree_to_json(const DecisionTree& t) {
  nlohmann::ordered_json j;
  j["depth"] = t.depth;
  auto nodes = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < t.node_splits.size(); ++n) {
    nlohmann::ordered_json node;
    node["id"] = n;
    node["feature"] = t.node_splits[n].feature;
    node["threshold"] = t.node_splits[n].threshold;
    nodes.push_back(std::move(node));
  }
  j["nodes"] = std::move(nodes);
  auto leaves = nlohmann::ordered_json::array();
  const std::size_t first_leaf = t.node_splits.size();
  for (std::size_t l = 0; l < t.leaf_targets.size(); ++l) {
    nlohmann::ordered_json leaf;
    leaf["id"] = first_leaf + l;
    leaf["target"] = t.leaf_targets[l];
    leaves.push_back(std::move(leaf));
  }
  j["leaves"] = std::move(leaves);
  if (!t.class_names.empty()) j["classes"] = t.class_names;
  return j;
}

DecisionTree tree_from_json(const nlohmann::ordered_json& j) {
  try {
    DecisionTree t;
    t.depth = j.at("depth").get<int>();
    const TreeTopology topo(t.depth);
    const auto& nodes = j.at("nodes");
    const auto& leaves = j.at("leaves");
    if (nodes.size() != static_cast<std::size_t>(topo.num_internal()) ||
        leaves.size() != static_cast<std::size_t>(topo.num_leaves())) {
      throw DataError("model JSON node/leaf counts do not match depth");
    }
    t.node_splits.resize(nodes.size());
    for (const auto& n : nodes) {
      const auto id = n.at("id").get<int>();
      if (!topo.is_internal(id)) throw DataError("model JSON has bad internal node id");
      t.node_splits[id] = SplitCheck{-1, n.at("feature").get<int>(),
                                     n.at("threshold").get<double>()};
    }
    t.leaf_targets.resize(leaves.size());
    for (const auto& l : leaves) {
      const auto id = l.at("id").get<int>();
      if (!topo.is_leaf(id)) throw DataError("model JSON has bad leaf id");
      t.leaf_targets[topo.leaf_index(id)] = l.at("target").get<int>();
    }
    if (j.contains("classes")) t.class_names = j.at("classes").get<std::vector<std::string>>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model JSON: ") + e.what());
  }
}

std::string dump_tree(const DecisionTree& t) { return tree_to_json(t).dump(2) + "\n"; }

DecisionTree parse_tree(const std::string& text) {
  try {
    return tree_from_json(nlohmann::ordered_json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("malformed model JSON: ") + e.what());
  }
}

}  // namespace cgtree
