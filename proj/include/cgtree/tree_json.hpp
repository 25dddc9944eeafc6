#pragma once

#include <string>

#include <json.hpp>

#include "cgtree/tree.hpp"

namespace cgtree {

// {"depth", "nodes": [{"id","feature","threshold"}], "leaves": [{"id","target"}], "classes"}
nlohmann::ordered_json tree_to_json(const DecisionTree& t);
DecisionTree tree_from_json(const nlohmann::ordered_json& j);

std::string dump_tree(const DecisionTree& t);
DecisionTree parse_tree(const std::string& text);

}  // namespace cgtree
