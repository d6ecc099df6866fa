#pragma once

#include <string>

#include "ising/decomposition.hpp"
#include "ising/graph.hpp"
#include "ising/model.hpp"

namespace ising {

// JSON formats:
//   graph          {"n": 4, "edges": [[0, 1], [1, 2]]}
//   model          {"n": 4, "edges": [{"u": 0, "v": 1, "j": 0.5}], "fields": [..] | null}
//   decomposition  {"c": 8, "root": 0, "nodes": [{"id", "parent", "vertices", "edges"}]}
// Model edges may also be given as [u, v] (J = 0) or [u, v, j].
// Parse errors raise InvalidInput.

Graph parse_graph(const std::string& text);
std::string graph_to_json(const Graph& g);

IsingModel parse_model(const std::string& text);
std::string model_to_json(const IsingModel& m);

DecompositionTree parse_decomposition(const std::string& text);
std::string decomposition_to_json(const DecompositionTree& tree);

// "3:+1,5:-1"; an empty string is the empty condition.
Condition parse_condition(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ising
