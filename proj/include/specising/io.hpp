#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "specising/interaction.hpp"

namespace specising {

struct ParseError : std::runtime_error {
  ParseError(const std::string& path, int line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_number(line) {}
  int line_number;
};

struct GraphFile {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // simple, undirected, 0-based
};

// ".sym" text format: header "N nnz", then nnz lines "i j w" with 0 <= i <= j < N.
// Paths ending in ".json" use the JSON mirror {"n":..., "entries": [[i,j,w],...]}.
SymmetricInteraction read_interaction(const std::string& path);
void write_interaction(const std::string& path, const SymmetricInteraction& J);

// ".graph" text format: header "n m", then m lines "u v".
GraphFile read_graph(const std::string& path);
void write_graph(const std::string& path, const GraphFile& g);

}  // namespace specising
