#pragma once

#include <cstddef>
#include <vector>

namespace asp {

using Adjacency = std::vector<std::vector<std::size_t>>;

/// Tarjan's algorithm (iterative). Components come out in reverse
/// topological order: every component is listed after all components it
/// can reach.
std::vector<std::vector<std::size_t>> strongly_connected_components(const Adjacency& g);

/// Nodes reachable from `sources` (including the sources).
std::vector<bool> reachable_from(const Adjacency& g, const std::vector<std::size_t>& sources);

}  // namespace asp
