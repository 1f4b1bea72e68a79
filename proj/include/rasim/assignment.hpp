#ifndef RASIM_ASSIGNMENT_HPP
#define RASIM_ASSIGNMENT_HPP

#include <vector>

namespace rasim {

// Exact minimum-cost bipartite assignment (Jonker-Volgenant style shortest
// augmenting paths with dual potentials). For an n x m cost matrix the
// min(n, m) cheapest pairings are produced; the result maps each row to a
// column index or -1. Deterministic: rows are processed in index order and
// column scans keep the first minimum, so exact cost ties resolve to the
// lowest (row, column) pair.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace rasim

#endif  // RASIM_ASSIGNMENT_HPP
