#pragma once

#include <vector>

#include "mots/geometry.hpp"
#include "mots/types.hpp"

namespace mots {

// Minimum-cost rectangular assignment. Returns, for each row, the assigned
// column or -1. Every row is assigned when rows <= cols and every column
// when cols <= rows. Deterministic for a fixed input.
std::vector<int> solve_assignment(const Matrix& cost);

struct AssignmentProblem {
  Matrix cost;        // e.g. 1 - iou
  double gate = 0.7;  // maximum admissible cost
};

// Optimal one-to-one assignment over admissible pairs (cost <= gate).
// Gated pairs are priced above any admissible total, so the solver first
// maximizes the number of admissible matches and then minimizes their
// summed cost. Gated pairs are never reported as matches.
AssociationResult hungarian_solve(const AssignmentProblem& problem);

}  // namespace mots
