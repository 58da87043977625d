#pragma once

#include <utility>

#include "liouville/grid.hpp"
#include "liouville/potential.hpp"
#include "liouville/solution.hpp"

namespace liouville {

// psi = -2 log(1 + (lambda r)^{2 k}) + log(k / pi) + 2 k log(lambda) with
// k = n_fam; solves the equation with V = 1, weight r^{2(k - 1)} and beta = 2 k.
NormalizedSolution conformal_bubble(double n_fam, double lambda, const Grid& grid);

// Scale of the bubble reached by shooting from psi(0) = s with V = 1 and
// weight exponent 2 (n_fam - 1).
double bubble_lambda_for_shot(double n_fam, double s);

struct SharpRegularity {
  Potential potential;
  NormalizedSolution solution;
};

// Solution with a log-singular potential, psi = -log(-log r) / 2 for
// r <= alpha_cut and beta = 1 / (4 log alpha_cut) < 0. alpha_cut is inserted
// into the grid as a node.
SharpRegularity sharp_regularity_example(double alpha_cut, const Grid& grid);

}  // namespace liouville
