#ifndef METASTAB_CHAIN_HPP
#define METASTAB_CHAIN_HPP

#include <vector>

#include "metastab/asymptotics.hpp"
#include "metastab/grid.hpp"

namespace metastab {

// Exact-rational stochastic matrix with zero diagonal: the entrywise limit of
// an asymptotic kernel.
using LimitMatrix = Grid<Rational>;

// Partition of the state set into closed communicating classes (each of size
// >= 2, since the diagonal is zero) and transient singletons.
struct ErgodicDecomposition {
  std::vector<std::vector<int>> closed_classes;  // members sorted ascending
  std::vector<int> transient;                    // sorted ascending
  // state -> (index into closed_classes) or -1 when transient.
  std::vector<int> closed_class_of;
};

// Probability vector over one closed class, indexed like the class member
// list. Exact: lambda P = lambda and sum lambda = 1 hold as rational
// identities.
using InvariantMeasure = std::vector<Rational>;

// Entry (i,j) is the coefficient when the exponent map of P(i,j) is empty,
// else 0. Rows must leading-sum to 1.
LimitMatrix limit_matrix(const Grid<AsymptoticScalar>& P);

ErgodicDecomposition ergodic_decomposition(const LimitMatrix& P0);

// Unique stationary vector of P0 restricted to a closed irreducible class.
InvariantMeasure invariant_measure(const LimitMatrix& P0, const std::vector<int>& closed_class);

// (1/lambda(anchor)) sum_{j in E, k not in E} lambda(j) P(j,k): the
// asymptotic probability of leaving E before returning to the anchor, and the
// reciprocal of the expected visit count. Zero when E has no exits (legal at
// the top of the hierarchy; callers flag it).
AsymptoticScalar exit_rate(const std::vector<int>& E, const InvariantMeasure& lambda,
                           const Grid<AsymptoticScalar>& P, int anchor);

// lim of sum_{k in G, j in E} lambda(j) P(j,k) over the same sum with G
// replaced by the whole complement F. Over a partition of F the finite limits
// sum to exactly 1.
RatioLimit exit_distribution(const std::vector<int>& E, const InvariantMeasure& lambda,
                             const Grid<AsymptoticScalar>& P, const std::vector<int>& G);

// Exact dense solve of A x = b by Gaussian elimination over the rationals.
// Throws std::domain_error on a singular system.
std::vector<Rational> solve_rational(Grid<Rational> A, std::vector<Rational> b);

}  // namespace metastab

#endif
