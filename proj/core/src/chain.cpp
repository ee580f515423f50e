#include "metastab/chain.hpp"

#include <algorithm>
#include <stdexcept>

#include "internal/scc.hpp"

namespace metastab {

LimitMatrix limit_matrix(const Grid<AsymptoticScalar>& P) {
  LimitMatrix out(P.rows(), P.cols(), Rational(0));
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j) {
      const AsymptoticScalar& entry = P(i, j);
      if (!entry.is_zero() && entry.exponents().empty()) out(i, j) = entry.coeff();
    }
  return out;
}

ErgodicDecomposition ergodic_decomposition(const LimitMatrix& P0) {
  const int m = P0.rows();
  std::vector<std::vector<int>> adjacency(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (P0(i, j) > 0) adjacency[i].push_back(j);

  std::vector<int> component;
  int count = internal::strongly_connected_components(adjacency, component);

  std::vector<bool> has_exit(count, false);
  for (int i = 0; i < m; ++i)
    for (int j : adjacency[i])
      if (component[i] != component[j]) has_exit[component[i]] = true;

  std::vector<std::vector<int>> members(count);
  for (int i = 0; i < m; ++i) members[component[i]].push_back(i);

  ErgodicDecomposition out;
  out.closed_class_of.assign(m, -1);
  for (int c = 0; c < count; ++c) {
    if (!has_exit[c] && members[c].size() >= 2) {
      for (int i : members[c]) out.closed_class_of[i] = static_cast<int>(out.closed_classes.size());
      out.closed_classes.push_back(members[c]);
    } else {
      // Open SCCs dissolve into transient singletons. A closed singleton is
      // impossible: the diagonal is zero and rows sum to 1.
      for (int i : members[c]) out.transient.push_back(i);
    }
  }
  std::sort(out.transient.begin(), out.transient.end());
  std::sort(out.closed_classes.begin(), out.closed_classes.end());
  for (size_t c = 0; c < out.closed_classes.size(); ++c)
    for (int i : out.closed_classes[c]) out.closed_class_of[i] = static_cast<int>(c);
  return out;
}

std::vector<Rational> solve_rational(Grid<Rational> A, std::vector<Rational> b) {
  const int n = A.rows();
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row)
      if (A(row, col) != 0) {
        pivot = row;
        break;
      }
    if (pivot < 0) throw std::domain_error("singular rational system");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(A(pivot, j), A(col, j));
      std::swap(b[pivot], b[col]);
    }
    Rational inv = 1 / A(col, col);
    for (int j = col; j < n; ++j) A(col, j) *= inv;
    b[col] *= inv;
    for (int row = 0; row < n; ++row) {
      if (row == col || A(row, col) == 0) continue;
      Rational factor = A(row, col);
      for (int j = col; j < n; ++j) A(row, j) -= factor * A(col, j);
      b[row] -= factor * b[col];
    }
  }
  return b;
}

InvariantMeasure invariant_measure(const LimitMatrix& P0, const std::vector<int>& closed_class) {
  const int n = static_cast<int>(closed_class.size());
  // lambda (P - I) = 0 with the first balance equation replaced by the
  // normalization sum lambda = 1.
  Grid<Rational> A(n, n, Rational(0));
  std::vector<Rational> b(n, Rational(0));
  for (int col = 0; col < n; ++col) {
    if (col == 0) {
      for (int row = 0; row < n; ++row) A(0, row) = 1;
      b[0] = 1;
      continue;
    }
    for (int row = 0; row < n; ++row) {
      A(col, row) = P0(closed_class[row], closed_class[col]);
      if (row == col) A(col, row) -= 1;
    }
  }
  InvariantMeasure lambda = solve_rational(std::move(A), std::move(b));
  for (const Rational& weight : lambda)
    if (weight <= 0) throw std::domain_error("invariant measure outside preconditions");
  // The normalization displaced one balance equation; restore the full
  // stationarity check so non-closed inputs are rejected reliably.
  for (int col = 0; col < n; ++col) {
    Rational balance = 0;
    for (int row = 0; row < n; ++row) balance += lambda[row] * P0(closed_class[row], closed_class[col]);
    if (balance != lambda[col])
      throw std::domain_error("invariant measure outside preconditions");
  }
  return lambda;
}

AsymptoticScalar exit_rate(const std::vector<int>& E, const InvariantMeasure& lambda,
                           const Grid<AsymptoticScalar>& P, int anchor) {
  int anchor_pos = -1;
  for (size_t pos = 0; pos < E.size(); ++pos)
    if (E[pos] == anchor) anchor_pos = static_cast<int>(pos);
  if (anchor_pos < 0 || lambda[anchor_pos] == 0)
    throw std::domain_error("exit_rate anchor must carry positive invariant mass");

  std::vector<bool> inside(P.rows(), false);
  for (int i : E) inside[i] = true;

  std::vector<AsymptoticScalar> terms;
  for (size_t pos = 0; pos < E.size(); ++pos) {
    int j = E[pos];
    if (lambda[pos] == 0) continue;
    AsymptoticScalar weight(lambda[pos]);
    for (int k = 0; k < P.cols(); ++k)
      if (!inside[k] && !P(j, k).is_zero()) terms.push_back(mul(weight, P(j, k)));
  }
  AsymptoticScalar total = add(terms);
  if (total.is_zero()) return total;  // no exits: degenerate, flagged by callers
  return div(total, AsymptoticScalar(lambda[anchor_pos]));
}

RatioLimit exit_distribution(const std::vector<int>& E, const InvariantMeasure& lambda,
                             const Grid<AsymptoticScalar>& P, const std::vector<int>& G) {
  if (G.empty()) throw std::domain_error("exit_distribution needs a nonempty target set");
  std::vector<bool> inside(P.rows(), false), target(P.rows(), false);
  for (int i : E) inside[i] = true;
  for (int k : G) {
    if (inside[k]) throw std::domain_error("exit_distribution target must avoid E");
    target[k] = true;
  }

  std::vector<AsymptoticScalar> numerator, denominator;
  for (size_t pos = 0; pos < E.size(); ++pos) {
    int j = E[pos];
    if (lambda[pos] == 0) continue;
    AsymptoticScalar weight(lambda[pos]);
    for (int k = 0; k < P.cols(); ++k) {
      if (inside[k] || P(j, k).is_zero()) continue;
      AsymptoticScalar term = mul(weight, P(j, k));
      denominator.push_back(term);
      if (target[k]) numerator.push_back(term);
    }
  }
  AsymptoticScalar den = add(denominator);
  if (den.is_zero()) throw std::domain_error("exit_distribution with no exits from E");
  AsymptoticScalar num = add(numerator);
  return limit_ratio(num, den);
}

}  // namespace metastab
