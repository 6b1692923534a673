#pragma once

#include <span>
#include <vector>

namespace meanvalue::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
Rule gauss_legendre(int n);

/// The same rule mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

/// Pairwise summation; the result depends only on the values and their order.
double pairwise_sum(std::span<const double> values);

}  // namespace meanvalue::quadrature
