#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "meanvalue/domain.hpp"
#include "meanvalue/equation.hpp"

namespace meanvalue {

/// A real function on (a domain of) R^m. The evaluator must be pure: the
/// quadrature and walk kernels call it concurrently.
struct ScalarField {
  using Evaluator = std::function<double(std::span<const double>)>;

  int dimension = 0;
  std::string label;
  Evaluator value;
  // Empty when no closed-form Laplacian is known.
  Evaluator laplacian;
  // The equation this field solves, if any.
  std::optional<EquationKind> kind;
  // Where the field is defined and smooth.
  Domain domain = Domain::whole_space(2);

  double operator()(std::span<const double> y) const { return value(y); }
  bool has_exact_laplacian() const { return static_cast<bool>(laplacian); }
};

}  // namespace meanvalue
