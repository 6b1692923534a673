#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "meanvalue/field.hpp"

namespace meanvalue::testbank {

struct CatalogueParams {
  double mu = 1.0;
  double lambda = 2.0;
};

/// Closed-form test fields in R^m. Every field is defined on the unit ball
/// (its `domain`), which is the region the test points are drawn from.
///
///   panharmonic    exp_mu_x1, exp_mu_diag, exp_cos_mix, exp_x1_x2 (mu = 1),
///                  radial_i0 (m = 2), radial_sinhc (m = 3)
///   metaharmonic   cos_lambda_x1, sin_lambda_diag, cos_exp_mix,
///                  radial_j0 (m = 2), radial_sinc (m = 3)
///   harmonic       one, x1, x1x2, harmonic_saddle,
///                  log_kernel (m = 2), newton_kernel (m = 3)
///   none           sq_norm, exp_x1_sq_x2, exp_2mu_x1
///
/// Radial and kernel families exist only for m in {2, 3}; the rest for any
/// m >= 2.
std::vector<ScalarField> catalogue(int m, CatalogueParams params = {});

/// Looks a field up by label. Throws std::invalid_argument for an unknown
/// label or a radial family outside m in {2, 3}.
ScalarField find_field(std::string_view label, int m, CatalogueParams params = {});

/// Constant field, handy as boundary data.
ScalarField constant_field(int m, double value);

/// Unit ball centred at the origin.
Domain test_region(int m);

/// Five fixed interior points of the test region, away from the nodal sets
/// of the catalogued solutions.
std::vector<Point> interior_points(int m);

/// Second-order central-difference Laplacian with step h.
double finite_difference_laplacian(const ScalarField& u, std::span<const double> x, double h);

/// laplacian(u) - c u with c = signed_coefficient(kind). Uses the exact
/// Laplacian when the field carries one, else finite differences with step h.
double residual(const ScalarField& u, const EquationKind& kind, std::span<const double> x,
                double h = 1e-3);

}  // namespace meanvalue::testbank
