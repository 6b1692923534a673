#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "meanvalue/domain.hpp"
#include "meanvalue/field.hpp"

namespace meanvalue::wos {

struct WalkConfig {
  // 0 runs plain harmonic walk on spheres.
  double mu = 0.0;
  double epsilon_shell = 1e-4;
  std::size_t max_steps = 10000;
  std::size_t walks = 10000;
  std::uint64_t seed = 1;
  // Step radius as a fraction of the distance to the boundary.
  double radius_fraction = 1.0;

  void validate() const;
};

/// epsilon_shell = 1e-4 * diameter, other fields default.
WalkConfig default_config(const Domain& domain);

struct WalkResult {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t walks_completed = 0;
  std::size_t truncated_walks = 0;
  double mean_steps = 0.0;
  double mean_weight = 0.0;
};

class StartOutsideDomain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class AllWalksTruncated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1 / a_sphere(mu rho) in dimension m; in (0, 1], equal to 1 iff mu = 0.
double survival_weight(int m, double mu, double rho);

/// Monte Carlo estimate of u(x) for laplacian(u) = mu^2 u in `domain`, u = g
/// on the boundary. Each step jumps to a uniform point on the sphere of radius
/// radius_fraction * dist(p, boundary) and multiplies the walk weight by
/// survival_weight; inside the epsilon shell the walk scores w g(projection).
/// Walk i draws from StreamRng(seed, i) and the scores are reduced in walk
/// order, so the result is independent of the OpenMP thread count.
WalkResult solve_dirichlet(const Domain& domain, const ScalarField& g, std::span<const double> x,
                           const WalkConfig& cfg);

/// Single-threaded reference with running accumulation; agrees with
/// solve_dirichlet up to summation rounding.
WalkResult solve_dirichlet_serial(const Domain& domain, const ScalarField& g,
                                  std::span<const double> x, const WalkConfig& cfg);

}  // namespace meanvalue::wos
