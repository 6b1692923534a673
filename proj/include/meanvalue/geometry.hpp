#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "meanvalue/domain.hpp"
#include "meanvalue/field.hpp"

namespace meanvalue {

/// Volume of the unit ball in R^m, 2 pi^{m/2} / (m Gamma(m/2)).
double unit_ball_volume(int m);
double ball_volume(int m, double radius);
double sphere_area(int m, double radius);

class Ball {
 public:
  Ball(Point center, double radius);

  int dimension() const { return static_cast<int>(center_.size()); }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Point center_;
  double radius_;
};

/// True iff the closed ball lies inside the domain:
/// sd(center) <= -radius - 1e-12. Throws std::invalid_argument on a
/// dimension mismatch.
bool is_admissible(const Ball& ball, const Domain& domain);

enum class Execution { Serial, Parallel };

enum class MeanMethod { TrapezoidCircle, GaussRadial, ProductSphere3D, MonteCarlo };
std::string_view to_string(MeanMethod method);

struct MeanEstimate {
  double value = 0.0;
  // Difference of the last two deterministic refinements, or the Monte Carlo
  // standard error.
  double error_bound = 0.0;
  MeanMethod method = MeanMethod::TrapezoidCircle;
  std::size_t samples = 0;
};

struct QuadratureConfig {
  int circle_points = 64;
  int polar_points = 32;
  int azimuth_points = 64;
  int radial_points = 32;
  // Refinements stop once two successive estimates agree to
  // tolerance * max(1, |estimate|).
  double tolerance = 1e-12;
  int max_doublings = 4;
  // Monte Carlo, used for m >= 4.
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 20240101;
  Execution execution = Execution::Parallel;

  // Throws std::invalid_argument: any rule size < 4, tolerance <= 0,
  // max_doublings < 1, or mc_samples < 2.
  void validate() const;
};

/// Mean of u over the sphere bounding `ball`. m = 2: trapezoid rule on the
/// circle; m = 3: Gauss-Legendre in cos(polar) times trapezoid in azimuth;
/// m >= 4: Monte Carlo with uniform directions.
MeanEstimate sphere_mean(const ScalarField& u, const Ball& ball, const QuadratureConfig& cfg = {});

/// Mean of u over `ball`. m = 2, 3: Gauss-Legendre in the radius with weight
/// s^{m-1} over sphere-rule shells; m >= 4: Monte Carlo with radius
/// r U^{1/m} times a uniform direction.
MeanEstimate ball_mean(const ScalarField& u, const Ball& ball, const QuadratureConfig& cfg = {});

}  // namespace meanvalue
