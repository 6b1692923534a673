#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "meanvalue/equation.hpp"

namespace meanvalue {

/// A domain in R^m described by a signed distance (negative inside) and an
/// axis-aligned bounding box. The signed distance must be 1-Lipschitz.
class Domain {
 public:
  using SignedDistance = std::function<double(std::span<const double>)>;
  using Projection = std::function<Point(std::span<const double>)>;

  // An empty projection falls back to p - sd(p) * grad sd(p) with a
  // central-difference gradient.
  Domain(int dimension, SignedDistance sd, Point lower, Point upper,
         Projection projection = {}, std::string name = "custom");

  static Domain ball(Point center, double radius);
  static Domain box(Point lower, Point upper);
  // Outer ball minus a smaller closed ball nested inside it.
  static Domain shell(Point outer_center, double outer_radius, Point inner_center,
                      double inner_radius);
  // All of R^m; every ball is admissible.
  static Domain whole_space(int dimension);

  int dimension() const { return dimension_; }
  const std::string& name() const { return name_; }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }

  double signed_distance(std::span<const double> p) const;
  bool contains(std::span<const double> p) const { return signed_distance(p) < 0.0; }
  // Distance from an interior point to the boundary (0 outside).
  double boundary_distance(std::span<const double> p) const;
  Point project_to_boundary(std::span<const double> p) const;
  // Length of the bounding-box diagonal.
  double diameter() const;

 private:
  int dimension_;
  SignedDistance sd_;
  Point lower_;
  Point upper_;
  Projection projection_;
  std::string name_;
};

/// Checks |sd(a) - sd(b)| <= |a - b| + 1e-9 on random pairs from the
/// bounding box. Unbounded domains are sampled in [-10, 10]^m.
bool lipschitz_spot_check(const Domain& domain, std::size_t pairs, std::uint64_t seed);

}  // namespace meanvalue
