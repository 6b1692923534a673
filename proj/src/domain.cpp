#include "meanvalue/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "meanvalue/rng.hpp"

namespace meanvalue {

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Closest point of the sphere |y - c| = r; the +x1 pole when p == c.
Point project_to_sphere(std::span<const double> p, const Point& c, double r) {
  const double d = distance(p, c);
  Point q(c);
  if (d == 0.0) {
    q[0] += r;
    return q;
  }
  for (std::size_t i = 0; i < q.size(); ++i) q[i] += r * (p[i] - c[i]) / d;
  return q;
}

void check_point_dimension(int m, std::span<const double> p) {
  if (static_cast<int>(p.size()) != m)
    throw std::invalid_argument("point has " + std::to_string(p.size()) +
                                " coordinates, domain dimension is " + std::to_string(m));
}

}  // namespace

Domain::Domain(int dimension, SignedDistance sd, Point lower, Point upper, Projection projection,
               std::string name)
    : dimension_(dimension),
      sd_(std::move(sd)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      projection_(std::move(projection)),
      name_(std::move(name)) {
  if (dimension_ < 2) throw std::invalid_argument("dimension must be >= 2");
  if (!sd_) throw std::invalid_argument("domain needs a signed distance");
  if (static_cast<int>(lower_.size()) != dimension_ || static_cast<int>(upper_.size()) != dimension_)
    throw std::invalid_argument("bounding box dimension mismatch");
}

Domain Domain::ball(Point center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  const int m = static_cast<int>(center.size());
  Point lo(center), hi(center);
  for (int i = 0; i < m; ++i) {
    lo[i] -= radius;
    hi[i] += radius;
  }
  auto sd = [center, radius](std::span<const double> p) { return distance(p, center) - radius; };
  auto proj = [center, radius](std::span<const double> p) {
    return project_to_sphere(p, center, radius);
  };
  return Domain(m, sd, lo, hi, proj, "ball");
}

Domain Domain::box(Point lower, Point upper) {
  const int m = static_cast<int>(lower.size());
  if (static_cast<int>(upper.size()) != m) throw std::invalid_argument("box corner dimension mismatch");
  for (int i = 0; i < m; ++i)
    if (!(upper[i] > lower[i])) throw std::invalid_argument("box must have positive extent");
  auto sd = [lower, upper](std::span<const double> p) {
    double outside = 0.0;
    double inside = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double q = std::max(lower[i] - p[i], p[i] - upper[i]);
      outside += std::max(q, 0.0) * std::max(q, 0.0);
      inside = std::max(inside, q);
    }
    return outside > 0.0 ? std::sqrt(outside) : inside;
  };
  auto proj = [lower, upper](std::span<const double> p) {
    Point q(p.begin(), p.end());
    bool outside = false;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] < lower[i] || q[i] > upper[i]) outside = true;
      q[i] = std::clamp(q[i], lower[i], upper[i]);
    }
    if (outside) return q;
    // Interior: move along the axis with the nearest face.
    std::size_t axis = 0;
    double best = std::numeric_limits<double>::infinity();
    bool to_upper = false;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] - lower[i] < best) {
        best = q[i] - lower[i];
        axis = i;
        to_upper = false;
      }
      if (upper[i] - q[i] < best) {
        best = upper[i] - q[i];
        axis = i;
        to_upper = true;
      }
    }
    q[axis] = to_upper ? upper[axis] : lower[axis];
    return q;
  };
  return Domain(m, sd, lower, upper, proj, "box");
}

Domain Domain::shell(Point outer_center, double outer_radius, Point inner_center, double inner_radius) {
  if (outer_center.size() != inner_center.size())
    throw std::invalid_argument("shell centers have different dimensions");
  if (!(inner_radius > 0.0) || !(outer_radius > 0.0))
    throw std::invalid_argument("shell radii must be positive");
  if (distance(outer_center, inner_center) + inner_radius >= outer_radius)
    throw std::invalid_argument("inner ball must lie strictly inside the outer ball");
  const int m = static_cast<int>(outer_center.size());
  Point lo(outer_center), hi(outer_center);
  for (int i = 0; i < m; ++i) {
    lo[i] -= outer_radius;
    hi[i] += outer_radius;
  }
  // Exact inside the shell, where the nearest boundary point lies on one of
  // the two spheres.
  auto sd = [=](std::span<const double> p) {
    return std::max(distance(p, outer_center) - outer_radius, inner_radius - distance(p, inner_center));
  };
  auto proj = [=](std::span<const double> p) {
    const double to_outer = std::abs(outer_radius - distance(p, outer_center));
    const double to_inner = std::abs(distance(p, inner_center) - inner_radius);
    return to_outer <= to_inner ? project_to_sphere(p, outer_center, outer_radius)
                                : project_to_sphere(p, inner_center, inner_radius);
  };
  return Domain(m, sd, lo, hi, proj, "shell");
}

Domain Domain::whole_space(int dimension) {
  const double inf = std::numeric_limits<double>::infinity();
  auto sd = [](std::span<const double>) { return -std::numeric_limits<double>::infinity(); };
  return Domain(dimension, sd, Point(dimension, -inf), Point(dimension, inf), {}, "whole_space");
}

double Domain::signed_distance(std::span<const double> p) const {
  check_point_dimension(dimension_, p);
  return sd_(p);
}

double Domain::boundary_distance(std::span<const double> p) const {
  return std::max(0.0, -signed_distance(p));
}

Point Domain::project_to_boundary(std::span<const double> p) const {
  check_point_dimension(dimension_, p);
  if (projection_) return projection_(p);
  const double scale = std::isfinite(diameter()) ? std::max(1.0, diameter()) : 1.0;
  const double h = 1e-6 * scale;
  const double d = sd_(p);
  Point grad(dimension_), probe(p.begin(), p.end());
  double norm = 0.0;
  for (int i = 0; i < dimension_; ++i) {
    probe[i] = p[i] + h;
    const double up = sd_(probe);
    probe[i] = p[i] - h;
    const double down = sd_(probe);
    probe[i] = p[i];
    grad[i] = (up - down) / (2.0 * h);
    norm += grad[i] * grad[i];
  }
  norm = std::sqrt(norm);
  Point q(p.begin(), p.end());
  if (norm == 0.0 || !std::isfinite(d)) return q;
  for (int i = 0; i < dimension_; ++i) q[i] -= d * grad[i] / norm;
  return q;
}

double Domain::diameter() const {
  double s = 0.0;
  for (int i = 0; i < dimension_; ++i) s += (upper_[i] - lower_[i]) * (upper_[i] - lower_[i]);
  return std::sqrt(s);
}

bool lipschitz_spot_check(const Domain& domain, std::size_t pairs, std::uint64_t seed) {
  const int m = domain.dimension();
  Point a(m), b(m);
  for (std::size_t n = 0; n < pairs; ++n) {
    StreamRng rng(seed, n);
    for (int i = 0; i < m; ++i) {
      double lo = domain.lower()[i], hi = domain.upper()[i];
      if (!std::isfinite(lo) || !std::isfinite(hi)) {
        lo = -10.0;
        hi = 10.0;
      }
      // Slightly enlarged box so that exterior points are exercised too.
      const double pad = 0.1 * (hi - lo);
      a[i] = lo - pad + (hi - lo + 2.0 * pad) * rng.uniform();
      b[i] = lo - pad + (hi - lo + 2.0 * pad) * rng.uniform();
    }
    const double sa = domain.signed_distance(a), sb = domain.signed_distance(b);
    if (!std::isfinite(sa) || !std::isfinite(sb)) continue;
    if (std::abs(sa - sb) > distance(a, b) + 1e-9) return false;
  }
  return true;
}

}  // namespace meanvalue
