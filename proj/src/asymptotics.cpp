#include "meanvalue/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "meanvalue/specialfn.hpp"

namespace meanvalue::asymptotics {

std::string_view to_string(DefectGeometry g) {
  switch (g) {
    case DefectGeometry::Ball: return "ball";
    case DefectGeometry::Sphere: return "sphere";
    case DefectGeometry::Mixed: return "mixed";
  }
  return "unknown";
}

DefectGeometry parse_defect_geometry(std::string_view text) {
  if (text == "ball") return DefectGeometry::Ball;
  if (text == "sphere") return DefectGeometry::Sphere;
  if (text == "mixed") return DefectGeometry::Mixed;
  throw std::invalid_argument("unknown geometry '" + std::string(text) + "'");
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Harmonic: return "harmonic";
    case Verdict::Metaharmonic: return "metaharmonic";
    case Verdict::Panharmonic: return "panharmonic";
    case Verdict::Unknown: break;
  }
  return "unknown";
}

std::string_view to_string(ClassificationStatus s) {
  switch (s) {
    case ClassificationStatus::Ok: return "ok";
    case ClassificationStatus::DegeneratePoint: return "degenerate_point";
    case ClassificationStatus::InconsistentGeometries: return "inconsistent_geometries";
    case ClassificationStatus::InconsistentPoints: return "inconsistent_points";
  }
  return "unknown";
}

std::optional<EquationKind> Classification::kind() const {
  switch (verdict) {
    case Verdict::Harmonic: return EquationKind::harmonic();
    case Verdict::Metaharmonic: return EquationKind::metaharmonic(parameter);
    case Verdict::Panharmonic: return EquationKind::panharmonic(parameter);
    case Verdict::Unknown: break;
  }
  return std::nullopt;
}

std::vector<double> geometric_radii(double largest, double ratio, int count) {
  if (!(largest > 0.0)) throw std::invalid_argument("largest radius must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("radius ratio must lie in (0, 1)");
  if (count < 1) throw std::invalid_argument("radius count must be >= 1");
  std::vector<double> radii(count);
  double r = largest;
  for (double& v : radii) {
    v = r;
    r *= ratio;
  }
  return radii;
}

std::vector<double> default_radii(const ScalarField& u, std::span<const double> x, int count, double cap) {
  const double dist = u.domain.boundary_distance(x);
  if (!(dist > 0.0)) throw std::invalid_argument("point lies outside the field's domain");
  return geometric_radii(std::min(cap, 0.4 * dist), 0.5, count);
}

namespace {

int dimension_of(const ScalarField& u, std::span<const double> x) {
  if (static_cast<int>(x.size()) != u.dimension)
    throw std::invalid_argument("point has " + std::to_string(x.size()) + " coordinates, field dimension is " +
                                std::to_string(u.dimension));
  return u.dimension;
}

void check_radii(const ScalarField& u, std::span<const double> x, std::span<const double> radii) {
  if (radii.empty()) throw std::invalid_argument("no radii given");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) throw std::invalid_argument("radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1]))
      throw std::invalid_argument("radii must be strictly decreasing");
  }
  if (!is_admissible(Ball(Point(x.begin(), x.end()), radii.front()), u.domain))
    throw std::invalid_argument("radius " + std::to_string(radii.front()) +
                                " is not admissible at the given point");
}

struct Limits {
  double ball = 0.0;
  double sphere = 0.0;
};

Limits both_limits(const ScalarField& u, std::span<const double> x, std::span<const double> radii,
                   const QuadratureConfig& cfg) {
  return {extrapolate_limit(defect_sequence(u, x, DefectGeometry::Ball, radii, cfg)).limit_value,
          extrapolate_limit(defect_sequence(u, x, DefectGeometry::Sphere, radii, cfg)).limit_value};
}

}  // namespace

DefectEstimate defect_sequence(const ScalarField& u, std::span<const double> x, DefectGeometry geometry,
                               std::span<const double> radii, const QuadratureConfig& cfg) {
  dimension_of(u, x);
  check_radii(u, x, radii);
  DefectEstimate d;
  d.geometry = geometry;
  d.point.assign(x.begin(), x.end());
  d.center_value = u(x);
  d.radii.assign(radii.begin(), radii.end());
  for (double r : radii) {
    const Ball ball(d.point, r);
    double diff = 0.0;
    switch (geometry) {
      case DefectGeometry::Ball: diff = ball_mean(u, ball, cfg).value - d.center_value; break;
      case DefectGeometry::Sphere: diff = sphere_mean(u, ball, cfg).value - d.center_value; break;
      case DefectGeometry::Mixed: diff = ball_mean(u, ball, cfg).value - sphere_mean(u, ball, cfg).value; break;
    }
    d.differences.push_back(diff);
    d.defects.push_back(diff / (r * r));
  }
  return d;
}

DefectEstimate extrapolate_limit(DefectEstimate d) {
  const std::size_t n = d.defects.size();
  if (n < 3 || d.radii.size() != n) throw std::invalid_argument("extrapolation needs at least 3 radii");

  // Neville's scheme for the interpolating polynomial in h = r^2, at h = 0.
  std::vector<double> h(n), table(d.defects);
  for (std::size_t i = 0; i < n; ++i) h[i] = d.radii[i] * d.radii[i];
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = n - 1; i >= k; --i)
      table[i] = (h[i - k] * table[i] - h[i] * table[i - 1]) / (h[i - k] - h[i]);
  d.limit_value = table[n - 1];

  const double d0 = d.defects[n - 3], d1 = d.defects[n - 2], d2 = d.defects[n - 1];
  const double delta1 = d0 - d1, delta2 = d1 - d2;
  const double scale = std::max({1.0, std::abs(d0), std::abs(d1), std::abs(d2)});
  constexpr double kNoise = 1e-10;
  d.saturated = std::abs(delta1) <= kNoise * scale && std::abs(delta2) <= kNoise * scale;
  if (d.saturated) {
    d.convergence_order = std::numeric_limits<double>::infinity();
  } else {
    const double log_ratio = 0.5 * std::log(d.radii[n - 3] / d.radii[n - 1]);
    d.convergence_order = std::log(std::abs(delta1) / std::abs(delta2)) / log_ratio;
  }
  d.extrapolated = true;
  return d;
}

double laplacian_estimate(const ScalarField& u, std::span<const double> x, Geometry geometry,
                          std::span<const double> radii, const QuadratureConfig& cfg) {
  const int m = dimension_of(u, x);
  const DefectGeometry g = geometry == Geometry::Ball ? DefectGeometry::Ball : DefectGeometry::Sphere;
  const double limit = extrapolate_limit(defect_sequence(u, x, g, radii, cfg)).limit_value;
  return geometry == Geometry::Ball ? 2.0 * (m + 2) * limit : 2.0 * m * limit;
}

Classification classify_point(const ScalarField& u, std::span<const double> x, std::span<const double> radii,
                              double tol, const QuadratureConfig& cfg) {
  if (!(tol > 0.0)) throw std::invalid_argument("classification tolerance must be positive");
  const int m = dimension_of(u, x);
  const Limits limits = both_limits(u, x, radii, cfg);

  Classification c;
  c.point.assign(x.begin(), x.end());
  c.center_value = u(x);
  c.ball_limit = limits.ball;
  c.sphere_limit = limits.sphere;
  const double largest = std::max(std::abs(limits.ball), std::abs(limits.sphere));
  const double lap_ball = 2.0 * (m + 2) * limits.ball;
  const double lap_sphere = 2.0 * m * limits.sphere;
  c.confidence = std::abs(lap_ball - lap_sphere) / std::max(largest, tol);

  if (largest <= tol) {
    c.verdict = Verdict::Harmonic;
    return c;
  }
  if (std::abs(c.center_value) <= tol) {
    c.status = ClassificationStatus::DegeneratePoint;
    return c;
  }
  c.kappa_ball = lap_ball / c.center_value;
  c.kappa_sphere = lap_sphere / c.center_value;
  if (std::abs(c.kappa_ball - c.kappa_sphere) > 10.0 * tol * std::max(1.0, std::abs(c.kappa_ball))) {
    c.status = ClassificationStatus::InconsistentGeometries;
    return c;
  }
  c.verdict = c.kappa_ball > 0.0 ? Verdict::Panharmonic : Verdict::Metaharmonic;
  c.parameter = std::sqrt(std::abs(c.kappa_ball));
  return c;
}

FieldClassification classify_field(const ScalarField& u, std::span<const Point> points, double tol,
                                   double parameter_rtol, const QuadratureConfig& cfg,
                                   std::span<const double> radii) {
  if (points.empty()) throw std::invalid_argument("no points to classify");
  FieldClassification result;
  for (const Point& p : points) {
    if (radii.empty())
      result.points.push_back(classify_point(u, p, default_radii(u, p), tol, cfg));
    else
      result.points.push_back(classify_point(u, p, radii, tol, cfg));
  }

  Classification summary = result.points.front();
  for (const Classification& c : result.points)
    summary.confidence = std::max(summary.confidence, c.confidence);
  for (const Classification& c : result.points) {
    if (!c.definite()) {
      summary = c;
      result.summary = summary;
      return result;
    }
  }
  double lo = summary.parameter, hi = summary.parameter, sum = 0.0;
  bool consistent = true;
  for (const Classification& c : result.points) {
    consistent = consistent && c.verdict == summary.verdict;
    lo = std::min(lo, c.parameter);
    hi = std::max(hi, c.parameter);
    sum += c.parameter;
  }
  if (consistent && summary.verdict != Verdict::Harmonic)
    consistent = hi - lo <= parameter_rtol * hi;
  if (!consistent) {
    summary.verdict = Verdict::Unknown;
    summary.status = ClassificationStatus::InconsistentPoints;
    summary.parameter = 0.0;
  } else {
    summary.parameter = sum / static_cast<double>(result.points.size());
  }
  result.summary = summary;
  return result;
}

double mixed_defect_limit(const ScalarField& u, std::span<const double> x, std::span<const double> radii,
                          const QuadratureConfig& cfg) {
  return extrapolate_limit(defect_sequence(u, x, DefectGeometry::Mixed, radii, cfg)).limit_value;
}

double shared_ratio_check(const ScalarField& u, std::span<const double> x, std::span<const double> radii,
                          const QuadratureConfig& cfg) {
  const int m = dimension_of(u, x);
  const Limits limits = both_limits(u, x, radii, cfg);
  return std::abs((m + 2) * limits.ball - m * limits.sphere);
}

SelfReferentialResiduals self_referential_check(const ScalarField& u, const EquationKind& kind,
                                                std::span<const double> x, double r,
                                                const QuadratureConfig& cfg) {
  const int m = dimension_of(u, x);
  const Point center(x.begin(), x.end());
  const Ball ball(center, r);
  if (!is_admissible(ball, u.domain))
    throw std::invalid_argument("radius " + std::to_string(r) + " is not admissible at the given point");

  const std::vector<double> radii = default_radii(u, x);
  const Limits limits = both_limits(u, x, radii, cfg);

  const double c = kind.signed_coefficient();
  double rhs_ball = 0.0, rhs_sphere = 0.0;
  if (kind.tag() != EquationKind::Tag::Harmonic) {
    const double t = std::abs(kind.parameter()) * r;
    const double a_ball = specialfn::mean_coefficient(kind, Geometry::Ball, m, t);
    const double a_sphere = specialfn::mean_coefficient(kind, Geometry::Sphere, m, t);
    rhs_ball = c * ball_mean(u, ball, cfg).value / (2.0 * (m + 2) * a_ball);
    rhs_sphere = c * sphere_mean(u, ball, cfg).value / (2.0 * m * a_sphere);
  }
  return {std::abs(limits.ball - rhs_ball), std::abs(limits.sphere - rhs_sphere)};
}

}  // namespace meanvalue::asymptotics
