#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "meanvalue/field.hpp"
#include "meanvalue/geometry.hpp"

namespace meanvalue::asymptotics {

enum class DefectGeometry { Ball, Sphere, Mixed };
std::string_view to_string(DefectGeometry g);
DefectGeometry parse_defect_geometry(std::string_view text);

/// Mean value defects at a sequence of radii:
///   Ball    (M_ball(u, r) - u(x)) / r^2
///   Sphere  (M_sphere(u, r) - u(x)) / r^2
///   Mixed   (M_ball(u, r) - M_sphere(u, r)) / r^2
struct DefectEstimate {
  DefectGeometry geometry = DefectGeometry::Ball;
  Point point;
  double center_value = 0.0;
  std::vector<double> radii;
  // Numerators before division by r^2.
  std::vector<double> differences;
  std::vector<double> defects;

  // Filled in by extrapolate_limit.
  bool extrapolated = false;
  double limit_value = 0.0;
  double convergence_order = 0.0;
  // Successive defects agree to rounding; the order is then meaningless.
  bool saturated = false;
};

/// `count` radii largest, largest*ratio, ...
std::vector<double> geometric_radii(double largest, double ratio, int count);

/// Default schedule: largest radius 0.4 * distance of x to the field's domain
/// boundary (capped at `cap`), ratio 1/2.
std::vector<double> default_radii(const ScalarField& u, std::span<const double> x, int count = 4,
                                  double cap = 0.2);

/// Throws std::invalid_argument for radii that are empty, non-positive, not
/// strictly decreasing, or inadmissible for the field's domain.
DefectEstimate defect_sequence(const ScalarField& u, std::span<const double> x,
                               DefectGeometry geometry, std::span<const double> radii,
                               const QuadratureConfig& cfg = {});

/// Polynomial extrapolation in r^2 to r = 0 (Richardson for geometric radii).
/// The order is the log-ratio slope of the last three defects. Needs at
/// least 3 radii.
DefectEstimate extrapolate_limit(DefectEstimate d);

/// 2(m+2) L (Ball) or 2m L (Sphere) with L the extrapolated defect limit.
double laplacian_estimate(const ScalarField& u, std::span<const double> x, Geometry geometry,
                          std::span<const double> radii, const QuadratureConfig& cfg = {});

enum class Verdict { Harmonic, Metaharmonic, Panharmonic, Unknown };
std::string_view to_string(Verdict v);

enum class ClassificationStatus { Ok, DegeneratePoint, InconsistentGeometries, InconsistentPoints };
std::string_view to_string(ClassificationStatus s);

struct Classification {
  Verdict verdict = Verdict::Unknown;
  ClassificationStatus status = ClassificationStatus::Ok;
  // lambda or mu, nonnegative; 0 for harmonic and unknown.
  double parameter = 0.0;
  // |2(m+2) L_ball - 2m L_sphere| / max(|L_ball|, |L_sphere|, tol)
  double confidence = 0.0;
  Point point;
  double center_value = 0.0;
  double ball_limit = 0.0;
  double sphere_limit = 0.0;
  // 2(m+2) L_ball / u(x) and 2m L_sphere / u(x); 0 when not computed.
  double kappa_ball = 0.0;
  double kappa_sphere = 0.0;

  bool definite() const { return verdict != Verdict::Unknown; }
  std::optional<EquationKind> kind() const;
};

/// Pointwise classification from the extrapolated ball and sphere limits.
/// Harmonic if both limits are within tol of 0; otherwise kappa = 2(m+2)
/// L_ball / u(x), which must match 2m L_sphere / u(x) within
/// 10 tol max(1, |kappa|); kappa > 0 is panharmonic with mu = sqrt(kappa),
/// kappa < 0 metaharmonic with lambda = sqrt(-kappa). |u(x)| <= tol yields
/// Unknown with status DegeneratePoint.
Classification classify_point(const ScalarField& u, std::span<const double> x,
                              std::span<const double> radii, double tol = 1e-6,
                              const QuadratureConfig& cfg = {});

struct FieldClassification {
  Classification summary;
  std::vector<Classification> points;
};

/// Classifies at every point and requires a single kind and parameter
/// (relative spread <= parameter_rtol) across them; otherwise the summary is
/// Unknown / InconsistentPoints. Empty `radii` selects default_radii per point.
FieldClassification classify_field(const ScalarField& u, std::span<const Point> points,
                                   double tol = 1e-6, double parameter_rtol = 5e-3,
                                   const QuadratureConfig& cfg = {},
                                   std::span<const double> radii = {});

/// Extrapolated limit of (M_ball - M_sphere) / r^2; -laplacian(u)/(m(m+2))
/// for C^2 fields, 0 for harmonic ones.
double mixed_defect_limit(const ScalarField& u, std::span<const double> x,
                          std::span<const double> radii, const QuadratureConfig& cfg = {});

/// |(m+2) L_ball - m L_sphere|. Vanishes for every C^2 field, so it does not
/// certify a solution on its own.
double shared_ratio_check(const ScalarField& u, std::span<const double> x,
                          std::span<const double> radii, const QuadratureConfig& cfg = {});

struct SelfReferentialResiduals {
  double ball = 0.0;
  double sphere = 0.0;
};

/// At the fixed radius r:
///   |L_ball   - c M_ball(u, r)   / (2(m+2) a_ball(t))|
///   |L_sphere - c M_sphere(u, r) / (2m a_sphere(t))|
/// with c = mu^2 (t = mu r) or -lambda^2 (t = lambda r), both 0 for harmonic.
/// The limits use the default radii schedule at x.
SelfReferentialResiduals self_referential_check(const ScalarField& u, const EquationKind& kind,
                                                std::span<const double> x, double r,
                                                const QuadratureConfig& cfg = {});

}  // namespace meanvalue::asymptotics
