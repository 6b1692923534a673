#pragma once

#include "meanvalue/equation.hpp"

namespace meanvalue::specialfn {

/// Half-integer Bessel order nu, stored as 2*nu.
class BesselOrder {
 public:
  explicit BesselOrder(int twice_nu);

  static BesselOrder ball(int m) { return BesselOrder(m); }        // nu = m/2
  static BesselOrder sphere(int m) { return BesselOrder(m - 2); }  // nu = (m-2)/2

  int twice() const { return twice_nu_; }
  double value() const { return 0.5 * twice_nu_; }

 private:
  int twice_nu_;
};

/// Largest argument accepted by the J-type functions. Beyond it the alternating
/// series loses too much to cancellation.
inline constexpr double kMaxJArgument = 30.0;

/// Gamma(nu+1) I_nu(t) / (t/2)^nu, summed as
///   sum_k (t^2/4)^k / (k! (nu+1)(nu+2)...(nu+k)).
/// All terms are positive, so plain double accumulation is accurate.
/// Throws std::domain_error for t < 0 or NaN, std::overflow_error when the
/// value leaves the double range.
double normalized_bessel_i(BesselOrder nu, double t);

/// Gamma(nu+1) J_nu(t) / (t/2)^nu. The alternating series is evaluated in
/// double-double arithmetic. Throws std::domain_error for t < 0 or NaN and
/// std::range_error for t > kMaxJArgument.
double normalized_bessel_j(BesselOrder nu, double t);

/// The same series with the leading 1 removed, i.e. f(t) - 1 without the
/// cancellation that subtracting 1 afterwards would cause at small t.
double normalized_bessel_i_excess(BesselOrder nu, double t);
double normalized_bessel_j_excess(BesselOrder nu, double t);

/// Mean value coefficient a(t) with M(u, r) = a(t) u(x), t = mu*r or lambda*r.
///   Panharmonic  Ball -> i~_{m/2}    Sphere -> i~_{(m-2)/2}
///   Metaharmonic Ball -> j~_{m/2}    Sphere -> j~_{(m-2)/2}
///   Harmonic     -> 1
/// Only the tag of `kind` is used. Throws std::domain_error for m < 2.
double mean_coefficient(const EquationKind& kind, Geometry geometry, int m, double t);

/// a(t) - 1, accurate at small t.
double mean_coefficient_excess(const EquationKind& kind, Geometry geometry, int m, double t);

/// lim_{t->0} (a(t) - 1) / t^2: +-1/(2(m+2)) for balls, +-1/(2m) for spheres,
/// positive for panharmonic, negative for metaharmonic, 0 for harmonic.
double coefficient_defect_limit(const EquationKind& kind, Geometry geometry, int m);

}  // namespace meanvalue::specialfn
