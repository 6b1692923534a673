#include "meanvalue/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace meanvalue::specialfn {

namespace {

constexpr double kRelativeStop = 1e-17;
constexpr int kMaxTerms = 200;

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

DoubleDouble add(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = two_sum(a.hi, b.hi);
  const DoubleDouble t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

DoubleDouble mul(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

DoubleDouble div(DoubleDouble a, double b) {
  const double q1 = a.hi / b;
  const DoubleDouble p = two_prod(q1, b);
  DoubleDouble s = two_sum(a.hi, -p.hi);
  s.lo -= p.lo;
  s.lo += a.lo;
  const double q2 = (s.hi + s.lo) / b;
  return quick_two_sum(q1, q2);
}

void check_argument(double t) {
  if (std::isnan(t) || t < 0.0)
    throw std::domain_error("Bessel series argument must be a nonnegative number");
  if (std::isinf(t)) throw std::overflow_error("Bessel series argument is infinite");
}

// k (nu + k) expressed with 2nu; exact in double for every k we reach.
double term_divisor(int k, int twice_nu) { return 0.5 * k * (2.0 * k + twice_nu); }

// sum_{k >= first} (t^2/4)^k / (k! (nu+1)_k) for the positive series.
double sum_i_series(BesselOrder nu, double t, int first) {
  const double x = 0.25 * t * t;
  // The terms peak near k = t/2; past k = t they shrink at least 4x per step.
  const int cap = std::max(kMaxTerms, static_cast<int>(2.0 * t) + 64);
  double term = 1.0;
  double sum = first == 0 ? 1.0 : 0.0;
  for (int k = 1; k <= cap; ++k) {
    term *= x / term_divisor(k, nu.twice());
    if (k >= first) sum += term;
    if (!std::isfinite(sum))
      throw std::overflow_error("normalized Bessel I series overflows at t = " + std::to_string(t));
    if (term <= kRelativeStop * sum || term == 0.0) return sum;
  }
  throw std::range_error("normalized Bessel I series did not converge at t = " + std::to_string(t));
}

// Alternating counterpart, accumulated in double-double. The stop rule also
// accepts a term below the rounding level of the largest term, which matters
// when the sum itself sits at a zero of J.
double sum_j_series(BesselOrder nu, double t, int first) {
  if (t > kMaxJArgument)
    throw std::range_error("normalized Bessel J series is supported for t <= " +
                           std::to_string(kMaxJArgument));
  DoubleDouble x = two_prod(t, t);
  x.hi *= 0.25;
  x.lo *= 0.25;
  DoubleDouble term{1.0, 0.0};
  DoubleDouble sum = first == 0 ? DoubleDouble{1.0, 0.0} : DoubleDouble{};
  double largest = first == 0 ? 1.0 : 0.0;
  for (int k = 1; k <= kMaxTerms; ++k) {
    term = div(mul(term, x), -term_divisor(k, nu.twice()));
    if (k >= first) {
      sum = add(sum, term);
      largest = std::max(largest, std::abs(term.hi));
    }
    const double mag = std::abs(term.hi);
    if (k >= first && (mag <= kRelativeStop * std::abs(sum.hi) || mag <= 1e-33 * largest))
      return sum.hi + sum.lo;
  }
  throw std::range_error("normalized Bessel J series did not converge at t = " + std::to_string(t));
}

void check_dimension(int m) {
  if (m < 2) throw std::domain_error("dimension must be >= 2");
}

BesselOrder order_for(Geometry g, int m) {
  return g == Geometry::Ball ? BesselOrder::ball(m) : BesselOrder::sphere(m);
}

}  // namespace

BesselOrder::BesselOrder(int twice_nu) : twice_nu_(twice_nu) {
  if (twice_nu < 0) throw std::domain_error("Bessel order must be nonnegative");
}

double normalized_bessel_i(BesselOrder nu, double t) {
  check_argument(t);
  return sum_i_series(nu, t, 0);
}

double normalized_bessel_j(BesselOrder nu, double t) {
  check_argument(t);
  return sum_j_series(nu, t, 0);
}

double normalized_bessel_i_excess(BesselOrder nu, double t) {
  check_argument(t);
  if (t == 0.0) return 0.0;
  return sum_i_series(nu, t, 1);
}

double normalized_bessel_j_excess(BesselOrder nu, double t) {
  check_argument(t);
  if (t == 0.0) return 0.0;
  return sum_j_series(nu, t, 1);
}

double mean_coefficient(const EquationKind& kind, Geometry geometry, int m, double t) {
  check_dimension(m);
  switch (kind.tag()) {
    case EquationKind::Tag::Panharmonic: return normalized_bessel_i(order_for(geometry, m), t);
    case EquationKind::Tag::Metaharmonic: return normalized_bessel_j(order_for(geometry, m), t);
    case EquationKind::Tag::Harmonic: break;
  }
  return 1.0;
}

double mean_coefficient_excess(const EquationKind& kind, Geometry geometry, int m, double t) {
  check_dimension(m);
  switch (kind.tag()) {
    case EquationKind::Tag::Panharmonic:
      return normalized_bessel_i_excess(order_for(geometry, m), t);
    case EquationKind::Tag::Metaharmonic:
      return normalized_bessel_j_excess(order_for(geometry, m), t);
    case EquationKind::Tag::Harmonic: break;
  }
  return 0.0;
}

double coefficient_defect_limit(const EquationKind& kind, Geometry geometry, int m) {
  check_dimension(m);
  const double magnitude = geometry == Geometry::Ball ? 1.0 / (2.0 * (m + 2)) : 1.0 / (2.0 * m);
  switch (kind.tag()) {
    case EquationKind::Tag::Panharmonic: return magnitude;
    case EquationKind::Tag::Metaharmonic: return -magnitude;
    case EquationKind::Tag::Harmonic: break;
  }
  return 0.0;
}

}  // namespace meanvalue::specialfn
