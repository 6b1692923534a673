#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "meanvalue/geometry.hpp"
#include "meanvalue/quadrature.hpp"
#include "meanvalue/rng.hpp"
#include "meanvalue/specialfn.hpp"
#include "meanvalue/testbank.hpp"

using namespace meanvalue;

namespace {

double coefficient_of(const ScalarField& u, Geometry g, double r) {
  const EquationKind& k = *u.kind;
  return specialfn::mean_coefficient(k, g, u.dimension, k.parameter() == 0.0 ? 0.0 : std::abs(k.parameter()) * r);
}

}  // namespace

TEST_CASE("ball volumes and sphere areas") {
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-15));
  CHECK(ball_volume(4, 2.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0 * 16.0).epsilon(1e-14));
  CHECK(sphere_area(3, 2.0) == doctest::Approx(16.0 * std::numbers::pi).epsilon(1e-15));
  for (int m = 2; m <= 7; ++m) CHECK(sphere_area(m, 1.5) == doctest::Approx(m * ball_volume(m, 1.5) / 1.5));
}

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
  for (int n : {4, 8, 32, 64}) {
    const quadrature::Rule rule = quadrature::gauss_legendre(n);
    double sum_w = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum_w += rule.weights[i];
      moment += rule.weights[i] * std::pow(rule.nodes[i], 2 * n - 2);
    }
    CHECK(sum_w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(moment == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
  }
  const quadrature::Rule shifted = quadrature::gauss_legendre(16, 0.0, 2.0);
  double cubic = 0.0;
  for (std::size_t i = 0; i < shifted.nodes.size(); ++i) cubic += shifted.weights[i] * std::pow(shifted.nodes[i], 3);
  CHECK(cubic == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1000, 0.1);
  CHECK(quadrature::pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(quadrature::pairwise_sum({}) == 0.0);
}

TEST_CASE("admissibility of balls") {
  const Domain unit = Domain::ball({0.0, 0.0}, 1.0);
  CHECK(is_admissible(Ball({0.0, 0.0}, 0.5), unit));
  CHECK(is_admissible(Ball({0.5, 0.0}, 0.49), unit));
  CHECK_FALSE(is_admissible(Ball({0.5, 0.0}, 0.5), unit));
  CHECK_FALSE(is_admissible(Ball({2.0, 0.0}, 0.1), unit));
  CHECK_THROWS_AS(is_admissible(Ball({0.0, 0.0, 0.0}, 0.1), unit), std::invalid_argument);
  CHECK(is_admissible(Ball({1e6, 0.0}, 1e3), Domain::whole_space(2)));
}

TEST_CASE("domains: signed distance, projection, Lipschitz property") {
  const Domain box = Domain::box({-1.0, -2.0}, {1.0, 2.0});
  CHECK(box.signed_distance(std::vector{0.0, 0.0}) == doctest::Approx(-1.0));
  CHECK(box.signed_distance(std::vector{2.0, 3.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(box.boundary_distance(std::vector{0.5, 1.9}) == doctest::Approx(0.1));
  const Point q = box.project_to_boundary(std::vector{0.9, 0.0});
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(q[1] == doctest::Approx(0.0));

  const Domain shell = Domain::shell({0.0, 0.0, 0.0}, 1.0, {0.0, 0.0, 0.0}, 0.3);
  CHECK(shell.contains(std::vector{0.5, 0.0, 0.0}));
  CHECK_FALSE(shell.contains(std::vector{0.1, 0.0, 0.0}));
  CHECK(shell.boundary_distance(std::vector{0.5, 0.0, 0.0}) == doctest::Approx(0.2));
  const Point inner = shell.project_to_boundary(std::vector{0.4, 0.0, 0.0});
  CHECK(inner[0] == doctest::Approx(0.3).epsilon(1e-6));

  for (const Domain& d : {box, shell, Domain::ball({0.5, 0.5}, 2.0), Domain::whole_space(3)})
    CHECK(lipschitz_spot_check(d, 2000, 7));
  CHECK_THROWS(Domain::ball({0.0}, -1.0));
  CHECK_THROWS(box.signed_distance(std::vector{0.0, 0.0, 0.0}));

  // A signed distance scaled by 2 is not 1-Lipschitz.
  const Domain bad(
      2, [](std::span<const double> p) { return 2.0 * (std::hypot(p[0], p[1]) - 1.0); }, {-1.0, -1.0}, {1.0, 1.0});
  CHECK_FALSE(lipschitz_spot_check(bad, 2000, 7));
}

TEST_CASE("sphere and ball means reproduce the mean value coefficients") {
  for (int m : {2, 3}) {
    for (const ScalarField& u : testbank::catalogue(m)) {
      if (!u.kind) continue;
      for (const Point& x : testbank::interior_points(m)) {
        const double r = 0.3;
        if (!is_admissible(Ball(x, r), u.domain)) continue;
        const double ux = u(x);
        const double s = sphere_mean(u, Ball(x, r)).value;
        const double b = ball_mean(u, Ball(x, r)).value;
        INFO(u.label, " m=", m);
        CHECK(std::abs(s - coefficient_of(u, Geometry::Sphere, r) * ux) <= 1e-12 * std::max(1.0, std::abs(ux)));
        CHECK(std::abs(b - coefficient_of(u, Geometry::Ball, r) * ux) <= 1e-12 * std::max(1.0, std::abs(ux)));
      }
    }
  }
}

TEST_CASE("circle mean against adaptive Gauss-Kronrod") {
  const ScalarField u = testbank::find_field("exp_x1_sq_x2", 2);
  const Point x{0.2, -0.1};
  const double r = 0.45;
  const double exact = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                           [&](double theta) {
                             const std::vector<double> y{x[0] + r * std::cos(theta), x[1] + r * std::sin(theta)};
                             return u(y);
                           },
                           0.0, 2.0 * std::numbers::pi, 10, 1e-15) /
                       (2.0 * std::numbers::pi);
  CHECK(sphere_mean(u, Ball(x, r)).value == doctest::Approx(exact).epsilon(1e-13));

  // Disk mean as an iterated integral in polar coordinates.
  const double disk = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                          [&](double s) {
                            return s * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                                           [&](double theta) {
                                             const std::vector<double> y{x[0] + s * std::cos(theta),
                                                                         x[1] + s * std::sin(theta)};
                                             return u(y);
                                           },
                                           0.0, 2.0 * std::numbers::pi, 10, 1e-15);
                          },
                          0.0, r, 10, 1e-15) /
                      (std::numbers::pi * r * r);
  CHECK(ball_mean(u, Ball(x, r)).value == doctest::Approx(disk).epsilon(1e-12));
}

TEST_CASE("means of constants are exact") {
  for (int m : {2, 3, 4, 5}) {
    const ScalarField c = testbank::constant_field(m, 2.75);
    const Ball b(Point(m, 0.1), 0.4);
    QuadratureConfig cfg;
    cfg.mc_samples = 1000;
    CHECK(sphere_mean(c, b, cfg).value == 2.75);
    CHECK(ball_mean(c, b, cfg).value == 2.75);
  }
}

TEST_CASE("serial and parallel quadrature agree bit for bit") {
  for (int m : {2, 3, 4}) {
    const ScalarField u = testbank::find_field("exp_mu_diag", m, {1.3, 2.0});
    const Ball b(Point(m, 0.05), 0.35);
    QuadratureConfig serial, parallel;
    serial.execution = Execution::Serial;
    serial.mc_samples = parallel.mc_samples = 20000;
    CHECK(sphere_mean(u, b, serial).value == sphere_mean(u, b, parallel).value);
    CHECK(ball_mean(u, b, serial).value == ball_mean(u, b, parallel).value);
  }
}

TEST_CASE("Monte Carlo means in higher dimensions") {
  const int m = 4;
  const ScalarField u = testbank::find_field("exp_mu_x1", m, {1.0, 2.0});
  const Point x(m, 0.1);
  const double r = 0.5;
  const double exact_s = specialfn::mean_coefficient(*u.kind, Geometry::Sphere, m, r) * u(x);
  const double exact_b = specialfn::mean_coefficient(*u.kind, Geometry::Ball, m, r) * u(x);
  const MeanEstimate s = sphere_mean(u, Ball(x, r));
  const MeanEstimate b = ball_mean(u, Ball(x, r));
  CHECK(s.method == MeanMethod::MonteCarlo);
  CHECK(std::abs(s.value - exact_s) <= 4.0 * s.error_bound);
  CHECK(std::abs(b.value - exact_b) <= 4.0 * b.error_bound);

  // Root-mean-square error over seeds decays like K^{-1/2}.
  std::vector<double> logk, logerr;
  for (std::size_t k : {500u, 2000u, 8000u, 32000u}) {
    double sq = 0.0;
    const int reps = 40;
    for (int rep = 0; rep < reps; ++rep) {
      QuadratureConfig cfg;
      cfg.mc_samples = k;
      cfg.seed = 1000 + rep;
      const double e = sphere_mean(u, Ball(x, r), cfg).value - exact_s;
      sq += e * e;
    }
    logk.push_back(std::log(static_cast<double>(k)));
    logerr.push_back(0.5 * std::log(sq / reps));
  }
  double mk = 0, me = 0;
  for (std::size_t i = 0; i < logk.size(); ++i) mk += logk[i] / logk.size(), me += logerr[i] / logk.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < logk.size(); ++i) num += (logk[i] - mk) * (logerr[i] - me), den += (logk[i] - mk) * (logk[i] - mk);
  CHECK(num / den == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("uniform directions are unit vectors with zero mean") {
  StreamRng rng(3, 4);
  std::vector<double> d(5), mean(5, 0.0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    uniform_direction(rng, d);
    double norm = 0.0;
    for (int j = 0; j < 5; ++j) norm += d[j] * d[j], mean[j] += d[j] / n;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-14));
  }
  for (double v : mean) CHECK(std::abs(v) < 0.03);
  // Streams are reproducible and distinct.
  StreamRng a(9, 1), b(9, 1), c(9, 2);
  const auto x = a.next_u64();
  CHECK(x == b.next_u64());
  CHECK(x != c.next_u64());
}

TEST_CASE("quadrature configuration validation and failures") {
  QuadratureConfig cfg;
  cfg.circle_points = 3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_THROWS_AS(sphere_mean(testbank::constant_field(2, 1.0), Ball({0.0, 0.0}, 0.1), cfg), std::invalid_argument);
  ScalarField nan_field = testbank::constant_field(2, 1.0);
  nan_field.value = [](std::span<const double> y) { return y[0] > 0.05 ? std::nan("") : 1.0; };
  CHECK_THROWS_AS(sphere_mean(nan_field, Ball({0.0, 0.0}, 0.1)), std::runtime_error);
}
