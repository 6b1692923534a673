#include "meanvalue/testbank.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "meanvalue/specialfn.hpp"

namespace meanvalue::testbank {

namespace {

using Evaluator = ScalarField::Evaluator;

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double diagonal(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / std::sqrt(static_cast<double>(x.size()));
}

double distance_to(std::span<const double> x, const Point& pole) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - pole[i]) * (x[i] - pole[i]);
  return std::sqrt(s);
}

// Below this argument the radial closed forms switch to the series.
constexpr double kSeriesBranch = 1e-6;

double sinh_ratio(double t) {
  return t < kSeriesBranch ? specialfn::normalized_bessel_i(specialfn::BesselOrder(1), t)
                           : std::sinh(t) / t;
}

double sin_ratio(double t) {
  return t < kSeriesBranch ? specialfn::normalized_bessel_j(specialfn::BesselOrder(1), t)
                           : std::sin(t) / t;
}

ScalarField make(int m, std::string label, Evaluator value, Evaluator laplacian,
                 std::optional<EquationKind> kind) {
  ScalarField f;
  f.dimension = m;
  f.label = std::move(label);
  f.value = std::move(value);
  f.laplacian = std::move(laplacian);
  f.kind = kind;
  f.domain = test_region(m);
  return f;
}

// Solutions of laplacian(u) = c u get their exact Laplacian from the value.
ScalarField solution(int m, std::string label, Evaluator value, EquationKind kind) {
  const double c = kind.signed_coefficient();
  Evaluator lap = [value, c](std::span<const double> x) { return c * value(x); };
  return make(m, std::move(label), std::move(value), std::move(lap), kind);
}

bool radial_family(std::string_view label) {
  return label == "radial_i0" || label == "radial_sinhc" || label == "radial_j0" ||
         label == "radial_sinc" || label == "log_kernel" || label == "newton_kernel";
}

}  // namespace

Domain test_region(int m) { return Domain::ball(Point(m, 0.0), 1.0); }

ScalarField constant_field(int m, double value) {
  return make(
      m, "const", [value](std::span<const double>) { return value; },
      [](std::span<const double>) { return 0.0; }, EquationKind::harmonic());
}

std::vector<ScalarField> catalogue(int m, CatalogueParams params) {
  if (m < 2) throw std::invalid_argument("dimension must be >= 2");
  const double mu = params.mu;
  const double lambda = params.lambda;
  const EquationKind pan = EquationKind::panharmonic(mu);
  const EquationKind meta = EquationKind::metaharmonic(lambda);
  const EquationKind har = EquationKind::harmonic();

  std::vector<ScalarField> fields;

  // Panharmonic.
  fields.push_back(solution(m, "exp_mu_x1", [mu](std::span<const double> x) { return std::exp(mu * x[0]); }, pan));
  fields.push_back(solution(
      m, "exp_mu_diag", [mu](std::span<const double> x) { return std::exp(mu * diagonal(x)); }, pan));
  {
    const double a = std::sqrt(mu * mu + 1.0);
    fields.push_back(solution(
        m, "exp_cos_mix", [a](std::span<const double> x) { return std::exp(a * x[0]) * std::cos(x[1]); },
        pan));
  }
  fields.push_back(solution(
      m, "exp_x1_x2", [](std::span<const double> x) { return std::exp(x[0]) * x[1]; },
      EquationKind::panharmonic(1.0)));
  if (m == 2)
    fields.push_back(solution(
        m, "radial_i0",
        [mu](std::span<const double> x) {
          return specialfn::normalized_bessel_i(specialfn::BesselOrder(0), std::abs(mu) * norm(x));
        },
        pan));
  if (m == 3)
    fields.push_back(solution(
        m, "radial_sinhc", [mu](std::span<const double> x) { return sinh_ratio(std::abs(mu) * norm(x)); },
        pan));

  // Metaharmonic.
  fields.push_back(solution(
      m, "cos_lambda_x1", [lambda](std::span<const double> x) { return std::cos(lambda * x[0]); }, meta));
  fields.push_back(solution(
      m, "sin_lambda_diag", [lambda](std::span<const double> x) { return std::sin(lambda * diagonal(x)); },
      meta));
  {
    const double a = std::sqrt(lambda * lambda + 1.0);
    fields.push_back(solution(
        m, "cos_exp_mix", [a](std::span<const double> x) { return std::cos(a * x[0]) * std::exp(x[1]); },
        meta));
  }
  if (m == 2)
    fields.push_back(solution(
        m, "radial_j0",
        [lambda](std::span<const double> x) {
          return specialfn::normalized_bessel_j(specialfn::BesselOrder(0), std::abs(lambda) * norm(x));
        },
        meta));
  if (m == 3)
    fields.push_back(solution(
        m, "radial_sinc", [lambda](std::span<const double> x) { return sin_ratio(std::abs(lambda) * norm(x)); },
        meta));

  // Harmonic.
  fields.push_back(solution(m, "one", [](std::span<const double>) { return 1.0; }, har));
  fields.push_back(solution(m, "x1", [](std::span<const double> x) { return x[0]; }, har));
  fields.push_back(solution(m, "x1x2", [](std::span<const double> x) { return x[0] * x[1]; }, har));
  fields.push_back(solution(
      m, "harmonic_saddle", [](std::span<const double> x) { return x[0] * x[0] - x[1] * x[1]; }, har));
  if (m == 2) {
    const Point pole{2.0, 0.0};
    fields.push_back(solution(
        m, "log_kernel", [pole](std::span<const double> x) { return std::log(distance_to(x, pole)); }, har));
  }
  if (m == 3) {
    const Point pole{2.0, 0.0, 0.0};
    fields.push_back(solution(
        m, "newton_kernel", [pole](std::span<const double> x) { return 1.0 / distance_to(x, pole); }, har));
  }

  // Negative controls.
  fields.push_back(make(
      m, "sq_norm",
      [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
      },
      [m](std::span<const double>) { return 2.0 * m; }, std::nullopt));
  fields.push_back(make(
      m, "exp_x1_sq_x2", [](std::span<const double> x) { return std::exp(x[0]) * (1.0 + x[1] * x[1]); },
      [](std::span<const double> x) { return std::exp(x[0]) * (3.0 + x[1] * x[1]); }, std::nullopt));
  fields.push_back(make(
      m, "exp_2mu_x1", [mu](std::span<const double> x) { return std::exp(2.0 * mu * x[0]); },
      [mu](std::span<const double> x) { return 4.0 * mu * mu * std::exp(2.0 * mu * x[0]); }, std::nullopt));

  return fields;
}

ScalarField find_field(std::string_view label, int m, CatalogueParams params) {
  if (radial_family(label) && m != 2 && m != 3)
    throw std::invalid_argument("field '" + std::string(label) + "' exists only for m in {2, 3}");
  for (ScalarField& f : catalogue(m, params))
    if (f.label == label) return f;
  throw std::invalid_argument("unknown field '" + std::string(label) + "' for m = " + std::to_string(m));
}

std::vector<Point> interior_points(int m) {
  if (m < 2) throw std::invalid_argument("dimension must be >= 2");
  if (m == 2) return {{0.1, 0.2}, {0.3, -0.1}, {-0.2, 0.25}, {-0.15, -0.3}, {0.35, 0.3}};
  std::vector<Point> points{{0.1, 0.2, 0.05}, {0.3, -0.1, 0.2}, {-0.2, 0.25, -0.1},
                            {-0.15, -0.3, 0.25}, {0.35, 0.3, -0.2}};
  for (Point& p : points)
    for (int k = 3; k < m; ++k) p.push_back(k % 2 == 0 ? 0.05 : -0.05);
  return points;
}

double finite_difference_laplacian(const ScalarField& u, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const double center = u(x);
  Point y(x.begin(), x.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = x[i] + h;
    const double up = u(y);
    y[i] = x[i] - h;
    const double down = u(y);
    y[i] = x[i];
    sum += (up - 2.0 * center + down) / (h * h);
  }
  return sum;
}

double residual(const ScalarField& u, const EquationKind& kind, std::span<const double> x, double h) {
  const double lap = u.has_exact_laplacian() ? u.laplacian(x) : finite_difference_laplacian(u, x, h);
  return lap - kind.signed_coefficient() * u(x);
}

}  // namespace meanvalue::testbank
