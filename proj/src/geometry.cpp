#include "meanvalue/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "meanvalue/quadrature.hpp"
#include "meanvalue/rng.hpp"

namespace meanvalue {

double unit_ball_volume(int m) {
  if (m < 2) throw std::domain_error("dimension must be >= 2");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / (m * std::tgamma(0.5 * m));
}

double ball_volume(int m, double radius) { return unit_ball_volume(m) * std::pow(radius, m); }

double sphere_area(int m, double radius) {
  return m * unit_ball_volume(m) * std::pow(radius, m - 1);
}

Ball::Ball(Point center, double radius) : center_(std::move(center)), radius_(radius) {
  if (center_.size() < 2) throw std::invalid_argument("dimension must be >= 2");
  if (!(radius_ > 0.0) || !std::isfinite(radius_))
    throw std::invalid_argument("ball radius must be positive and finite");
}

bool is_admissible(const Ball& ball, const Domain& domain) {
  if (ball.dimension() != domain.dimension())
    throw std::invalid_argument("ball and domain dimensions differ");
  return domain.signed_distance(ball.center()) <= -ball.radius() - 1e-12;
}

std::string_view to_string(MeanMethod method) {
  switch (method) {
    case MeanMethod::TrapezoidCircle: return "trapezoid_circle";
    case MeanMethod::GaussRadial: return "gauss_radial";
    case MeanMethod::ProductSphere3D: return "product_sphere_3d";
    case MeanMethod::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

void QuadratureConfig::validate() const {
  if (circle_points < 4 || polar_points < 4 || azimuth_points < 4 || radial_points < 4)
    throw std::invalid_argument("quadrature rule sizes must be >= 4");
  if (!(tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  if (max_doublings < 1) throw std::invalid_argument("max_doublings must be >= 1");
  if (mc_samples < 2) throw std::invalid_argument("mc_samples must be >= 2");
}

namespace {

// Points y_i = center + scale_i * direction_i with weights w_i (any positive
// normalization; means divide by the weight sum).
struct NodeSet {
  int m = 0;
  std::vector<double> offsets;  // m * count, already scaled by the radius
  std::vector<double> weights;
  std::size_t size() const { return weights.size(); }
};

NodeSet unit_sphere_nodes(int m, const QuadratureConfig& cfg, int level) {
  NodeSet set;
  set.m = m;
  if (m == 2) {
    const int n = cfg.circle_points << level;
    set.offsets.reserve(2 * n);
    for (int j = 0; j < n; ++j) {
      const double angle = 2.0 * std::numbers::pi * j / n;
      set.offsets.push_back(std::cos(angle));
      set.offsets.push_back(std::sin(angle));
    }
    set.weights.assign(n, 1.0);
    return set;
  }
  const int polar = cfg.polar_points << level;
  const int azimuth = cfg.azimuth_points << level;
  const quadrature::Rule rule = quadrature::gauss_legendre(polar);
  set.offsets.reserve(3 * polar * azimuth);
  set.weights.reserve(polar * azimuth);
  for (int i = 0; i < polar; ++i) {
    const double z = rule.nodes[i];
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < azimuth; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / azimuth;
      set.offsets.push_back(rho * std::cos(phi));
      set.offsets.push_back(rho * std::sin(phi));
      set.offsets.push_back(z);
      set.weights.push_back(rule.weights[i]);
    }
  }
  return set;
}

NodeSet sphere_nodes(int m, double radius, const QuadratureConfig& cfg, int level) {
  NodeSet set = unit_sphere_nodes(m, cfg, level);
  for (double& v : set.offsets) v *= radius;
  return set;
}

// Shells at Gauss-Legendre radii s_k in (0, r), weighted by s_k^{m-1}.
NodeSet ball_nodes(int m, double radius, const QuadratureConfig& cfg, int level) {
  const NodeSet sphere = unit_sphere_nodes(m, cfg, level);
  const quadrature::Rule radial = quadrature::gauss_legendre(cfg.radial_points << level, 0.0, radius);
  NodeSet set;
  set.m = m;
  set.offsets.reserve(radial.nodes.size() * sphere.offsets.size());
  set.weights.reserve(radial.nodes.size() * sphere.size());
  for (std::size_t k = 0; k < radial.nodes.size(); ++k) {
    const double s = radial.nodes[k];
    const double shell_weight = radial.weights[k] * std::pow(s / radius, m - 1);
    for (double v : sphere.offsets) set.offsets.push_back(s * v);
    for (double w : sphere.weights) set.weights.push_back(shell_weight * w);
  }
  return set;
}

// Evaluates u at center + offsets. The parallel kernel writes each value to
// its own slot, so both paths produce identical arrays.
std::vector<double> evaluate_nodes(const ScalarField& u, std::span<const double> center,
                                   const NodeSet& nodes, Execution execution) {
  const int m = nodes.m;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(nodes.size());
  std::vector<double> values(n);
  if (execution == Execution::Serial) {
    Point y(m);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      for (int d = 0; d < m; ++d) y[d] = center[d] + nodes.offsets[i * m + d];
      values[i] = u(y);
    }
    return values;
  }
  std::exception_ptr failure;
#pragma omp parallel
  {
    Point y(m);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        for (int d = 0; d < m; ++d) y[d] = center[d] + nodes.offsets[i * m + d];
        values[i] = u(y);
      } catch (...) {
#pragma omp critical(meanvalue_quadrature_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return values;
}

// Weighted mean, shifted by the first value so constants come out exact.
double weighted_mean(std::span<const double> values, std::span<const double> weights) {
  const double shift = values.front();
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw std::runtime_error("quadrature failure: non-finite field value");
    terms[i] = weights[i] * (values[i] - shift);
  }
  return shift + quadrature::pairwise_sum(terms) / quadrature::pairwise_sum(weights);
}

template <class MakeNodes>
MeanEstimate refine(const ScalarField& u, const Ball& ball, const QuadratureConfig& cfg,
                    MeanMethod method, MakeNodes make_nodes) {
  auto estimate_at = [&](int level, std::size_t& count) {
    const NodeSet nodes = make_nodes(level);
    count = nodes.size();
    const std::vector<double> values = evaluate_nodes(u, ball.center(), nodes, cfg.execution);
    return weighted_mean(values, nodes.weights);
  };
  std::size_t count = 0;
  double previous = estimate_at(0, count);
  MeanEstimate result{previous, 0.0, method, count};
  for (int level = 1; level <= cfg.max_doublings; ++level) {
    const double current = estimate_at(level, count);
    result = {current, std::abs(current - previous), method, count};
    if (result.error_bound <= cfg.tolerance * std::max(1.0, std::abs(current))) break;
    previous = current;
  }
  return result;
}

MeanEstimate monte_carlo(const ScalarField& u, const Ball& ball, const QuadratureConfig& cfg,
                         bool solid) {
  const int m = ball.dimension();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(cfg.mc_samples);
  std::vector<double> values(n);
  auto sample = [&](std::ptrdiff_t i, Point& dir, Point& y) {
    StreamRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    uniform_direction(rng, dir);
    const double s = solid ? ball.radius() * std::pow(rng.uniform_positive(), 1.0 / m) : ball.radius();
    for (int d = 0; d < m; ++d) y[d] = ball.center()[d] + s * dir[d];
    values[i] = u(y);
  };
  if (cfg.execution == Execution::Serial) {
    Point dir(m), y(m);
    for (std::ptrdiff_t i = 0; i < n; ++i) sample(i, dir, y);
  } else {
    std::exception_ptr failure;
#pragma omp parallel
    {
      Point dir(m), y(m);
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
          sample(i, dir, y);
        } catch (...) {
#pragma omp critical(meanvalue_mc_failure)
          if (!failure) failure = std::current_exception();
        }
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  for (double v : values)
    if (!std::isfinite(v)) throw std::runtime_error("Monte Carlo failure: non-finite field value");
  const double mean = quadrature::pairwise_sum(values) / static_cast<double>(n);
  std::vector<double> squares(n);
  for (std::ptrdiff_t i = 0; i < n; ++i) squares[i] = (values[i] - mean) * (values[i] - mean);
  const double variance = quadrature::pairwise_sum(squares) / static_cast<double>(n - 1);
  return {mean, std::sqrt(variance / static_cast<double>(n)), MeanMethod::MonteCarlo,
          static_cast<std::size_t>(n)};
}

void check_field(const ScalarField& u, const Ball& ball) {
  if (!u.value) throw std::invalid_argument("field has no evaluator");
  if (u.dimension != ball.dimension()) throw std::invalid_argument("field and ball dimensions differ");
}

}  // namespace

MeanEstimate sphere_mean(const ScalarField& u, const Ball& ball, const QuadratureConfig& cfg) {
  cfg.validate();
  check_field(u, ball);
  const int m = ball.dimension();
  if (m >= 4) return monte_carlo(u, ball, cfg, false);
  const MeanMethod method = m == 2 ? MeanMethod::TrapezoidCircle : MeanMethod::ProductSphere3D;
  return refine(u, ball, cfg, method,
                [&](int level) { return sphere_nodes(m, ball.radius(), cfg, level); });
}

MeanEstimate ball_mean(const ScalarField& u, const Ball& ball, const QuadratureConfig& cfg) {
  cfg.validate();
  check_field(u, ball);
  const int m = ball.dimension();
  if (m >= 4) return monte_carlo(u, ball, cfg, true);
  return refine(u, ball, cfg, MeanMethod::GaussRadial,
                [&](int level) { return ball_nodes(m, ball.radius(), cfg, level); });
}

}  // namespace meanvalue
