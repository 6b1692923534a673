#include "meanvalue/wos.hpp"

#include <cmath>
#include <exception>
#include <string>
#include <vector>

#include "meanvalue/quadrature.hpp"
#include "meanvalue/rng.hpp"
#include "meanvalue/specialfn.hpp"

namespace meanvalue::wos {

void WalkConfig::validate() const {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be finite and >= 0");
  if (!(epsilon_shell > 0.0)) throw std::invalid_argument("epsilon_shell must be positive");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  if (walks < 1) throw std::invalid_argument("walks must be >= 1");
  if (!(radius_fraction > 0.0 && radius_fraction <= 1.0))
    throw std::invalid_argument("radius_fraction must lie in (0, 1]");
}

WalkConfig default_config(const Domain& domain) {
  WalkConfig cfg;
  if (std::isfinite(domain.diameter())) cfg.epsilon_shell = 1e-4 * domain.diameter();
  return cfg;
}

double survival_weight(int m, double mu, double rho) {
  if (m < 2) throw std::domain_error("dimension must be >= 2");
  if (!(rho > 0.0)) throw std::domain_error("step radius must be positive");
  if (!(mu >= 0.0)) throw std::domain_error("mu must be >= 0");
  if (mu == 0.0) return 1.0;
  return 1.0 / specialfn::normalized_bessel_i(specialfn::BesselOrder::sphere(m), mu * rho);
}

namespace {

struct WalkSample {
  double score = 0.0;
  double weight = 1.0;
  std::size_t steps = 0;
  bool truncated = false;
};

// One walk, drawing only from stream `index`.
WalkSample run_walk(const Domain& domain, const ScalarField& g, std::span<const double> x,
                    const WalkConfig& cfg, std::uint64_t index, Point& p, Point& direction) {
  const int m = domain.dimension();
  StreamRng rng(cfg.seed, index);
  p.assign(x.begin(), x.end());
  WalkSample sample;
  while (true) {
    const double delta = -domain.signed_distance(p);
    if (delta <= cfg.epsilon_shell) break;
    if (sample.steps == cfg.max_steps) {
      sample.truncated = true;
      break;
    }
    const double rho = cfg.radius_fraction * delta;
    sample.weight *= survival_weight(m, cfg.mu, rho);
    uniform_direction(rng, direction);
    for (int d = 0; d < m; ++d) p[d] += rho * direction[d];
    ++sample.steps;
  }
  sample.score = sample.weight * g(domain.project_to_boundary(p));
  return sample;
}

void check_inputs(const Domain& domain, const ScalarField& g, std::span<const double> x,
                  const WalkConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(x.size()) != domain.dimension() || g.dimension != domain.dimension())
    throw std::invalid_argument("domain, boundary data and start point dimensions differ");
  if (!g.value) throw std::invalid_argument("boundary data has no evaluator");
  if (!(domain.signed_distance(x) < 0.0)) throw StartOutsideDomain("start point is not inside the domain");
}

}  // namespace

WalkResult solve_dirichlet(const Domain& domain, const ScalarField& g, std::span<const double> x,
                           const WalkConfig& cfg) {
  check_inputs(domain, g, x, cfg);
  const int m = domain.dimension();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(cfg.walks);
  std::vector<WalkSample> samples(n);
  std::exception_ptr failure;
#pragma omp parallel
  {
    Point p(m), direction(m);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        samples[i] = run_walk(domain, g, x, cfg, static_cast<std::uint64_t>(i), p, direction);
      } catch (...) {
#pragma omp critical(meanvalue_wos_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> scores(n), weights(n);
  std::size_t steps = 0, truncated = 0;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    scores[i] = samples[i].score;
    weights[i] = samples[i].weight;
    steps += samples[i].steps;
    truncated += samples[i].truncated ? 1 : 0;
  }
  if (truncated == cfg.walks) throw AllWalksTruncated("every walk hit max_steps before the epsilon shell");

  const double count = static_cast<double>(n);
  WalkResult result;
  result.estimate = quadrature::pairwise_sum(scores) / count;
  std::vector<double> squares(n);
  for (std::ptrdiff_t i = 0; i < n; ++i) squares[i] = (scores[i] - result.estimate) * (scores[i] - result.estimate);
  const double variance = n > 1 ? quadrature::pairwise_sum(squares) / (count - 1.0) : 0.0;
  result.standard_error = std::sqrt(variance / count);
  result.walks_completed = cfg.walks;
  result.truncated_walks = truncated;
  result.mean_steps = static_cast<double>(steps) / count;
  result.mean_weight = quadrature::pairwise_sum(weights) / count;
  return result;
}

WalkResult solve_dirichlet_serial(const Domain& domain, const ScalarField& g, std::span<const double> x,
                                  const WalkConfig& cfg) {
  check_inputs(domain, g, x, cfg);
  const int m = domain.dimension();
  Point p(m), direction(m);
  // Welford running mean and squared deviations.
  double mean = 0.0, m2 = 0.0, weight_sum = 0.0;
  std::size_t steps = 0, truncated = 0;
  for (std::size_t i = 0; i < cfg.walks; ++i) {
    const WalkSample s = run_walk(domain, g, x, cfg, i, p, direction);
    const double delta = s.score - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (s.score - mean);
    weight_sum += s.weight;
    steps += s.steps;
    truncated += s.truncated ? 1 : 0;
  }
  if (truncated == cfg.walks) throw AllWalksTruncated("every walk hit max_steps before the epsilon shell");
  const double count = static_cast<double>(cfg.walks);
  WalkResult result;
  result.estimate = mean;
  result.standard_error = cfg.walks > 1 ? std::sqrt(m2 / (count - 1.0) / count) : 0.0;
  result.walks_completed = cfg.walks;
  result.truncated_walks = truncated;
  result.mean_steps = static_cast<double>(steps) / count;
  result.mean_weight = weight_sum / count;
  return result;
}

}  // namespace meanvalue::wos
