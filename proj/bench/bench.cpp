// Serial reference vs OpenMP kernels. Usage: meanvalue_bench [repeats]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "meanvalue/geometry.hpp"
#include "meanvalue/testbank.hpp"
#include "meanvalue/wos.hpp"

using namespace meanvalue;

namespace {

double best_of(int repeats, const std::function<double()>& body, double& value) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    value = body();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

void row(const std::string& name, int repeats, const std::function<double()>& serial,
         const std::function<double()>& parallel) {
  double vs = 0.0, vp = 0.0;
  const double ts = best_of(repeats, serial, vs);
  const double tp = best_of(repeats, parallel, vp);
  std::printf("%-34s %10.4f %10.4f %8.2fx  |diff| %.2e\n", name.c_str(), ts, tp, ts / tp, std::abs(vs - vp));
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads: %d, best of %d\n", omp_get_max_threads(), repeats);
  std::printf("%-34s %10s %10s %9s\n", "kernel", "serial s", "openmp s", "speedup");

  for (int m : {2, 3}) {
    const ScalarField g = testbank::find_field("exp_mu_x1", m, {1.0, 2.0});
    const Domain d = Domain::ball(Point(m, 0.0), 1.0);
    Point x(m, 0.0);
    x[0] = 0.3;
    wos::WalkConfig cfg = wos::default_config(d);
    cfg.mu = 1.0;
    cfg.walks = 200000;
    row("wos m=" + std::to_string(m) + " 2e5 walks", repeats,
        [&] { return wos::solve_dirichlet_serial(d, g, x, cfg).estimate; },
        [&] { return wos::solve_dirichlet(d, g, x, cfg).estimate; });
  }

  QuadratureConfig serial, parallel;
  serial.execution = Execution::Serial;
  {
    const ScalarField u = testbank::find_field("exp_cos_mix", 3);
    const Ball b({0.1, 0.2, 0.05}, 0.3);
    row("ball mean m=3 quadrature", repeats, [&] { return ball_mean(u, b, serial).value; },
        [&] { return ball_mean(u, b, parallel).value; });
  }
  {
    const ScalarField u = testbank::find_field("exp_mu_diag", 5);
    const Ball b(Point(5, 0.1), 0.4);
    serial.mc_samples = parallel.mc_samples = 1000000;
    row("ball mean m=5 monte carlo 1e6", repeats, [&] { return ball_mean(u, b, serial).value; },
        [&] { return ball_mean(u, b, parallel).value; });
    row("sphere mean m=5 monte carlo 1e6", repeats, [&] { return sphere_mean(u, b, serial).value; },
        [&] { return sphere_mean(u, b, parallel).value; });
  }
  return 0;
}
