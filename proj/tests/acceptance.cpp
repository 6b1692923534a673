// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Tolerances and time limits are fixed below.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "meanvalue/asymptotics.hpp"
#include "meanvalue/specialfn.hpp"
#include "meanvalue/testbank.hpp"
#include "meanvalue/wos.hpp"

using namespace meanvalue;

namespace {

// Criterion 1
constexpr double kCoeffPointTol = 1e-6;
constexpr double kCoeffExtrapTol = 1e-10;
constexpr double kCoeffSeconds = 1.0;
// Criterion 2
constexpr double kClosedFormTol = 1e-12;
constexpr double kClosedFormSeconds = 1.0;
// Criterion 3
constexpr double kLaplacianRelTol = 1e-5;
constexpr double kLaplacianSeconds = 30.0;
// Criterion 4
constexpr double kParameterRelTol = 5e-3;
constexpr double kClassifySeconds = 60.0;
// Criterion 5
constexpr double kMixedHarmonicTol = 1e-8;
constexpr double kMixedRelTol = 1e-5;
// Criterion 6
constexpr double kIdentityTol = 1e-8;
// Criterion 7
constexpr std::size_t kWalks = 100000;
constexpr double kShell = 1e-4;
constexpr int kRepetitions = 20;
constexpr double kZLimit = 3.0;
constexpr double kCoverage = 0.95;
constexpr double kSlope = -0.5;
constexpr double kSlopeTol = 0.1;
constexpr double kWosSeconds = 120.0;

struct Result {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string cli_output(std::vector<std::string> args, int* code = nullptr) {
  args.insert(args.begin(), "meanvalue");
  std::ostringstream out, err;
  const int c = cli::run(args, out, err);
  if (code) *code = c;
  return out.str();
}

const EquationKind kPan = EquationKind::panharmonic(1.0);
const EquationKind kMeta = EquationKind::metaharmonic(1.0);

Result coefficient_limits() {
  Clock clock;
  double worst_point = 0.0, worst_extrap = 0.0;
  const std::vector<double> ts{1e-1, 1e-2, 1e-3};
  for (int m = 2; m <= 6; ++m) {
    for (const EquationKind& kind : {kPan, kMeta}) {
      for (Geometry g : {Geometry::Ball, Geometry::Sphere}) {
        const double limit = specialfn::coefficient_defect_limit(kind, g, m);
        asymptotics::DefectEstimate d;
        d.radii = ts;
        for (double t : ts) d.defects.push_back(specialfn::mean_coefficient_excess(kind, g, m, t) / (t * t));
        d.differences = d.defects;
        worst_point = std::max(worst_point, std::abs(d.defects.back() - limit));
        worst_extrap = std::max(worst_extrap, std::abs(asymptotics::extrapolate_limit(d).limit_value - limit));
      }
    }
  }
  const double secs = clock.seconds();
  return {worst_point <= kCoeffPointTol && worst_extrap <= kCoeffExtrapTol && secs < kCoeffSeconds,
          "max |ratio(1e-3) - limit| = " + fmt(worst_point) + " (tol " + fmt(kCoeffPointTol) +
              "), max |extrapolated - limit| = " + fmt(worst_extrap) + " (tol " + fmt(kCoeffExtrapTol) + "), " +
              fmt(secs) + " s"};
}

Result closed_forms() {
  Clock clock;
  double worst_pan = 0.0, worst_meta = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = 10.0 * i / 99.0;
    const double sinhc = t == 0.0 ? 1.0 : std::sinh(t) / t;
    const double sinc = t == 0.0 ? 1.0 : std::sin(t) / t;
    worst_pan = std::max(worst_pan, std::abs(specialfn::mean_coefficient(kPan, Geometry::Sphere, 3, t) - sinhc));
    worst_meta = std::max(worst_meta, std::abs(specialfn::mean_coefficient(kMeta, Geometry::Sphere, 3, t) - sinc));
  }
  const double secs = clock.seconds();
  return {worst_pan <= kClosedFormTol && worst_meta <= kClosedFormTol && secs < kClosedFormSeconds,
          "max |a - sinh(t)/t| = " + fmt(worst_pan) + ", max |a - sin(t)/t| = " + fmt(worst_meta) + " (tol " +
              fmt(kClosedFormTol) + ", 100 points on [0, 10]), " + fmt(secs) + " s"};
}

Result laplacian_recovery() {
  Clock clock;
  double worst = 0.0;
  std::string worst_label;
  std::size_t checks = 0;
  for (int m : {2, 3}) {
    for (const ScalarField& u : testbank::catalogue(m)) {
      for (const Point& x : testbank::interior_points(m)) {
        const auto radii = asymptotics::default_radii(u, x);
        const double exact = u.laplacian(x);
        for (Geometry g : {Geometry::Ball, Geometry::Sphere}) {
          const double est = asymptotics::laplacian_estimate(u, x, g, radii);
          // Relative error; absolute where the Laplacian vanishes.
          const double err = std::abs(est - exact) / (exact == 0.0 ? 1.0 : std::abs(exact));
          ++checks;
          if (err > worst) worst = err, worst_label = u.label;
        }
      }
    }
  }
  const double secs = clock.seconds();
  return {worst <= kLaplacianRelTol && secs < kLaplacianSeconds,
          std::to_string(checks) + " estimates, worst relative error " + fmt(worst) + " (" + worst_label + ", tol " +
              fmt(kLaplacianRelTol) + "), " + fmt(secs) + " s"};
}

Result classifier_soundness() {
  Clock clock;
  std::vector<std::string> failures;
  std::size_t solutions = 0, controls = 0;
  for (int m : {2, 3}) {
    const auto points = testbank::interior_points(m);
    for (const ScalarField& u : testbank::catalogue(m)) {
      const std::string tag = u.label + "@m" + std::to_string(m);
      if (u.kind) {
        ++solutions;
        const auto fc = asymptotics::classify_field(u, points);
        const auto kind = fc.summary.kind();
        const double expected = std::abs(u.kind->parameter());
        const bool same_tag = kind && kind->tag() == u.kind->tag();
        const double rel = expected == 0.0 ? fc.summary.parameter
                                           : std::abs(fc.summary.parameter - expected) / expected;
        if (!same_tag || rel > kParameterRelTol) failures.push_back(tag);
        continue;
      }
      // Negative controls go through the command line: exit 3, or a report
      // of inconsistent ball/sphere limits.
      ++controls;
      std::string pts;
      for (const Point& x : points) {
        if (!pts.empty()) pts += ";";
        for (std::size_t i = 0; i < x.size(); ++i) pts += (i ? "," : "") + std::to_string(x[i]);
      }
      int code = 0;
      const std::string out =
          cli_output({"classify", "--field", u.label, "--m", std::to_string(m), "--points", pts}, &code);
      const bool rejected = code == 3 || out.find("\"inconsistent_geometries\"") != std::string::npos;
      if (!rejected) {
        const auto fc = asymptotics::classify_field(u, points);
        failures.push_back(tag + " -> " + std::string(asymptotics::to_string(fc.summary.verdict)) + "(" +
                           fmt(fc.summary.parameter) + ")");
      }
    }
  }
  const double secs = clock.seconds();
  std::string detail = std::to_string(solutions) + " solutions, " + std::to_string(controls) + " negative controls, " +
                       fmt(secs) + " s";
  if (!failures.empty()) {
    detail += "; not accepted:";
    for (const auto& f : failures) detail += " " + f;
  }
  return {failures.empty() && secs < kClassifySeconds, detail};
}

// Second-order central differences combined at h and h/2.
double fd_laplacian_oracle(const ScalarField& u, const Point& x) {
  const double h = 1e-2;
  return (4.0 * testbank::finite_difference_laplacian(u, x, h / 2) - testbank::finite_difference_laplacian(u, x, h)) /
         3.0;
}

Result mixed_defect() {
  double worst_harmonic = 0.0, worst_rel = 0.0, worst_oracle = 0.0;
  for (int m : {2, 3}) {
    for (const ScalarField& u : testbank::catalogue(m)) {
      for (const Point& x : testbank::interior_points(m)) {
        const double mixed = asymptotics::mixed_defect_limit(u, x, asymptotics::default_radii(u, x));
        if (u.kind && u.kind->tag() == EquationKind::Tag::Harmonic) {
          worst_harmonic = std::max(worst_harmonic, std::abs(mixed));
          continue;
        }
        const double oracle = -fd_laplacian_oracle(u, x) / (m * (m + 2.0));
        const double exact = -u.laplacian(x) / (m * (m + 2.0));
        worst_rel = std::max(worst_rel, std::abs(mixed - oracle) / std::abs(oracle));
        worst_oracle = std::max(worst_oracle, std::abs(exact - oracle) / std::abs(exact));
      }
    }
  }
  return {worst_harmonic <= kMixedHarmonicTol && worst_rel <= kMixedRelTol && worst_oracle <= kMixedRelTol,
          "harmonic max |mixed| = " + fmt(worst_harmonic) + " (tol " + fmt(kMixedHarmonicTol) +
              "), non-harmonic max rel. error vs finite-difference oracle = " + fmt(worst_rel) + " (tol " +
              fmt(kMixedRelTol) + "), oracle vs closed form " + fmt(worst_oracle)};
}

Result identities() {
  double worst_shared = 0.0, worst_self = 0.0;
  std::size_t fields = 0;
  for (int m : {2, 3}) {
    for (const ScalarField& u : testbank::catalogue(m)) {
      if (!u.kind || u.kind->tag() == EquationKind::Tag::Harmonic) continue;
      ++fields;
      for (const Point& x : testbank::interior_points(m)) {
        const auto radii = asymptotics::default_radii(u, x);
        worst_shared = std::max(worst_shared, asymptotics::shared_ratio_check(u, x, radii));
        for (double r : {radii[0], 0.75 * radii[0], 0.5 * radii[0]}) {
          const auto res = asymptotics::self_referential_check(u, *u.kind, x, r);
          worst_self = std::max({worst_self, res.ball, res.sphere});
        }
      }
    }
  }
  return {worst_shared <= kIdentityTol && worst_self <= kIdentityTol,
          std::to_string(fields) + " fields x 5 points x 3 radii, max shared-ratio residual " + fmt(worst_shared) +
              ", max self-referential residual " + fmt(worst_self) + " (tol " + fmt(kIdentityTol) + ")"};
}

Result wos_statistics() {
  Clock clock;
  std::vector<std::string> notes;
  bool coverage_ok = true;
  double worst_coverage = 1.0;
  for (int m : {2, 3}) {
    const Domain domain = Domain::ball(Point(m, 0.0), 1.0);
    Point x(m, 0.0);
    x[0] = 0.3;
    x[1] = -0.2;
    for (double mu : {0.5, 1.0, 2.0}) {
      // Rotate through the panharmonic families of the catalogue.
      const std::string label = mu == 0.5 ? "exp_mu_diag" : mu == 1.0 ? (m == 2 ? "radial_i0" : "radial_sinhc")
                                                                         : "exp_mu_x1";
      const ScalarField g = testbank::find_field(label, m, {mu, 2.0});
      const double exact = g(x);
      int inside = 0;
      for (int rep = 0; rep < kRepetitions; ++rep) {
        wos::WalkConfig cfg;
        cfg.mu = mu;
        cfg.walks = kWalks;
        cfg.epsilon_shell = kShell;
        cfg.seed = 1000 + rep;
        const wos::WalkResult r = wos::solve_dirichlet(domain, g, x, cfg);
        if (std::abs(r.estimate - exact) <= kZLimit * r.standard_error) ++inside;
      }
      const double coverage = static_cast<double>(inside) / kRepetitions;
      worst_coverage = std::min(worst_coverage, coverage);
      if (coverage < kCoverage) {
        coverage_ok = false;
        notes.push_back(label + "@m" + std::to_string(m) + ",mu=" + fmt(mu) + " coverage " + fmt(coverage));
      }
    }
  }

  // Root-mean-square error against the walk count, fitted in log-log.
  const Domain domain = Domain::ball(Point(3, 0.0), 1.0);
  const Point x{0.3, -0.2, 0.1};
  const ScalarField g = testbank::find_field("exp_mu_x1", 3, {1.0, 2.0});
  const double exact = g(x);
  std::vector<double> lk, le;
  for (std::size_t walks : {250u, 1000u, 4000u, 16000u, 64000u}) {
    double sq = 0.0;
    const int reps = 40;
    for (int rep = 0; rep < reps; ++rep) {
      wos::WalkConfig cfg;
      cfg.mu = 1.0;
      cfg.walks = walks;
      cfg.epsilon_shell = kShell;
      cfg.seed = 5000 + rep;
      const double e = wos::solve_dirichlet(domain, g, x, cfg).estimate - exact;
      sq += e * e;
    }
    lk.push_back(std::log(static_cast<double>(walks)));
    le.push_back(0.5 * std::log(sq / reps));
  }
  const double n = static_cast<double>(lk.size());
  double mk = 0.0, me = 0.0;
  for (std::size_t i = 0; i < lk.size(); ++i) mk += lk[i] / n, me += le[i] / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lk.size(); ++i) sxy += (lk[i] - mk) * (le[i] - me), sxx += (lk[i] - mk) * (lk[i] - mk);
  const double slope = sxy / sxx;
  const bool slope_ok = std::abs(slope - kSlope) <= kSlopeTol;
  const double secs = clock.seconds();

  std::string detail = "min coverage |z| <= 3: " + fmt(worst_coverage) + " over 6 configs x " +
                       std::to_string(kRepetitions) + " seeds (need " + fmt(kCoverage) + "), error slope " +
                       fmt(slope) + " (need " + fmt(kSlope) + " +- " + fmt(kSlopeTol) + "), " + fmt(secs) + " s";
  for (const auto& note : notes) detail += "; " + note;
  return {coverage_ok && slope_ok && secs < kWosSeconds, detail};
}

Result reproducibility() {
  const std::vector<std::vector<std::string>> commands{
      {"wos-solve", "--m", "3", "--boundary", "exp_mu_x1", "--mu", "1", "--point", "0.3,-0.2,0.1", "--walks",
       "20000", "--seed", "7"},
      {"wos-solve", "--domain", "shell", "--m", "3", "--inner-center", "0.1,0,0", "--boundary", "newton_kernel",
       "--point", "0,0.5,0", "--walks", "20000", "--seed", "3"},
      {"verify-coefficients"},
      {"convergence", "--field", "exp_mu_x1", "--m", "4", "--point", "0.1,0,0,0"},
      {"classify", "--field", "cos_exp_mix", "--m", "3", "--point", "0.1,0.2,0.05"},
  };
  std::size_t compared = 0;
  for (const auto& base : commands) {
    const std::string reference = cli_output(base);
    if (reference.empty()) return {false, "empty output for " + base.front()};
    if (cli_output(base) != reference) return {false, "repeat run differs for " + base.front()};
    ++compared;
    for (int threads : {1, 2, 4}) {
      omp_set_num_threads(threads);
      std::vector<std::string> args = base;
      if (base.front() == "wos-solve") args.insert(args.end(), {"--threads", std::to_string(threads)});
      if (cli_output(args) != reference)
        return {false, base.front() + " differs with " + std::to_string(threads) + " threads"};
      ++compared;
    }
  }
  return {true, std::to_string(compared) + " runs of 5 commands byte-identical across repeats and 1/2/4 threads"};
}

}  // namespace

int main() {
  const int default_threads = omp_get_max_threads();
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"1 coefficient limits", coefficient_limits},
      {"2 closed-form sphere coefficients", closed_forms},
      {"3 laplacian recovery", laplacian_recovery},
      {"4 classifier soundness", classifier_soundness},
      {"5 mixed defect", mixed_defect},
      {"6 shared-ratio and self-referential identities", identities},
      {"7 walk-on-spheres statistics", wos_statistics},
      {"8 reproducibility", reproducibility},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    omp_set_num_threads(default_threads);
    Result r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", r.pass ? "PASS" : "FAIL", name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
