#include "cli.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "meanvalue/asymptotics.hpp"
#include "meanvalue/geometry.hpp"
#include "meanvalue/specialfn.hpp"
#include "meanvalue/testbank.hpp"
#include "meanvalue/wos.hpp"

namespace meanvalue::cli {

namespace {

using nlohmann::json;

constexpr const char* kOutputDirEnv = "MEANVALUE_OUTPUT_DIR";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json, Table };

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  if (text == "table") return Format::Table;
  throw UsageError("unknown format '" + text + "' (expected csv, json or table)");
}

// ---------------------------------------------------------------------------
// Parsing

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(const std::string& token) {
  std::string_view view(token);
  if (!view.empty() && view.front() == '+') view.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), value);
  if (ec != std::errc() || ptr != view.data() + view.size() || view.empty())
    throw UsageError("invalid number '" + token + "'");
  return value;
}

int parse_int(const std::string& token) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
    throw UsageError("invalid integer '" + token + "'");
  return value;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> values;
  for (const std::string& part : split(text, ',')) values.push_back(parse_double(part));
  return values;
}

Point parse_point(const std::string& text, int m) {
  Point p = parse_doubles(text);
  if (static_cast<int>(p.size()) != m)
    throw UsageError("point '" + text + "' has " + std::to_string(p.size()) + " coordinates, expected " +
                     std::to_string(m));
  return p;
}

std::vector<Point> parse_points(const std::string& text, int m) {
  std::vector<Point> points;
  for (const std::string& part : split(text, ';')) points.push_back(parse_point(part, m));
  return points;
}

// "0.2,0.1,0.05" or "start:ratio:count".
std::vector<double> parse_radii(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("radii schedule must be start:ratio:count");
    try {
      return asymptotics::geometric_radii(parse_double(parts[0]), parse_double(parts[1]), parse_int(parts[2]));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return parse_doubles(text);
}

// "2..6", "2,3,5" or "3".
std::vector<int> parse_dimensions(const std::string& text) {
  std::vector<int> dims;
  if (const auto pos = text.find(".."); pos != std::string::npos) {
    const int lo = parse_int(trim(text.substr(0, pos)));
    const int hi = parse_int(trim(text.substr(pos + 2)));
    if (hi < lo) throw UsageError("empty dimension range '" + text + "'");
    for (int m = lo; m <= hi; ++m) dims.push_back(m);
  } else {
    for (const std::string& part : split(text, ',')) dims.push_back(parse_int(part));
  }
  for (int m : dims)
    if (m < 2) throw UsageError("dimension must be >= 2");
  return dims;
}

void require_dimension(int m) {
  if (m < 2) throw UsageError("dimension must be >= 2");
}

// ---------------------------------------------------------------------------
// Output

// Shortest representation that round-trips; identical inputs give identical
// text.
std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, ptr);
}

std::string format_point(std::span<const double> p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ";" : "") + format_number(p[i]);
  return s;
}

json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

using Cell = std::variant<std::string, double, long long>;

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::to_string(std::get<long long>(c));
}

json cell_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return number_json(*d);
  return std::get<long long>(c);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

void write_aligned(const Table& t, std::ostream& os) {
  std::vector<std::size_t> width(t.header.size());
  for (std::size_t i = 0; i < t.header.size(); ++i) width[i] = t.header[i].size();
  for (const auto& row : t.rows)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], cell_text(row[i]).size());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      os << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << cells[i];
    os << '\n';
  };
  line(t.header);
  for (const auto& row : t.rows) {
    std::vector<std::string> cells;
    for (const Cell& c : row) cells.push_back(cell_text(c));
    line(cells);
  }
}

json rows_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.header[i]] = cell_json(row[i]);
    rows.push_back(obj);
  }
  return rows;
}

// Effective option values of a subcommand, keyed by long option name. The
// same keys are accepted in a config file section named after the command.
json effective_options(const CLI::App& sub) {
  json config = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "output" || name == "format" || name.empty()) continue;
    config[name] = opt->count() > 0 ? opt->as<std::string>() : opt->get_default_str();
  }
  return config;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    std::filesystem::path target(path);
    if (target.is_relative())
      if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0')
        target = std::filesystem::path(dir) / target;
    file_ = std::make_unique<std::ofstream>(target);
    if (!*file_) throw UsageError("cannot open output file '" + target.string() + "'");
    stream_ = file_.get();
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void emit(const Table& table, Format format, json extra, Sink& sink) {
  std::ostream& os = sink.stream();
  switch (format) {
    case Format::Csv: write_csv(table, os); break;
    case Format::Table: write_aligned(table, os); break;
    case Format::Json:
      extra["rows"] = rows_json(table);
      os << extra.dump(2) << '\n';
      break;
  }
}

struct Common {
  std::string format;
  std::string output;
};

void add_common(CLI::App* sub, Common& common, const std::string& default_format) {
  common.format = default_format;
  sub->add_option("--format", common.format, "Output format: csv, json or table")->capture_default_str();
  sub->add_option("--output", common.output,
                  std::string("Output file; relative paths resolve against $") + kOutputDirEnv);
}

// ---------------------------------------------------------------------------
// verify-coefficients

struct VerifyCoefficientsOptions {
  Common common;
  std::string m = "2..6";
  std::string kind = "all";
  std::string t = "1e-1,1e-2,1e-3";
  double ratio_tolerance = 0.05;
  double abs_tolerance = 1e-12;
  double extrapolation_tolerance = 1e-10;
};

struct KindTag {
  std::string name;
  EquationKind kind;
};

std::vector<KindTag> parse_kinds(const std::string& text) {
  const KindTag pan{"pan", EquationKind::panharmonic(1.0)};
  const KindTag meta{"meta", EquationKind::metaharmonic(1.0)};
  const KindTag har{"har", EquationKind::harmonic()};
  if (text == "pan") return {pan};
  if (text == "meta") return {meta};
  if (text == "har") return {har};
  if (text == "all") return {pan, meta, har};
  throw UsageError("unknown kind '" + text + "' (expected pan, meta, har or all)");
}

int verify_coefficients(const VerifyCoefficientsOptions& o, const CLI::App& sub, std::ostream& out,
                        std::ostream& err) {
  const Format format = parse_format(o.common.format);
  const std::vector<int> dims = parse_dimensions(o.m);
  const std::vector<KindTag> kinds = parse_kinds(o.kind);
  const std::vector<double> ts = parse_doubles(o.t);
  for (double t : ts)
    if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("t values must be positive");
  std::vector<double> descending(ts);
  std::sort(descending.begin(), descending.end(), std::greater<>());
  const bool extrapolate =
      descending.size() >= 3 && std::adjacent_find(descending.begin(), descending.end()) == descending.end();

  Table table{{"m", "kind", "geometry", "t", "coeff", "defect_ratio", "limit", "abs_err"}, {}};
  std::size_t failures = 0;
  for (int m : dims) {
    for (const KindTag& k : kinds) {
      for (Geometry g : {Geometry::Ball, Geometry::Sphere}) {
        const double limit = specialfn::coefficient_defect_limit(k.kind, g, m);
        std::vector<double> ratio_by_t;
        auto add_row = [&](double t, double coeff, double ratio, double tolerance) {
          const double abs_err = std::abs(ratio - limit);
          table.rows.push_back({static_cast<long long>(m), k.name, std::string(to_string(g)), t, coeff, ratio,
                                limit, abs_err});
          if (!(abs_err <= tolerance)) {
            ++failures;
            err << "tolerance exceeded: m=" << m << " kind=" << k.name << " geometry=" << to_string(g)
                << " t=" << format_number(t) << " abs_err=" << format_number(abs_err)
                << " tolerance=" << format_number(tolerance) << '\n';
          }
        };
        for (double t : ts) {
          const double coeff = specialfn::mean_coefficient(k.kind, g, m, t);
          const double ratio = specialfn::mean_coefficient_excess(k.kind, g, m, t) / (t * t);
          add_row(t, coeff, ratio, std::max(o.abs_tolerance, o.ratio_tolerance * t * t));
        }
        if (extrapolate) {
          // Row t = 0 holds the extrapolated limit of the ratio.
          asymptotics::DefectEstimate d;
          d.radii = descending;
          for (double t : descending)
            d.defects.push_back(specialfn::mean_coefficient_excess(k.kind, g, m, t) / (t * t));
          add_row(0.0, 1.0, asymptotics::extrapolate_limit(d).limit_value, o.extrapolation_tolerance);
        }
      }
    }
  }
  Sink sink(o.common.output, out);
  emit(table, format, {{"command", "verify-coefficients"}, {"failures", failures}, {"config", effective_options(sub)}},
       sink);
  return failures == 0 ? kSuccess : kToleranceFailure;
}

// ---------------------------------------------------------------------------
// classify

struct FieldOptions {
  std::string field;
  int m = 2;
  double mu = 1.0;
  double lambda = 2.0;
};

void add_field_options(CLI::App* sub, FieldOptions& f) {
  sub->add_option("--field", f.field, "Catalogue field label")->required();
  sub->add_option("--m", f.m, "Dimension")->capture_default_str();
  sub->add_option("--mu", f.mu, "Panharmonic parameter of the catalogue")->capture_default_str();
  sub->add_option("--lambda", f.lambda, "Metaharmonic parameter of the catalogue")->capture_default_str();
}

ScalarField lookup_field(const FieldOptions& f) {
  require_dimension(f.m);
  try {
    return testbank::find_field(f.field, f.m, {f.mu, f.lambda});
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

struct ClassifyOptions {
  Common common;
  FieldOptions field;
  std::string point;
  std::string points;
  std::string radii;
  double tol = 1e-6;
  double parameter_rtol = 5e-3;
};

json classification_json(const asymptotics::Classification& c) {
  return {{"kind", std::string(to_string(c.verdict))},
          {"parameter", number_json(c.parameter)},
          {"confidence", number_json(c.confidence)},
          {"status", std::string(to_string(c.status))},
          {"point", c.point},
          {"center_value", number_json(c.center_value)},
          {"limits", {{"ball", number_json(c.ball_limit)}, {"sphere", number_json(c.sphere_limit)}}},
          {"kappa", {{"ball", number_json(c.kappa_ball)}, {"sphere", number_json(c.kappa_sphere)}}}};
}

std::vector<Cell> classification_row(const std::string& label, const asymptotics::Classification& c) {
  return {label, std::string(to_string(c.verdict)), c.parameter, c.confidence, std::string(to_string(c.status)),
          c.ball_limit, c.sphere_limit};
}

int classify(const ClassifyOptions& o, const CLI::App& sub, std::ostream& out) {
  const Format format = parse_format(o.common.format);
  const ScalarField u = lookup_field(o.field);
  if (o.point.empty() == o.points.empty()) throw UsageError("give exactly one of --point and --points");
  const std::vector<Point> points =
      o.points.empty() ? std::vector<Point>{parse_point(o.point, o.field.m)} : parse_points(o.points, o.field.m);
  const std::vector<double> radii = o.radii.empty() ? std::vector<double>{} : parse_radii(o.radii);

  asymptotics::FieldClassification result;
  if (points.size() == 1) {
    const std::vector<double> r = radii.empty() ? asymptotics::default_radii(u, points.front()) : radii;
    result.summary = asymptotics::classify_point(u, points.front(), r, o.tol);
  } else {
    result = asymptotics::classify_field(u, points, o.tol, o.parameter_rtol, {}, radii);
  }

  Table table{{"point", "kind", "parameter", "confidence", "status", "ball_limit", "sphere_limit"}, {}};
  for (const auto& c : result.points) table.rows.push_back(classification_row(format_point(c.point), c));
  table.rows.push_back(classification_row(points.size() == 1 ? format_point(points.front()) : "all", result.summary));

  Sink sink(o.common.output, out);
  if (format == Format::Json) {
    json report = classification_json(result.summary);
    report["field"] = u.label;
    report["m"] = o.field.m;
    if (!result.points.empty()) {
      report["points"] = json::array();
      for (const auto& c : result.points) report["points"].push_back(classification_json(c));
    }
    report["config"] = effective_options(sub);
    sink.stream() << report.dump(2) << '\n';
  } else {
    emit(table, format, {}, sink);
  }
  return result.summary.definite() ? kSuccess : kIndeterminate;
}

// ---------------------------------------------------------------------------
// convergence

struct ConvergenceOptions {
  Common common;
  FieldOptions field;
  std::string point;
  std::string geometry = "ball";
  std::string radii;
  double min_order = 1.9;
};

int convergence(const ConvergenceOptions& o, const CLI::App& sub, std::ostream& out) {
  const Format format = parse_format(o.common.format);
  const ScalarField u = lookup_field(o.field);
  const Point x = parse_point(o.point, o.field.m);
  const auto geometry = asymptotics::parse_defect_geometry(o.geometry);
  const std::vector<double> radii = o.radii.empty() ? asymptotics::default_radii(u, x, 5) : parse_radii(o.radii);
  if (radii.size() < 3) throw UsageError("convergence needs at least 3 radii");

  const asymptotics::DefectEstimate d = asymptotics::defect_sequence(u, x, geometry, radii);
  Table table{{"r", "defect", "defect_ratio", "extrapolated", "order"}, {}};
  asymptotics::DefectEstimate last;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    std::vector<Cell> row{radii[i], d.differences[i], d.defects[i], std::string(), std::string()};
    if (i >= 2) {
      asymptotics::DefectEstimate prefix = d;
      prefix.radii.resize(i + 1);
      prefix.defects.resize(i + 1);
      prefix.differences.resize(i + 1);
      last = asymptotics::extrapolate_limit(prefix);
      row[3] = last.limit_value;
      row[4] = last.saturated ? Cell(std::string("saturated")) : Cell(last.convergence_order);
    }
    table.rows.push_back(row);
  }
  Sink sink(o.common.output, out);
  emit(table, format,
       {{"command", "convergence"},
        {"field", u.label},
        {"geometry", std::string(asymptotics::to_string(geometry))},
        {"limit", number_json(last.limit_value)},
        {"saturated", last.saturated},
        {"config", effective_options(sub)}},
       sink);
  return last.saturated || last.convergence_order >= o.min_order ? kSuccess : kToleranceFailure;
}

// ---------------------------------------------------------------------------
// wos-solve

struct WosOptions {
  Common common;
  std::string domain = "ball";
  int m = 3;
  std::string center;
  double radius = 1.0;
  std::string lower;
  std::string upper;
  std::string inner_center;
  double inner_radius = 0.3;
  std::string boundary = "const:1";
  double lambda = 2.0;
  std::string point;
  double mu = 0.0;
  std::size_t walks = 10000;
  double epsilon = 0.0;
  std::size_t max_steps = 10000;
  std::uint64_t seed = 1;
  double radius_fraction = 1.0;
  int threads = 0;
};

Domain build_domain(const WosOptions& o) {
  const int m = o.m;
  const Point origin(m, 0.0);
  auto point_or = [&](const std::string& text, Point fallback) {
    return text.empty() ? fallback : parse_point(text, m);
  };
  try {
    if (o.domain == "ball") return Domain::ball(point_or(o.center, origin), o.radius);
    if (o.domain == "box") return Domain::box(point_or(o.lower, Point(m, -1.0)), point_or(o.upper, Point(m, 1.0)));
    if (o.domain == "shell")
      return Domain::shell(point_or(o.center, origin), o.radius, point_or(o.inner_center, origin), o.inner_radius);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown domain '" + o.domain + "' (expected ball, box or shell)");
}

int wos_solve(const WosOptions& o, const CLI::App& sub, std::ostream& out) {
  const Format format = parse_format(o.common.format);
  require_dimension(o.m);
  const Domain domain = build_domain(o);
  const Point x = o.point.empty() ? Point(o.m, 0.0) : parse_point(o.point, o.m);

  ScalarField g;
  if (o.boundary.rfind("const:", 0) == 0) {
    g = testbank::constant_field(o.m, parse_double(o.boundary.substr(6)));
  } else {
    FieldOptions f{o.boundary, o.m, o.mu > 0.0 ? o.mu : 1.0, o.lambda};
    g = lookup_field(f);
  }

  wos::WalkConfig cfg = wos::default_config(domain);
  cfg.mu = o.mu;
  cfg.walks = o.walks;
  cfg.max_steps = o.max_steps;
  cfg.seed = o.seed;
  cfg.radius_fraction = o.radius_fraction;
  if (o.epsilon > 0.0) cfg.epsilon_shell = o.epsilon;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.threads > 0) omp_set_num_threads(o.threads);

  const wos::WalkResult r = wos::solve_dirichlet(domain, g, x, cfg);

  Table table{{"estimate", "standard_error", "walks_completed", "truncated_walks", "mean_steps", "mean_weight"},
              {{r.estimate, r.standard_error, static_cast<long long>(r.walks_completed),
                static_cast<long long>(r.truncated_walks), r.mean_steps, r.mean_weight}}};
  // A reference value exists when the boundary data solves the same equation.
  const bool solves = g.kind && ((g.kind->tag() == EquationKind::Tag::Panharmonic &&
                                  std::abs(g.kind->parameter()) == o.mu) ||
                                 (g.kind->tag() == EquationKind::Tag::Harmonic && o.mu == 0.0));
  if (solves) {
    const double ref = g(x);
    const double diff = r.estimate - ref;
    const double z = r.standard_error > 0.0 ? diff / r.standard_error
                     : diff == 0.0          ? 0.0
                                            : std::copysign(std::numeric_limits<double>::infinity(), diff);
    table.header.push_back("ref_value");
    table.header.push_back("z_score");
    table.rows.front().push_back(ref);
    table.rows.front().push_back(z);
  }
  Sink sink(o.common.output, out);
  if (format == Format::Json) {
    json report = rows_json(table).front();
    report["config"] = effective_options(sub);
    sink.stream() << report.dump(2) << '\n';
  } else {
    emit(table, format, {}, sink);
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// verify-identities

struct IdentityOptions {
  Common common;
  std::string m = "2,3";
  double mu = 1.0;
  double lambda = 2.0;
  double tol = 1e-8;
  double rel_tol = 1e-5;
};

int verify_identities(const IdentityOptions& o, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  const Format format = parse_format(o.common.format);
  const std::vector<int> dims = parse_dimensions(o.m);
  Table table{{"field", "m", "point", "check", "value", "expected", "abs_err", "pass"}, {}};
  std::size_t failures = 0;
  auto record = [&](const ScalarField& u, int m, const Point& x, const std::string& check, double value,
                    double expected, double tolerance) {
    const double abs_err = std::abs(value - expected);
    const bool pass = abs_err <= tolerance;
    table.rows.push_back({u.label, static_cast<long long>(m), format_point(x), check, value, expected, abs_err,
                          std::string(pass ? "true" : "false")});
    if (!pass) {
      ++failures;
      err << "identity failed: " << u.label << " m=" << m << " point=" << format_point(x) << " " << check
          << " abs_err=" << format_number(abs_err) << '\n';
    }
  };

  for (int m : dims) {
    if (m > 3) throw UsageError("verify-identities needs deterministic quadrature (m in {2, 3})");
    for (const ScalarField& u : testbank::catalogue(m, {o.mu, o.lambda})) {
      for (const Point& x : testbank::interior_points(m)) {
        const std::vector<double> radii = asymptotics::default_radii(u, x);
        // Mixed ball-minus-sphere limit: 0 for harmonic fields, else
        // -laplacian / (m (m + 2)).
        const double mixed = asymptotics::mixed_defect_limit(u, x, radii);
        const bool harmonic = u.kind && u.kind->tag() == EquationKind::Tag::Harmonic;
        if (harmonic) {
          record(u, m, x, "mixed_defect", mixed, 0.0, o.tol);
        } else if (u.has_exact_laplacian()) {
          const double expected = -u.laplacian(x) / (m * (m + 2.0));
          record(u, m, x, "mixed_defect", mixed, expected, o.rel_tol * std::abs(expected));
        }
        if (!u.kind || harmonic) continue;
        record(u, m, x, "shared_ratio", asymptotics::shared_ratio_check(u, x, radii), 0.0, o.tol);
        for (std::size_t i = 0; i < 3; ++i) {
          const double r = radii.front() * (1.0 - 0.25 * static_cast<double>(i));
          const auto res = asymptotics::self_referential_check(u, *u.kind, x, r);
          record(u, m, x, "self_ref_ball@" + format_number(r), res.ball, 0.0, o.tol);
          record(u, m, x, "self_ref_sphere@" + format_number(r), res.sphere, 0.0, o.tol);
        }
      }
    }
  }
  Sink sink(o.common.output, out);
  emit(table, format, {{"command", "verify-identities"}, {"failures", failures}, {"config", effective_options(sub)}},
       sink);
  return failures == 0 ? kSuccess : kToleranceFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean value identities of meta- and panharmonic functions"};
  app.name(args.empty() ? "meanvalue" : args.front());
  app.set_config("--config", "", "Read options from a key=value file ([subcommand] sections)");
  app.require_subcommand(1);

  VerifyCoefficientsOptions vc;
  CLI::App* vc_cmd = app.add_subcommand("verify-coefficients", "Check the mean value coefficient limits");
  add_common(vc_cmd, vc.common, "csv");
  vc_cmd->add_option("--m", vc.m, "Dimensions: 2..6, 2,3 or 4")->capture_default_str();
  vc_cmd->add_option("--kind", vc.kind, "pan, meta, har or all")->capture_default_str();
  vc_cmd->add_option("--t", vc.t, "Comma-separated arguments t")->capture_default_str();
  vc_cmd->add_option("--ratio-tol", vc.ratio_tolerance, "Allowed |ratio - limit| / t^2")->capture_default_str();
  vc_cmd->add_option("--abs-tol", vc.abs_tolerance, "Absolute floor for the ratio check")->capture_default_str();
  vc_cmd->add_option("--extrapolation-tol", vc.extrapolation_tolerance, "Tolerance of the extrapolated limit")
      ->capture_default_str();

  ClassifyOptions cl;
  CLI::App* cl_cmd = app.add_subcommand("classify", "Classify a catalogue field at one or more points");
  add_common(cl_cmd, cl.common, "json");
  add_field_options(cl_cmd, cl.field);
  cl_cmd->add_option("--point", cl.point, "Point, comma-separated");
  cl_cmd->add_option("--points", cl.points, "Points separated by ';'");
  cl_cmd->add_option("--radii", cl.radii, "Radii list or start:ratio:count");
  cl_cmd->add_option("--tol", cl.tol, "Harmonic threshold on the defect limits")->capture_default_str();
  cl_cmd->add_option("--parameter-rtol", cl.parameter_rtol, "Allowed parameter spread across points")
      ->capture_default_str();

  ConvergenceOptions cv;
  CLI::App* cv_cmd = app.add_subcommand("convergence", "Defects versus radius with extrapolation");
  add_common(cv_cmd, cv.common, "csv");
  add_field_options(cv_cmd, cv.field);
  cv_cmd->add_option("--point", cv.point, "Point, comma-separated")->required();
  cv_cmd->add_option("--geometry", cv.geometry, "ball, sphere or mixed")->capture_default_str();
  cv_cmd->add_option("--radii", cv.radii, "Radii list or start:ratio:count");
  cv_cmd->add_option("--min-order", cv.min_order, "Smallest acceptable convergence order")->capture_default_str();

  WosOptions ws;
  CLI::App* ws_cmd = app.add_subcommand("wos-solve", "Walk-on-spheres solver for laplacian(u) = mu^2 u");
  add_common(ws_cmd, ws.common, "csv");
  ws_cmd->add_option("--domain", ws.domain, "ball, box or shell")->capture_default_str();
  ws_cmd->add_option("--m", ws.m, "Dimension")->capture_default_str();
  ws_cmd->add_option("--center", ws.center, "Ball / outer shell center (default origin)");
  ws_cmd->add_option("--radius", ws.radius, "Ball / outer shell radius")->capture_default_str();
  ws_cmd->add_option("--lower", ws.lower, "Box lower corner (default -1)");
  ws_cmd->add_option("--upper", ws.upper, "Box upper corner (default 1)");
  ws_cmd->add_option("--inner-center", ws.inner_center, "Inner ball center of a shell (default origin)");
  ws_cmd->add_option("--inner-radius", ws.inner_radius, "Inner ball radius of a shell")->capture_default_str();
  ws_cmd->add_option("--boundary", ws.boundary, "Catalogue label or const:<value>")->capture_default_str();
  ws_cmd->add_option("--lambda", ws.lambda, "Metaharmonic parameter of the catalogue")->capture_default_str();
  ws_cmd->add_option("--point", ws.point, "Start point (default origin)");
  ws_cmd->add_option("--mu", ws.mu, "Equation parameter mu >= 0")->capture_default_str();
  ws_cmd->add_option("--walks", ws.walks, "Number of walks")->capture_default_str();
  ws_cmd->add_option("--epsilon", ws.epsilon, "Shell width (default 1e-4 * diameter)")->capture_default_str();
  ws_cmd->add_option("--max-steps", ws.max_steps, "Step limit per walk")->capture_default_str();
  ws_cmd->add_option("--seed", ws.seed, "Random seed")->capture_default_str();
  ws_cmd->add_option("--radius-fraction", ws.radius_fraction, "Step radius / boundary distance")
      ->capture_default_str();
  ws_cmd->add_option("--threads", ws.threads, "OpenMP threads (0 keeps the runtime default)")->capture_default_str();

  IdentityOptions id;
  CLI::App* id_cmd = app.add_subcommand("verify-identities", "Mixed-defect, shared-ratio and self-referential checks");
  add_common(id_cmd, id.common, "csv");
  id_cmd->add_option("--m", id.m, "Dimensions (2 and/or 3)")->capture_default_str();
  id_cmd->add_option("--mu", id.mu, "Panharmonic parameter of the catalogue")->capture_default_str();
  id_cmd->add_option("--lambda", id.lambda, "Metaharmonic parameter of the catalogue")->capture_default_str();
  id_cmd->add_option("--tol", id.tol, "Absolute tolerance of the residuals")->capture_default_str();
  id_cmd->add_option("--rel-tol", id.rel_tol, "Relative tolerance of the mixed defect")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("meanvalue");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*vc_cmd) return verify_coefficients(vc, *vc_cmd, out, err);
    if (*cl_cmd) return classify(cl, *cl_cmd, out);
    if (*cv_cmd) return convergence(cv, *cv_cmd, out);
    if (*ws_cmd) return wos_solve(ws, *ws_cmd, out);
    if (*id_cmd) return verify_identities(id, *id_cmd, out, err);
  } catch (const wos::AllWalksTruncated& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace meanvalue::cli
