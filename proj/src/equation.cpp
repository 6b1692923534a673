#include "meanvalue/equation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace meanvalue {

std::string_view to_string(Geometry g) { return g == Geometry::Ball ? "ball" : "sphere"; }

Geometry parse_geometry(std::string_view text) {
  if (text == "ball") return Geometry::Ball;
  if (text == "sphere") return Geometry::Sphere;
  throw std::invalid_argument("unknown geometry '" + std::string(text) + "'");
}

EquationKind EquationKind::harmonic() { return {Tag::Harmonic, 0.0}; }

EquationKind EquationKind::metaharmonic(double lambda) {
  if (!std::isfinite(lambda) || lambda == 0.0)
    throw std::invalid_argument("metaharmonic parameter lambda must be finite and nonzero");
  return {Tag::Metaharmonic, lambda};
}

EquationKind EquationKind::panharmonic(double mu) {
  if (!std::isfinite(mu) || mu == 0.0)
    throw std::invalid_argument("panharmonic parameter mu must be finite and nonzero");
  return {Tag::Panharmonic, mu};
}

double EquationKind::signed_coefficient() const {
  switch (tag_) {
    case Tag::Panharmonic: return parameter_ * parameter_;
    case Tag::Metaharmonic: return -parameter_ * parameter_;
    case Tag::Harmonic: break;
  }
  return 0.0;
}

std::string EquationKind::name() const {
  switch (tag_) {
    case Tag::Panharmonic: return "panharmonic";
    case Tag::Metaharmonic: return "metaharmonic";
    case Tag::Harmonic: break;
  }
  return "harmonic";
}

std::string EquationKind::describe() const {
  if (tag_ == Tag::Harmonic) return name();
  std::ostringstream os;
  os << name() << '(' << (tag_ == Tag::Panharmonic ? "mu=" : "lambda=") << parameter_ << ')';
  return os.str();
}

}  // namespace meanvalue
