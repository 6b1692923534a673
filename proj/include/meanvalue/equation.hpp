#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace meanvalue {

using Point = std::vector<double>;

/// Averaging geometry for a mean value: the open ball or its bounding sphere.
enum class Geometry { Ball, Sphere };

std::string_view to_string(Geometry g);
Geometry parse_geometry(std::string_view text);

/// The equation a field may satisfy:
///   Harmonic       laplacian(u) = 0
///   Metaharmonic   laplacian(u) + lambda^2 u = 0   (Helmholtz)
///   Panharmonic    laplacian(u) - mu^2 u = 0       (modified Helmholtz / Yukawa)
/// Meta- and panharmonic parameters must be finite and nonzero.
class EquationKind {
 public:
  enum class Tag { Harmonic, Metaharmonic, Panharmonic };

  static EquationKind harmonic();
  static EquationKind metaharmonic(double lambda);
  static EquationKind panharmonic(double mu);

  Tag tag() const { return tag_; }
  double parameter() const { return parameter_; }

  // +mu^2, -lambda^2, or 0; the factor c in laplacian(u) = c u.
  double signed_coefficient() const;

  std::string name() const;
  std::string describe() const;

  bool operator==(const EquationKind&) const = default;

 private:
  EquationKind(Tag tag, double parameter) : tag_(tag), parameter_(parameter) {}

  Tag tag_;
  double parameter_;
};

}  // namespace meanvalue
