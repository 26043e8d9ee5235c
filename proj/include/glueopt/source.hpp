#pragma once

// Load (right-hand side) descriptions: constant, a sum of Gaussian
// bumps, or resampled from a grid file.  The integrability exponent p
// must exceed 2; it feeds the monotonicity diagnostics.

#include <string>
#include <variant>
#include <vector>

#include "glueopt/grid.hpp"

namespace glueopt::solver {

struct GaussianBump {
  Point2 center;
  double amplitude = 1.0;
  double width = 0.1;  // standard deviation
};

class SourceSpec {
 public:
  static SourceSpec constant(double value, double p = 4.0);
  static SourceSpec gaussians(std::vector<GaussianBump> bumps, double p = 4.0);
  // Bilinear resampling of a stored field.
  static SourceSpec grid_file(const std::string& path, double p = 4.0);

  double p() const { return p_; }
  double eval(Point2 x) const;
  // Pointwise node samples on a grid (zero outside handled by masks).
  ScalarField sample(const Grid& grid) const;
  std::string describe() const;

 private:
  SourceSpec() = default;
  struct Constant { double value; };
  struct Bumps { std::vector<GaussianBump> bumps; };
  struct FromGrid { std::string path; ScalarField field; };
  std::variant<Constant, Bumps, FromGrid> data_{Constant{1.0}};
  double p_ = 4.0;
};

}  // namespace glueopt::solver
