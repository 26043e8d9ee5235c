#include "glueopt/source.hpp"

#include <cmath>
#include <sstream>

#include "glueopt/format.hpp"

namespace glueopt::solver {

using io::fmt17;

SourceSpec SourceSpec::constant(double value, double p) {
  if (!(p > 2)) throw std::runtime_error("source: exponent p must exceed 2");
  SourceSpec s;
  s.data_ = Constant{value};
  s.p_ = p;
  return s;
}

SourceSpec SourceSpec::gaussians(std::vector<GaussianBump> bumps, double p) {
  if (!(p > 2)) throw std::runtime_error("source: exponent p must exceed 2");
  for (const auto& b : bumps)
    if (!(b.width > 0)) throw std::runtime_error("source: bump width must be positive");
  SourceSpec s;
  s.data_ = Bumps{std::move(bumps)};
  s.p_ = p;
  return s;
}

SourceSpec SourceSpec::grid_file(const std::string& path, double p) {
  if (!(p > 2)) throw std::runtime_error("source: exponent p must exceed 2");
  SourceSpec s;
  s.data_ = FromGrid{path, read_grid_file(path)};
  s.p_ = p;
  return s;
}

double SourceSpec::eval(Point2 x) const {
  if (const auto* c = std::get_if<Constant>(&data_)) return c->value;
  if (const auto* g = std::get_if<Bumps>(&data_)) {
    double v = 0;
    for (const auto& b : g->bumps) {
      double d2 = geometry::dot(x - b.center, x - b.center);
      v += b.amplitude * std::exp(-d2 / (2 * b.width * b.width));
    }
    return v;
  }
  return std::get<FromGrid>(data_).field.interp(x);
}

ScalarField SourceSpec::sample(const Grid& grid) const {
  ScalarField f(grid);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) f.at(i, j) = eval(grid.at(i, j));
  return f;
}

std::string SourceSpec::describe() const {
  std::ostringstream os;
  if (const auto* c = std::get_if<Constant>(&data_)) {
    os << "constant " << fmt17(c->value);
  } else if (const auto* g = std::get_if<Bumps>(&data_)) {
    os << "gaussian";
    for (const auto& b : g->bumps)
      os << " " << fmt17(b.center.x) << " " << fmt17(b.center.y) << " "
         << fmt17(b.amplitude) << " " << fmt17(b.width);
  } else {
    os << "grid " << std::get<FromGrid>(data_).path;
  }
  return os.str();
}

}  // namespace glueopt::solver
