#include "glueopt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "glueopt/format.hpp"

namespace glueopt::solver {

using io::fmt17;

Grid make_grid(const DomainSpec& domain, double h) {
  if (!(h > 0)) throw std::runtime_error("make_grid: h must be positive");
  auto [lo, hi] = domain.bbox();
  Grid g;
  g.h = h;
  g.x0 = lo.x;
  g.y0 = lo.y;
  g.nx = (int)std::ceil((hi.x - lo.x) / h - 1e-9) + 1;
  g.ny = (int)std::ceil((hi.y - lo.y) / h - 1e-9) + 1;
  if (g.nx < 2 || g.ny < 2) throw std::runtime_error("make_grid: degenerate grid");
  if (g.nx > 4096 || g.ny > 4096)
    throw std::runtime_error("make_grid: grid larger than 4096 nodes per side");
  return g;
}

double ScalarField::interp(Point2 p) const {
  const Grid& g = grid;
  double fx = (p.x - g.x0) / g.h;
  double fy = (p.y - g.y0) / g.h;
  fx = std::clamp(fx, 0.0, double(g.nx - 1));
  fy = std::clamp(fy, 0.0, double(g.ny - 1));
  int i = std::min((int)fx, g.nx - 2);
  int j = std::min((int)fy, g.ny - 2);
  double tx = fx - i, ty = fy - j;
  return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
         (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

std::size_t DirichletMask::free_count() const {
  std::size_t n = 0;
  for (auto f : free_mask) n += f;
  return n;
}

DirichletMask rasterize_dirichlet(const Grid& grid, const CurveNetwork& net,
                                  const DomainSpec& domain, double tol) {
  DirichletMask m;
  m.grid = grid;
  m.inside.assign(grid.count(), 0);
  m.constrained.assign(grid.count(), 1);
  m.free_mask.assign(grid.count(), 0);

  // nodes within tol of the network, visiting only segment neighbourhoods
  std::vector<std::uint8_t> near_net(grid.count(), 0);
  for (const auto& e : net.edges)
    for (size_t s = 0; s + 1 < e.pts.size(); ++s) {
      Point2 a = e.pts[s], b = e.pts[s + 1];
      double lox = std::min(a.x, b.x) - tol, hix = std::max(a.x, b.x) + tol;
      double loy = std::min(a.y, b.y) - tol, hiy = std::max(a.y, b.y) + tol;
      int i0 = std::max(0, (int)std::ceil((lox - grid.x0) / grid.h));
      int i1 = std::min(grid.nx - 1, (int)std::floor((hix - grid.x0) / grid.h));
      int j0 = std::max(0, (int)std::ceil((loy - grid.y0) / grid.h));
      int j1 = std::min(grid.ny - 1, (int)std::floor((hiy - grid.y0) / grid.h));
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
          std::size_t id = grid.id(i, j);
          if (!near_net[id] && geometry::segment_distance(grid.at(i, j), a, b) < tol)
            near_net[id] = 1;
        }
    }

  double snap = kBoundarySnapFrac * grid.h;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      std::size_t id = grid.id(i, j);
      Point2 p = grid.at(i, j);
      bool in = domain.inside(p);
      m.inside[id] = in;
      bool con = !in || domain.boundary_distance(p) < snap || near_net[id];
      m.constrained[id] = con;
      m.free_mask[id] = in && !con;
    }
  return m;
}

void write_grid(std::ostream& os, const ScalarField& f) {
  const Grid& g = f.grid;
  os << "grid " << g.nx << " " << g.ny << " " << fmt17(g.x0) << " " << fmt17(g.y0)
     << " " << fmt17(g.h) << "\n";
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) os << " ";
      os << fmt17(f.at(i, j));
    }
    os << "\n";
  }
}

void write_grid_file(const std::string& path, const ScalarField& f) {
  std::ofstream os(path);
  if (!os) throw GridParseError("cannot open for writing: " + path);
  write_grid(os, f);
  if (!os) throw GridParseError("write failed: " + path);
}

ScalarField read_grid(std::istream& is) {
  std::string kw;
  Grid g;
  if (!(is >> kw) || kw != "grid" || !(is >> g.nx >> g.ny >> g.x0 >> g.y0 >> g.h))
    throw GridParseError("expected 'grid nx ny x0 y0 h'");
  if (g.nx < 2 || g.ny < 2 || !(g.h > 0)) throw GridParseError("bad grid header");
  ScalarField f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!(is >> f.at(i, j))) throw GridParseError("bad grid value");
  return f;
}

ScalarField read_grid_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw GridParseError("cannot open: " + path);
  try {
    return read_grid(is);
  } catch (const std::runtime_error& err) {
    throw GridParseError(path + ": " + err.what());
  }
}

}  // namespace glueopt::solver
