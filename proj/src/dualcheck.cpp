#include "glueopt/dualcheck.hpp"

#include <cmath>
#include <ostream>

#include "glueopt/format.hpp"

namespace glueopt::dualcheck {

using io::fmt17;

VectorField gradient_flux(const ScalarField& u) {
  const Grid& g = u.grid;
  VectorField v(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i)
      v.ex[v.xid(i, j)] = (u.at(i + 1, j) - u.at(i, j)) / g.h;
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      v.ey[v.yid(i, j)] = (u.at(i, j + 1) - u.at(i, j)) / g.h;
  return v;
}

VectorField negated(const VectorField& v) {
  VectorField out = v;
  for (auto& e : out.ex) e = -e;
  for (auto& e : out.ey) e = -e;
  return out;
}

double divergence_residual(const VectorField& sigma, const ScalarField& f,
                           const DirichletMask& mask) {
  const Grid& g = mask.grid;
  double num = 0, den = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!mask.free_mask[g.id(i, j)]) continue;
      // free nodes never sit on the grid border, all four edges exist
      double div = (sigma.ex[sigma.xid(i, j)] - sigma.ex[sigma.xid(i - 1, j)] +
                    sigma.ey[sigma.yid(i, j)] - sigma.ey[sigma.yid(i, j - 1)]) /
                   g.h;
      double d = div - f.at(i, j);
      num += d * d;
      den += f.at(i, j) * f.at(i, j);
    }
  if (den == 0) return std::sqrt(num);
  return std::sqrt(num / den);
}

double flux_energy(const VectorField& sigma) {
  double acc = 0;
  for (double e : sigma.ex) acc += e * e;
  for (double e : sigma.ey) acc += e * e;
  return 0.5 * acc * sigma.grid.h * sigma.grid.h;
}

VectorField curl_bump(const Grid& grid, Point2 center, double radius,
                      double strength) {
  if (!(radius > 0)) throw std::runtime_error("curl_bump: radius must be positive");
  // stream function on cell centers, zero outside |p - center| < radius
  int cw = grid.nx - 1, ch = grid.ny - 1;
  std::vector<double> psi((std::size_t)cw * ch, 0.0);
  for (int j = 0; j < ch; ++j)
    for (int i = 0; i < cw; ++i) {
      Point2 c{grid.x0 + (i + 0.5) * grid.h, grid.y0 + (j + 0.5) * grid.h};
      double t2 = geometry::dot(c - center, c - center) / (radius * radius);
      if (t2 < 1.0)
        psi[(std::size_t)j * cw + i] = strength * std::exp(-1.0 / (1.0 - t2));
    }
  auto at = [&](int i, int j) -> double {
    if (i < 0 || i >= cw || j < 0 || j >= ch) return 0.0;
    return psi[(std::size_t)j * cw + i];
  };
  VectorField v(grid);
  // sigma = (d psi / dy, -d psi / dx): rotated cell differences; the
  // node divergence telescopes to exactly zero
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i + 1 < grid.nx; ++i)
      v.ex[v.xid(i, j)] = (at(i, j) - at(i, j - 1)) / grid.h;
  for (int j = 0; j + 1 < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      v.ey[v.yid(i, j)] = -(at(i, j) - at(i - 1, j)) / grid.h;
  return v;
}

DualReport duality_gap(const Problem& problem, const CurveNetwork& net) {
  auto ev = solver::evaluate_functional(problem, net);
  VectorField grad = gradient_flux(ev.u);
  VectorField sigma = negated(grad);
  DualReport rep;
  rep.compliance = ev.compliance;
  rep.primal_energy = flux_energy(grad);
  rep.dual_energy = flux_energy(sigma);
  rep.gap = std::abs(rep.primal_energy - rep.compliance);
  rep.div_residual = divergence_residual(sigma, problem.f(), ev.mask);
  rep.cg_iterations = ev.stats.iterations;
  rep.cg_residual = ev.stats.residual;
  return rep;
}

void write_dual_json(std::ostream& os, const DualReport& rep) {
  os << "{\n";
  os << "  \"compliance\": " << fmt17(rep.compliance) << ",\n";
  os << "  \"primal_energy\": " << fmt17(rep.primal_energy) << ",\n";
  os << "  \"dual_energy\": " << fmt17(rep.dual_energy) << ",\n";
  os << "  \"gap\": " << fmt17(rep.gap) << ",\n";
  os << "  \"div_residual\": " << fmt17(rep.div_residual) << ",\n";
  os << "  \"cg_iterations\": " << rep.cg_iterations << ",\n";
  os << "  \"cg_residual\": " << fmt17(rep.cg_residual) << "\n";
  os << "}\n";
}

}  // namespace glueopt::dualcheck
