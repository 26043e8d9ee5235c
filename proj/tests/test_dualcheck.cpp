#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "glueopt/dualcheck.hpp"

using namespace glueopt::dualcheck;
using glueopt::geometry::DomainSpec;
using glueopt::solver::SourceSpec;
using glueopt::solver::make_grid;
using glueopt::solver::rasterize_dirichlet;
using glueopt::solver::solve_membrane;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

glueopt::geometry::CurveNetwork segment_net(Point2 a, Point2 b) {
  glueopt::geometry::CurveNetwork net;
  net.nodes = {a, b};
  net.edges.push_back({0, 1, {a, b}});
  return net;
}
}  // namespace

TEST_CASE("gradient flux of a linear field is the constant slope") {
  auto dom = DomainSpec::disc({0, 0}, 1.0);
  auto grid = make_grid(dom, 0.125);
  ScalarField u(grid);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) u.at(i, j) = 3 * grid.x(i) - 2 * grid.y(j);
  auto g = gradient_flux(u);
  for (double v : g.ex) CHECK(v == Approx(3.0).epsilon(1e-12));
  for (double v : g.ey) CHECK(v == Approx(-2.0).epsilon(1e-12));
  auto n = negated(g);
  CHECK(n.ex[0] == Approx(-3.0).epsilon(1e-12));
  CHECK(n.ey[0] == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("hand-built flux sigma = (x, y) satisfies div sigma = 2 exactly") {
  auto dom = DomainSpec::disc({0, 0}, 1.0);
  auto grid = make_grid(dom, 0.1);
  VectorField sigma(grid);
  // exact midpoint samples: divergence differences recover 1 + 1
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i + 1 < grid.nx; ++i)
      sigma.ex[sigma.xid(i, j)] = grid.x(i) + 0.5 * grid.h;
  for (int j = 0; j + 1 < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      sigma.ey[sigma.yid(i, j)] = grid.y(j) + 0.5 * grid.h;

  auto mask = rasterize_dirichlet(grid, {}, dom, 0.05);
  ScalarField two(grid);
  for (auto& v : two.v) v = 2.0;
  CHECK(divergence_residual(sigma, two, mask) == Approx(0.0).epsilon(1e-12));
  // against the wrong load the residual is order one
  ScalarField one(grid);
  for (auto& v : one.v) v = 1.0;
  CHECK(divergence_residual(sigma, one, mask) == Approx(1.0).epsilon(0.5));
}

TEST_CASE("solved flux is divergence feasible to solver accuracy") {
  auto dom = DomainSpec::disc({0, 0}, 1.0);
  double h = 1.0 / 64;
  auto grid = make_grid(dom, h);
  auto net = segment_net({-1, 0}, {1, 0});
  auto mask = rasterize_dirichlet(grid, net, dom, 0.5 * h);
  auto f = SourceSpec::constant(1.0).sample(grid);
  auto u = solve_membrane(mask, f, 1e-10);
  auto sigma = negated(gradient_flux(u));
  CHECK(divergence_residual(sigma, f, mask) <= 1e-8);
  // the un-negated gradient is maximally infeasible instead
  CHECK(divergence_residual(gradient_flux(u), f, mask) > 1.0);
}

TEST_CASE("curl bumps are exactly divergence free at every node") {
  auto dom = DomainSpec::disc({0, 0}, 1.0);
  auto grid = make_grid(dom, 1.0 / 48);
  auto mask = rasterize_dirichlet(grid, {}, dom, 0.01);
  ScalarField zero(grid);
  for (Point2 c : {Point2{0, 0}, Point2{0.3, -0.2}, Point2{-0.4, 0.1}}) {
    auto p = curl_bump(grid, c, 0.25, 1.7);
    // div p == 0 tested against f == 0 (absolute residual)
    CHECK(divergence_residual(p, zero, mask) <= 1e-10);
    CHECK(flux_energy(p) > 0.0);
  }
}

TEST_CASE("flux energy is a norm: quadratic scaling and orthogonality") {
  auto dom = DomainSpec::disc({0, 0}, 1.0);
  double h = 1.0 / 64;
  auto grid = make_grid(dom, h);
  auto mask = rasterize_dirichlet(grid, {}, dom, 0.5 * h);
  auto f = SourceSpec::constant(1.0).sample(grid);
  auto u = solve_membrane(mask, f, 1e-10);
  auto sigma = negated(gradient_flux(u));
  double base = flux_energy(sigma);
  CHECK(base > 0.0);

  auto scaled = sigma;
  for (auto& v : scaled.ex) v *= 2;
  for (auto& v : scaled.ey) v *= 2;
  CHECK(flux_energy(scaled) == Approx(4 * base).epsilon(1e-12));

  // adding any admissible (divergence-free) perturbation only raises
  // the energy, and exactly by the perturbation's own energy
  for (int k = 0; k < 5; ++k) {
    double cx = 0.3 * std::cos(1.3 * k), cy = 0.3 * std::sin(2.1 * k);
    auto p = curl_bump(grid, {cx, cy}, 0.2 + 0.02 * k, 0.5 + 0.1 * k);
    auto sum = sigma;
    for (size_t i = 0; i < sum.ex.size(); ++i) sum.ex[i] += p.ex[i];
    for (size_t i = 0; i < sum.ey.size(); ++i) sum.ey[i] += p.ey[i];
    double ep = flux_energy(p);
    CHECK(ep > 0.0);
    CHECK(flux_energy(sum) >= base - 1e-12);
    CHECK(flux_energy(sum) == Approx(base + ep).epsilon(1e-6));
  }
}

TEST_CASE("duality report: near-zero gap and feasible flux on a solve") {
  auto dom = DomainSpec::disc({0, 0}, 1.0);
  Problem prob(dom, SourceSpec::constant(1.0), 0.25, 1.0 / 64);
  auto rep = duality_gap(prob, segment_net({-1, 0}, {1, 0}));
  CHECK(rep.compliance > 0.0);
  CHECK(rep.primal_energy == Approx(rep.compliance).epsilon(1e-8));
  CHECK(rep.dual_energy == Approx(rep.primal_energy).epsilon(1e-12));
  CHECK(rep.gap <= 1e-8);
  CHECK(rep.div_residual <= 1e-8);
  CHECK(rep.cg_iterations > 0);

  std::ostringstream os1, os2;
  write_dual_json(os1, rep);
  write_dual_json(os2, rep);
  CHECK(os1.str() == os2.str());
  CHECK(os1.str().find("\"div_residual\"") != std::string::npos);
}
