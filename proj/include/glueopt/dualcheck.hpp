#pragma once

// Flux-side certificates: staggered gradients, discrete divergence
// feasibility, curl perturbations (exactly divergence-free), and the
// primal/dual energy gap of a solved instance.

#include <iosfwd>

#include "glueopt/problem.hpp"

namespace glueopt::dualcheck {

using geometry::CurveNetwork;
using geometry::Point2;
using solver::DirichletMask;
using solver::Grid;
using solver::Problem;
using solver::ScalarField;
using solver::VectorField;

// Staggered first differences of u (components on edge midpoints).
VectorField gradient_flux(const ScalarField& u);

VectorField negated(const VectorField& v);

// l2 over free nodes of (div sigma - f), relative to l2 of f there.
double divergence_residual(const VectorField& sigma, const ScalarField& f,
                           const DirichletMask& mask);

// 1/2 sum |sigma|^2 h^2 over all staggered edges.
double flux_energy(const VectorField& sigma);

// Smooth compactly supported stream-function bump mounted on cell
// centers; its rotated differences have exactly zero discrete
// divergence at every node.
VectorField curl_bump(const Grid& grid, Point2 center, double radius,
                      double strength);

struct DualReport {
  double compliance = 0.0;
  double primal_energy = 0.0;  // 1/2 sum (du/h)^2 h^2 (edge form)
  double dual_energy = 0.0;    // 1/2 sum |sigma|^2 h^2, sigma = -grad u
  double gap = 0.0;            // |primal_energy - compliance|
  double div_residual = 0.0;   // feasibility of sigma = -grad u
  int cg_iterations = 0;
  double cg_residual = 0.0;
};

// Solve the instance, form the feasible flux sigma = -grad u (the sign
// for which div sigma = f holds discretely) and report energies and
// residuals.
DualReport duality_gap(const Problem& problem, const CurveNetwork& net);

void write_dual_json(std::ostream& os, const DualReport& rep);

}  // namespace glueopt::dualcheck
