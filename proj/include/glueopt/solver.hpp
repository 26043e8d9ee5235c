#pragma once

// Membrane solves: -Δu = f on the free nodes of a masked grid with
// u = 0 on constrained nodes, via matrix-free Jacobi-preconditioned
// conjugate gradients.  Plus the energy bookkeeping built on top of u:
// compliance, the Dirichlet/load energy identity, local energies in
// balls, and one-sided normal derivative jumps across a segment.

#include <cstdint>
#include <vector>

#include "glueopt/grid.hpp"
#include "glueopt/source.hpp"

namespace glueopt::solver {

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;       // |b - A u|_2 / |b|_2 at exit
  bool converged = false;
};

inline constexpr double kDefaultCgTol = 1e-10;

// CG iteration cap is 50 * max(nx, ny).
ScalarField solve_membrane(const DirichletMask& mask, const ScalarField& f,
                           double cg_tol = kDefaultCgTol,
                           SolveStats* stats = nullptr);

// 1/2 sum f u h^2 over inside nodes (midpoint rule).
double compliance(const DirichletMask& mask, const ScalarField& u,
                  const ScalarField& f);

// 1/2 sum_edges (du/h)^2 h^2  -  sum_nodes f u h^2.  Equals -compliance
// at the discrete solution up to the CG residual.
double energy_value(const DirichletMask& mask, const ScalarField& u,
                    const ScalarField& f);

// sum over grid edges with midpoint in B_r(x) of (du/h)^2 h^2; the
// discrete Dirichlet energy localized to the ball.
double local_energy(const ScalarField& u, Point2 x, double r);

// One-sided normal derivative estimates along the segment [a, b].
// Samples sit at midpoints of n equal subintervals.  Each side is
// estimated first-order from the bilinear value at distance d along the
// left normal (d = h, escalated to 2h or 3h when the interpolation cell
// touches a constrained node; a sample is flagged and skipped when 3h
// is still blocked).  jump = (du+/dn)^2 - (du-/dn)^2 with + the left
// side.
struct JumpSamples {
  std::vector<Point2> pos;
  std::vector<double> t;          // arclength parameter of each sample
  std::vector<double> side_plus;  // |one-sided derivative| estimates
  std::vector<double> side_minus;
  std::vector<double> jump;
  std::vector<std::uint8_t> flagged;
  int valid_count() const;
};
JumpSamples normal_jump(const ScalarField& u, const DirichletMask& mask,
                        Point2 a, Point2 b, int samples);

}  // namespace glueopt::solver
