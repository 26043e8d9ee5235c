#pragma once

// A problem instance: the domain, the load, the length penalty and the
// discretization parameters, with cached grid/source samples, plus the
// penalized-functional evaluation shared by the diagnostics and the
// optimizer.

#include <memory>

#include "glueopt/solver.hpp"

namespace glueopt::solver {

class Problem {
 public:
  Problem(DomainSpec domain, SourceSpec source, double lambda, double h,
          double cg_tol = kDefaultCgTol);

  const DomainSpec& domain() const { return domain_; }
  const SourceSpec& source() const { return source_; }
  double lambda() const { return lambda_; }
  double h() const { return h_; }
  double cg_tol() const { return cg_tol_; }
  double snap_tol() const { return 0.5 * h_; }
  const Grid& grid() const { return grid_; }
  const ScalarField& f() const { return f_; }

 private:
  DomainSpec domain_;
  SourceSpec source_;
  double lambda_;
  double h_;
  double cg_tol_;
  Grid grid_;
  ScalarField f_;
};

struct Evaluation {
  ScalarField u;
  DirichletMask mask;
  SolveStats stats;
  double compliance = 0.0;
  double energy = 0.0;
  double length = 0.0;
  double value = 0.0;  // compliance + lambda * length
};

// Solve and assemble the penalized value.  Throws when the network is
// invalid for the problem: disconnected or not inside the closed
// domain.  An empty network is allowed.
Evaluation evaluate_functional(const Problem& problem,
                               const geometry::CurveNetwork& net);

}  // namespace glueopt::solver
