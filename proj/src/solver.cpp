#include "glueopt/solver.hpp"

#include <algorithm>
#include <cmath>

#include "glueopt/kernels.hpp"
#include "glueopt/problem.hpp"

namespace glueopt::solver {

ScalarField solve_membrane(const DirichletMask& mask, const ScalarField& f,
                           double cg_tol, SolveStats* stats) {
  const Grid& g = mask.grid;
  const std::size_t n = g.count();
  const std::uint8_t* free = mask.free_mask.data();
  const double jacobi = g.h * g.h / 4.0;  // inverse of the uniform diagonal

  ScalarField u(g);
  std::vector<double> b(n), r(n), z(n), p(n), ap(n);
  kernels::masked_scale(1.0, f.v.data(), free, b.data(), n);
  double bnorm = std::sqrt(kernels::dot(b.data(), b.data(), n));
  SolveStats st;
  if (bnorm == 0.0) {
    st.converged = true;
    if (stats) *stats = st;
    return u;
  }

  r = b;  // u starts at zero
  kernels::masked_scale(jacobi, r.data(), free, z.data(), n);
  p = z;
  double rz = kernels::dot(r.data(), z.data(), n);
  const int cap = 50 * std::max(g.nx, g.ny);
  double rnorm = bnorm;
  for (int k = 0; k < cap; ++k) {
    kernels::apply_laplacian(p.data(), free, g.nx, g.ny, g.h, ap.data());
    double pap = kernels::dot(p.data(), ap.data(), n);
    if (!(pap > 0)) break;  // numerically singular direction
    double alpha = rz / pap;
    kernels::axpy(alpha, p.data(), u.v.data(), n);
    kernels::axpy(-alpha, ap.data(), r.data(), n);
    st.iterations = k + 1;
    rnorm = std::sqrt(kernels::dot(r.data(), r.data(), n));
    if (rnorm <= cg_tol * bnorm) {
      st.converged = true;
      break;
    }
    kernels::masked_scale(jacobi, r.data(), free, z.data(), n);
    double rz_next = kernels::dot(r.data(), z.data(), n);
    kernels::xpay(rz_next / rz, z.data(), p.data(), n);
    rz = rz_next;
  }
  st.residual = rnorm / bnorm;
  if (stats) *stats = st;
  return u;
}

double compliance(const DirichletMask& mask, const ScalarField& u,
                  const ScalarField& f) {
  const Grid& g = mask.grid;
  // u vanishes on every constrained node, so the full-grid dot product
  // equals the sum over inside nodes
  return 0.5 * g.h * g.h * kernels::dot(f.v.data(), u.v.data(), g.count());
}

double energy_value(const DirichletMask& mask, const ScalarField& u,
                    const ScalarField& f) {
  const Grid& g = mask.grid;
  double ge = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      double d = u.at(i + 1, j) - u.at(i, j);
      ge += d * d;
    }
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double d = u.at(i, j + 1) - u.at(i, j);
      ge += d * d;
    }
  double load = g.h * g.h * kernels::dot(f.v.data(), u.v.data(), g.count());
  return 0.5 * ge - load;
}

double local_energy(const ScalarField& u, Point2 x, double r) {
  const Grid& g = u.grid;
  double r2 = r * r, acc = 0.0;
  int i0 = std::max(0, (int)std::floor((x.x - r - g.x0) / g.h) - 1);
  int i1 = std::min(g.nx - 1, (int)std::ceil((x.x + r - g.x0) / g.h) + 1);
  int j0 = std::max(0, (int)std::floor((x.y - r - g.y0) / g.h) - 1);
  int j1 = std::min(g.ny - 1, (int)std::ceil((x.y + r - g.y0) / g.h) + 1);
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      if (i + 1 <= i1 && i + 1 < g.nx) {
        Point2 m{g.x(i) + 0.5 * g.h, g.y(j)};
        if (geometry::dot(m - x, m - x) <= r2) {
          double d = u.at(i + 1, j) - u.at(i, j);
          acc += d * d;
        }
      }
      if (j + 1 <= j1 && j + 1 < g.ny) {
        Point2 m{g.x(i), g.y(j) + 0.5 * g.h};
        if (geometry::dot(m - x, m - x) <= r2) {
          double d = u.at(i, j + 1) - u.at(i, j);
          acc += d * d;
        }
      }
    }
  return acc;
}

int JumpSamples::valid_count() const {
  int n = 0;
  for (auto f : flagged) n += !f;
  return n;
}

namespace {
// true when the bilinear cell containing p consists of free nodes only
bool cell_free(const DirichletMask& mask, Point2 p) {
  const Grid& g = mask.grid;
  double fx = (p.x - g.x0) / g.h;
  double fy = (p.y - g.y0) / g.h;
  if (fx < 0 || fy < 0 || fx > g.nx - 1 || fy > g.ny - 1) return false;
  int i = std::min((int)fx, g.nx - 2);
  int j = std::min((int)fy, g.ny - 2);
  return mask.free_mask[g.id(i, j)] && mask.free_mask[g.id(i + 1, j)] &&
         mask.free_mask[g.id(i, j + 1)] && mask.free_mask[g.id(i + 1, j + 1)];
}
}  // namespace

JumpSamples normal_jump(const ScalarField& u, const DirichletMask& mask,
                        Point2 a, Point2 b, int samples) {
  const double h = u.grid.h;
  Point2 tang = geometry::normalized(b - a);
  Point2 nrm = geometry::perp(tang);
  double len = geometry::dist(a, b);
  JumpSamples out;
  for (int s = 0; s < samples; ++s) {
    double t = (s + 0.5) / samples;
    Point2 pos = a + t * (b - a);
    out.pos.push_back(pos);
    out.t.push_back(t * len);
    double d = 0;
    for (int mult = 1; mult <= 3; ++mult) {
      double cand = mult * h;
      if (cell_free(mask, pos + cand * nrm) && cell_free(mask, pos - cand * nrm)) {
        d = cand;
        break;
      }
    }
    if (d == 0) {
      out.side_plus.push_back(0);
      out.side_minus.push_back(0);
      out.jump.push_back(0);
      out.flagged.push_back(1);
      continue;
    }
    double up = std::abs(u.interp(pos + d * nrm)) / d;
    double um = std::abs(u.interp(pos - d * nrm)) / d;
    out.side_plus.push_back(up);
    out.side_minus.push_back(um);
    out.jump.push_back(up * up - um * um);
    out.flagged.push_back(0);
  }
  return out;
}

// ---- problem ----------------------------------------------------------

Problem::Problem(DomainSpec domain, SourceSpec source, double lambda, double h,
                 double cg_tol)
    : domain_(std::move(domain)), source_(std::move(source)), lambda_(lambda),
      h_(h), cg_tol_(cg_tol) {
  if (!(lambda_ >= 0)) throw std::runtime_error("problem: lambda must be >= 0");
  grid_ = make_grid(domain_, h_);
  f_ = source_.sample(grid_);
}

Evaluation evaluate_functional(const Problem& problem,
                               const geometry::CurveNetwork& net) {
  if (!net.empty()) {
    net.validate();
    if (!geometry::is_connected(net))
      throw std::runtime_error("evaluate_functional: network not connected");
    for (const auto& e : net.edges)
      for (const auto& p : e.pts)
        if (!problem.domain().inside_closed(p))
          throw std::runtime_error("evaluate_functional: network leaves the domain");
  }
  Evaluation ev;
  ev.mask = rasterize_dirichlet(problem.grid(), net, problem.domain(),
                                problem.snap_tol());
  ev.u = solve_membrane(ev.mask, problem.f(), problem.cg_tol(), &ev.stats);
  ev.compliance = compliance(ev.mask, ev.u, problem.f());
  ev.energy = energy_value(ev.mask, ev.u, problem.f());
  ev.length = geometry::total_length(net);
  ev.value = ev.compliance + problem.lambda() * ev.length;
  return ev;
}

}  // namespace glueopt::solver
