#pragma once

// Structure probes of a solved instance: localized energy growth
// profiles, lower bounds on the rescaled neighbourhood energy via
// explicit competitor networks, crack-tip reference fields, and local
// type classification from circle crossings, flatness and energy.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "glueopt/problem.hpp"
#include "glueopt/surgery.hpp"

namespace glueopt::diagnostics {

using geometry::CurveNetwork;
using geometry::DomainSpec;
using geometry::Point2;
using solver::DirichletMask;
using solver::Grid;
using solver::Problem;
using solver::ScalarField;

// ---- localized energy growth ----------------------------------------

// Sampled r -> G(r)/r^alpha + c_fit * r^(2/p' - alpha) with
// G(r) = local_energy(u, x, r) and p' = p/(p-1).  gamma is the measured
// free-arc bound; the exponent uses gamma_used = max(gamma, pi*p'), the
// smallest arc bound for which the profile inequality carries a
// positive-exponent source correction (below it no nonnegative c_fit
// can exist).  c_fit is the smallest nonnegative constant making the
// profile nondecreasing over the smallest quarter of the radii
// (reported, never assumed).
struct MonotonicityProfile {
  double gamma = 0.0;
  double gamma_used = 0.0;
  double alpha = 0.0;
  double fit_exponent = 0.0;
  double c_fit = 0.0;
  bool unreliable = false;  // some sampled circle met neither net nor boundary
  std::vector<double> radii;
  std::vector<double> g;       // local energies
  std::vector<double> values;  // profile samples
};

MonotonicityProfile monotonicity_profile(const ScalarField& u, const CurveNetwork& net,
                                         const DomainSpec& domain, Point2 x,
                                         std::vector<double> radii, double p);

// ---- competitor-based energy lower bound -----------------------------

// Lower bound for the best rescaled ball energy over admissible local
// rewirings of the network: max over {keep, chord (two crossings only),
// circle wall} of (1/r) * local energy of the re-solved field.
struct OmegaBound {
  double value = 0.0;
  double identity = 0.0;
  double chord = 0.0;
  double wall = 0.0;
  bool chord_tried = false;
  bool wall_tried = false;
  std::string winner = "identity";
};

OmegaBound omega_lower_bound(const Problem& problem, const CurveNetwork& net,
                             Point2 x, double r);

// ---- crack-tip reference field ---------------------------------------

// u(r, theta) = sqrt(r / 2 pi) cos(theta / 2) about the tip, theta = 0
// on the ray opposite `direction` and the branch cut (u = 0) along
// `direction`.
double cracktip_value(Point2 tip, Point2 direction, Point2 p);
// Node samples, zeroed outside the domain.
ScalarField cracktip_field(const Grid& grid, const DomainSpec& domain, Point2 tip,
                           Point2 direction);

// ---- local type classification ---------------------------------------

enum class BlowupClass { Regular, Triple, Endpoint, BoundaryTangent, Unclassified };
const char* to_string(BlowupClass c);

struct BlowupRadiusRow {
  double r = 0.0;
  int branches = -1;
  bool degenerate = false;  // crossing count unstable under perturbation
  double beta = 0.0;
  double energy = 0.0;
  double e_over_r = 0.0;
};

struct BlowupReport {
  BlowupClass cls = BlowupClass::Unclassified;
  double e_x = 0.0;  // median of e_over_r at the two smallest radii
  double boundary_dist = 0.0;
  double touch_angle = -1.0;  // radians; set for BoundaryTangent
  std::array<double, 3> angles{};  // set for Triple
  bool has_angles = false;
  std::vector<BlowupRadiusRow> rows;
};

// Classification thresholds.
inline constexpr double kEndpointEnergyMin = 0.1;
inline constexpr double kRegularBetaMax = 0.15;
inline constexpr double kTripleAngleTolDeg = 25.0;

BlowupReport blowup_classify(const ScalarField& u, const CurveNetwork& net,
                             const DomainSpec& domain, Point2 x,
                             std::vector<double> radii);

// Angles between consecutive incident edge directions at a degree-3
// node, sorted ascending (sum 2 pi).
std::array<double, 3> triple_angles(const CurveNetwork& net, int node);

// Angle in [0, pi/2] between the end segment at a network tip touching
// the domain boundary and the boundary tangent there.
double boundary_touch_angle(const CurveNetwork& net, const DomainSpec& domain,
                            Point2 tip);

// ---- aggregated report ------------------------------------------------

struct ProbeDiagnostics {
  Point2 x;
  MonotonicityProfile profile;
  BlowupReport blowup;
  OmegaBound omega;
  bool omega_computed = false;
  std::vector<double> density;  // per radius
};

struct DiagnosticsReport {
  double h = 0.0, lambda = 0.0, p = 0.0, cg_tol = 0.0;
  double compliance = 0.0, energy = 0.0, length = 0.0;
  int cg_iterations = 0;
  double cg_residual = 0.0;
  bool connected = false, has_loop = false;
  double chord_arc = 0.0;
  std::vector<double> radii;
  std::vector<ProbeDiagnostics> probes;
};

DiagnosticsReport run_diagnostics(const Problem& problem, const CurveNetwork& net,
                                  const std::vector<Point2>& probes,
                                  const std::vector<double>& radii, bool with_omega);

// Stable row-per-(probe, radius) CSV and a structured JSON summary.
// Numbers print with 17 significant digits; reruns on identical state
// are byte-identical.
void write_diagnostics_csv(std::ostream& os, const DiagnosticsReport& rep);
void write_diagnostics_json(std::ostream& os, const DiagnosticsReport& rep);

}  // namespace glueopt::diagnostics
