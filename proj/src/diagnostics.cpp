#include "glueopt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "glueopt/format.hpp"

namespace glueopt::diagnostics {

using io::fmt17;

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---- localized energy growth ----------------------------------------

MonotonicityProfile monotonicity_profile(const ScalarField& u, const CurveNetwork& net,
                                         const DomainSpec& domain, Point2 x,
                                         std::vector<double> radii, double p) {
  if (radii.size() < 2)
    throw std::runtime_error("monotonicity_profile: need at least 2 radii");
  std::sort(radii.begin(), radii.end());
  if (!(radii.front() > 0))
    throw std::runtime_error("monotonicity_profile: radii must be positive");
  if (!(p > 2)) throw std::runtime_error("monotonicity_profile: p must exceed 2");

  MonotonicityProfile prof;
  auto gr = geometry::gamma_sup(net, domain, x, radii.front(), radii.back());
  prof.gamma = gr.gamma;
  prof.unreliable = gr.circle_missed;
  double pprime = p / (p - 1);
  prof.gamma_used = std::max(prof.gamma, kPi * pprime);
  prof.alpha = 2 * kPi / prof.gamma_used;
  prof.fit_exponent = 2 / pprime - prof.alpha;
  prof.radii = radii;
  for (double r : radii) prof.g.push_back(solver::local_energy(u, x, r));

  if (prof.fit_exponent > 0) {
    // smallest nonnegative c making the first quarter of steps
    // nondecreasing
    size_t m = std::max<size_t>(2, (radii.size() + 3) / 4);
    m = std::min(m, radii.size());
    for (size_t i = 0; i + 1 < m; ++i) {
      double q = prof.fit_exponent;
      double lhs = std::pow(radii[i + 1], q) - std::pow(radii[i], q);
      double need = prof.g[i] / std::pow(radii[i], prof.alpha) -
                    prof.g[i + 1] / std::pow(radii[i + 1], prof.alpha);
      if (lhs > 0) prof.c_fit = std::max(prof.c_fit, need / lhs);
    }
    prof.c_fit = std::max(prof.c_fit, 0.0);
  }
  for (size_t i = 0; i < radii.size(); ++i)
    prof.values.push_back(prof.g[i] / std::pow(radii[i], prof.alpha) +
                          prof.c_fit * std::pow(radii[i], prof.fit_exponent));
  return prof;
}

// ---- competitor-based energy lower bound -----------------------------

OmegaBound omega_lower_bound(const Problem& problem, const CurveNetwork& net,
                             Point2 x, double r) {
  const double merge_tol = 1e-9;
  OmegaBound ob;
  auto local = [&](const CurveNetwork& candidate) {
    auto ev = solver::evaluate_functional(problem, candidate);
    return solver::local_energy(ev.u, x, r) / r;
  };
  ob.identity = local(net);
  ob.value = ob.identity;

  if (auto chord = geometry::chord_replace(net, x, r, merge_tol)) {
    try {
      ob.chord = local(*chord);
      ob.chord_tried = true;
      if (ob.chord > ob.value) {
        ob.value = ob.chord;
        ob.winner = "chord";
      }
    } catch (const std::runtime_error&) {
    }
  }
  double seg_len = std::max(problem.h(), r / 16);
  if (auto wall = geometry::circle_wall_replace(net, problem.domain(), x, r,
                                                seg_len, merge_tol)) {
    try {
      ob.wall = local(*wall);
      ob.wall_tried = true;
      if (ob.wall > ob.value) {
        ob.value = ob.wall;
        ob.winner = "wall";
      }
    } catch (const std::runtime_error&) {
    }
  }
  return ob;
}

// ---- crack-tip reference field ---------------------------------------

double cracktip_value(Point2 tip, Point2 direction, Point2 p) {
  Point2 d = geometry::normalized(direction);
  Point2 w = p - tip;
  double r = geometry::norm(w);
  if (r == 0) return 0.0;
  // polar angle about the ray opposite `direction`; the cut sits at
  // theta = +-pi, i.e. along `direction`
  Point2 back{-d.x, -d.y};
  double theta = std::atan2(geometry::cross(back, w), geometry::dot(back, w));
  return std::sqrt(r / (2 * kPi)) * std::cos(0.5 * theta);
}

ScalarField cracktip_field(const Grid& grid, const DomainSpec& domain, Point2 tip,
                           Point2 direction) {
  ScalarField f(grid);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      Point2 p = grid.at(i, j);
      f.at(i, j) = domain.inside_closed(p) ? cracktip_value(tip, direction, p) : 0.0;
    }
  return f;
}

// ---- local type classification ---------------------------------------

const char* to_string(BlowupClass c) {
  switch (c) {
    case BlowupClass::Regular: return "regular";
    case BlowupClass::Triple: return "triple";
    case BlowupClass::Endpoint: return "endpoint";
    case BlowupClass::BoundaryTangent: return "boundary_tangent";
    case BlowupClass::Unclassified: return "unclassified";
  }
  return "unclassified";
}

std::array<double, 3> triple_angles(const CurveNetwork& net, int node) {
  if (node < 0 || node >= (int)net.nodes.size())
    throw std::runtime_error("triple_angles: bad node index");
  std::vector<double> dirs;
  for (const auto& e : net.edges) {
    if (e.a == node) dirs.push_back(std::atan2(e.pts[1].y - e.pts[0].y,
                                               e.pts[1].x - e.pts[0].x));
    if (e.b == node) {
      size_t k = e.pts.size();
      dirs.push_back(std::atan2(e.pts[k - 2].y - e.pts[k - 1].y,
                                e.pts[k - 2].x - e.pts[k - 1].x));
    }
  }
  if (dirs.size() != 3)
    throw std::runtime_error("triple_angles: node degree is not 3");
  std::sort(dirs.begin(), dirs.end());
  std::array<double, 3> gaps{dirs[1] - dirs[0], dirs[2] - dirs[1],
                             2 * kPi - (dirs[2] - dirs[0])};
  std::sort(gaps.begin(), gaps.end());
  return gaps;
}

double boundary_touch_angle(const CurveNetwork& net, const DomainSpec& domain,
                            Point2 tip) {
  // locate the tip node and its single end segment
  const double tol = 1e-9;
  Point2 seg_dir{0, 0};
  int found = 0;
  for (const auto& e : net.edges) {
    if (geometry::dist(e.pts.front(), tip) <= tol) {
      seg_dir = e.pts[1] - e.pts[0];
      ++found;
    }
    if (geometry::dist(e.pts.back(), tip) <= tol) {
      size_t k = e.pts.size();
      seg_dir = e.pts[k - 2] - e.pts[k - 1];
      ++found;
    }
  }
  if (found != 1)
    throw std::runtime_error("boundary_touch_angle: point is not a degree-1 tip");
  Point2 tangent;
  if (domain.is_disc()) {
    tangent = geometry::perp(geometry::normalized(tip - domain.center()));
  } else {
    const auto& v = domain.vertices();
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < v.size(); ++i) {
      Point2 a = v[i], b = v[(i + 1) % v.size()];
      double d = geometry::segment_distance(tip, a, b);
      if (d < best) {
        best = d;
        tangent = b - a;
      }
    }
  }
  double c = std::abs(geometry::dot(geometry::normalized(seg_dir),
                                    geometry::normalized(tangent)));
  return std::acos(std::clamp(c, 0.0, 1.0));
}

BlowupReport blowup_classify(const ScalarField& u, const CurveNetwork& net,
                             const DomainSpec& domain, Point2 x,
                             std::vector<double> radii) {
  if (radii.empty()) throw std::runtime_error("blowup_classify: no radii");
  std::sort(radii.begin(), radii.end());
  BlowupReport rep;
  rep.boundary_dist = domain.boundary_distance(x);

  for (double r : radii) {
    BlowupRadiusRow row;
    row.r = r;
    row.degenerate = true;
    for (double factor : {1.0, 1.0 + 1e-3, 1.0 - 1e-3, 1.0 + 3e-3, 1.0 - 3e-3}) {
      try {
        row.branches = geometry::branch_count(net, x, r * factor);
        row.degenerate = false;
        break;
      } catch (const geometry::DegenerateCrossing&) {
      }
    }
    try {
      row.beta = geometry::flatness(net, x, r);
    } catch (const std::runtime_error&) {
      row.beta = -1.0;  // ball misses the network
    }
    row.energy = solver::local_energy(u, x, r);
    row.e_over_r = row.energy / r;
    rep.rows.push_back(row);
  }

  size_t n2 = std::min<size_t>(2, rep.rows.size());
  double acc = 0;
  for (size_t i = 0; i < n2; ++i) acc += rep.rows[i].e_over_r;
  rep.e_x = acc / n2;

  // consensus branch count over stable rows (ties go to the smallest radius)
  int consensus = -1;
  {
    std::vector<int> counts;
    for (const auto& row : rep.rows)
      if (!row.degenerate) counts.push_back(row.branches);
    if (!counts.empty()) {
      int best_votes = 0;
      for (int c : counts) {
        int votes = (int)std::count(counts.begin(), counts.end(), c);
        if (votes > best_votes) {
          best_votes = votes;
          consensus = c;
        }
      }
    }
  }
  double beta_min = std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows)
    if (row.beta >= 0) beta_min = std::min(beta_min, row.beta);

  if (rep.boundary_dist < radii.back()) {
    rep.cls = BlowupClass::BoundaryTangent;
    try {
      rep.touch_angle = boundary_touch_angle(net, domain, x);
    } catch (const std::runtime_error&) {
      rep.touch_angle = -1.0;
    }
  } else if (consensus == 1 && rep.e_x >= kEndpointEnergyMin) {
    rep.cls = BlowupClass::Endpoint;
  } else if (consensus == 2 && beta_min <= kRegularBetaMax) {
    rep.cls = BlowupClass::Regular;
  } else if (consensus == 3) {
    // need an actual degree-3 node at the probe
    int node = -1;
    for (int i = 0; i < (int)net.nodes.size(); ++i)
      if (geometry::dist(net.nodes[i], x) <= radii.front() &&
          (node < 0 || geometry::dist(net.nodes[i], x) <
                           geometry::dist(net.nodes[node], x)))
        node = i;
    if (node >= 0) {
      try {
        auto gaps = triple_angles(net, node);
        rep.angles = gaps;
        rep.has_angles = true;
        bool ok = true;
        for (double g : gaps)
          ok = ok && std::abs(g - 2 * kPi / 3) <= kTripleAngleTolDeg * kPi / 180;
        if (ok) rep.cls = BlowupClass::Triple;
      } catch (const std::runtime_error&) {
      }
    }
  }
  return rep;
}

// ---- aggregated report ------------------------------------------------

DiagnosticsReport run_diagnostics(const Problem& problem, const CurveNetwork& net,
                                  const std::vector<Point2>& probes,
                                  const std::vector<double>& radii, bool with_omega) {
  auto ev = solver::evaluate_functional(problem, net);
  DiagnosticsReport rep;
  rep.h = problem.h();
  rep.lambda = problem.lambda();
  rep.p = problem.source().p();
  rep.cg_tol = problem.cg_tol();
  rep.compliance = ev.compliance;
  rep.energy = ev.energy;
  rep.length = ev.length;
  rep.cg_iterations = ev.stats.iterations;
  rep.cg_residual = ev.stats.residual;
  rep.connected = geometry::is_connected(net);
  rep.has_loop = geometry::contains_loop(net);
  rep.chord_arc = net.empty() ? 1.0 : geometry::chord_arc_constant(net);
  rep.radii = radii;
  std::sort(rep.radii.begin(), rep.radii.end());

  for (Point2 x : probes) {
    ProbeDiagnostics pd;
    pd.x = x;
    pd.profile = monotonicity_profile(ev.u, net, problem.domain(), x, rep.radii,
                                      rep.p);
    pd.blowup = blowup_classify(ev.u, net, problem.domain(), x, rep.radii);
    if (with_omega) {
      pd.omega = omega_lower_bound(problem, net, x, rep.radii.front());
      pd.omega_computed = true;
    }
    for (double r : rep.radii)
      pd.density.push_back(geometry::ahlfors_density(net, x, r));
    rep.probes.push_back(std::move(pd));
  }
  return rep;
}

void write_diagnostics_csv(std::ostream& os, const DiagnosticsReport& rep) {
  os << "probe_x,probe_y,r,branches,degenerate,beta,local_energy,e_over_r,"
        "density,profile_value,gamma,gamma_used,alpha,c_fit,unreliable,"
        "class,e_x,omega\n";
  for (const auto& pd : rep.probes) {
    for (size_t k = 0; k < rep.radii.size(); ++k) {
      const auto& row = pd.blowup.rows[k];
      os << fmt17(pd.x.x) << "," << fmt17(pd.x.y) << "," << fmt17(rep.radii[k])
         << "," << row.branches << "," << (row.degenerate ? 1 : 0) << ","
         << fmt17(row.beta) << "," << fmt17(row.energy) << ","
         << fmt17(row.e_over_r) << "," << fmt17(pd.density[k]) << ","
         << fmt17(pd.profile.values[k]) << "," << fmt17(pd.profile.gamma) << ","
         << fmt17(pd.profile.gamma_used) << "," << fmt17(pd.profile.alpha) << ","
         << fmt17(pd.profile.c_fit) << "," << (pd.profile.unreliable ? 1 : 0)
         << "," << to_string(pd.blowup.cls) << "," << fmt17(pd.blowup.e_x) << ",";
      if (pd.omega_computed)
        os << fmt17(pd.omega.value);
      else
        os << "nan";
      os << "\n";
    }
  }
}

void write_diagnostics_json(std::ostream& os, const DiagnosticsReport& rep) {
  auto arr = [&](const std::vector<double>& v) {
    os << "[";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << fmt17(v[i]);
    os << "]";
  };
  os << "{\n";
  os << "  \"h\": " << fmt17(rep.h) << ",\n";
  os << "  \"lambda\": " << fmt17(rep.lambda) << ",\n";
  os << "  \"p\": " << fmt17(rep.p) << ",\n";
  os << "  \"cg_tol\": " << fmt17(rep.cg_tol) << ",\n";
  os << "  \"compliance\": " << fmt17(rep.compliance) << ",\n";
  os << "  \"energy\": " << fmt17(rep.energy) << ",\n";
  os << "  \"length\": " << fmt17(rep.length) << ",\n";
  os << "  \"cg_iterations\": " << rep.cg_iterations << ",\n";
  os << "  \"cg_residual\": " << fmt17(rep.cg_residual) << ",\n";
  os << "  \"connected\": " << (rep.connected ? "true" : "false") << ",\n";
  os << "  \"has_loop\": " << (rep.has_loop ? "true" : "false") << ",\n";
  os << "  \"chord_arc\": " << fmt17(rep.chord_arc) << ",\n";
  os << "  \"radii\": ";
  arr(rep.radii);
  os << ",\n  \"probes\": [";
  for (size_t pi = 0; pi < rep.probes.size(); ++pi) {
    const auto& pd = rep.probes[pi];
    os << (pi ? "," : "") << "\n    {\n";
    os << "      \"x\": [" << fmt17(pd.x.x) << "," << fmt17(pd.x.y) << "],\n";
    os << "      \"class\": \"" << to_string(pd.blowup.cls) << "\",\n";
    os << "      \"e_x\": " << fmt17(pd.blowup.e_x) << ",\n";
    os << "      \"boundary_dist\": " << fmt17(pd.blowup.boundary_dist) << ",\n";
    if (pd.blowup.touch_angle >= 0)
      os << "      \"touch_angle\": " << fmt17(pd.blowup.touch_angle) << ",\n";
    if (pd.blowup.has_angles) {
      os << "      \"triple_angles\": [" << fmt17(pd.blowup.angles[0]) << ","
         << fmt17(pd.blowup.angles[1]) << "," << fmt17(pd.blowup.angles[2])
         << "],\n";
    }
    os << "      \"gamma\": " << fmt17(pd.profile.gamma) << ",\n";
    os << "      \"gamma_used\": " << fmt17(pd.profile.gamma_used) << ",\n";
    os << "      \"alpha\": " << fmt17(pd.profile.alpha) << ",\n";
    os << "      \"fit_exponent\": " << fmt17(pd.profile.fit_exponent) << ",\n";
    os << "      \"c_fit\": " << fmt17(pd.profile.c_fit) << ",\n";
    os << "      \"unreliable\": " << (pd.profile.unreliable ? "true" : "false")
       << ",\n";
    os << "      \"local_energy\": ";
    arr(pd.profile.g);
    os << ",\n      \"profile\": ";
    arr(pd.profile.values);
    os << ",\n      \"density\": ";
    arr(pd.density);
    os << ",\n      \"branches\": [";
    for (size_t k = 0; k < pd.blowup.rows.size(); ++k)
      os << (k ? "," : "") << pd.blowup.rows[k].branches;
    os << "],\n      \"beta\": [";
    for (size_t k = 0; k < pd.blowup.rows.size(); ++k)
      os << (k ? "," : "") << fmt17(pd.blowup.rows[k].beta);
    os << "]";
    if (pd.omega_computed) {
      os << ",\n      \"omega\": {\n";
      os << "        \"value\": " << fmt17(pd.omega.value) << ",\n";
      os << "        \"identity\": " << fmt17(pd.omega.identity) << ",\n";
      os << "        \"chord\": "
         << (pd.omega.chord_tried ? fmt17(pd.omega.chord) : "null") << ",\n";
      os << "        \"wall\": "
         << (pd.omega.wall_tried ? fmt17(pd.omega.wall) : "null") << ",\n";
      os << "        \"winner\": \"" << pd.omega.winner << "\"\n      }";
    }
    os << "\n    }";
  }
  os << "\n  ]\n}\n";
}

}  // namespace glueopt::diagnostics
