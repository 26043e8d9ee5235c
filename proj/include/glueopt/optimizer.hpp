#pragma once

// Descent on the penalized functional over polyline networks: normal
// velocities from the one-sided derivative jump and discrete curvature,
// junction rebalancing, tangential tip moves, and the topology move set
// (loop cutting, chord shortcuts, circle walls), all accepted only on
// strict decrease.

#include <optional>
#include <string>
#include <vector>

#include "glueopt/problem.hpp"
#include "glueopt/surgery.hpp"

namespace glueopt::optimizer {

using geometry::CurveNetwork;
using geometry::Point2;
using solver::Evaluation;
using solver::Problem;

enum class MoveKind { Init, Descent, Tip, CutLoop, ChordShortcut, CircleWall };
const char* to_string(MoveKind m);

struct Schedule {
  int max_iters = 200;
  double step0 = 0.02;
  double shrink = 0.5;
  double grow = 1.2;
  double step_min = 1e-5;
  int max_backtracks = 8;
  int topo_period = 5;             // try topology moves every this many iters
  std::vector<double> probe_radius_factors{8.0, 16.0};  // times h
  std::vector<double> cut_radius_factors{32.0, 16.0, 8.0};  // times h
  int probe_cap = 48;
  double stop_df = 1e-10;  // stop when a full period improves less than this
  // sufficient-decrease margin: candidates must improve by more than
  // this, which keeps descent from chasing rasterization noise
  double accept_margin = 0.0;
  int grad_smooth = 1;  // smoothing passes on the descent direction
  unsigned seed = 1;
};

struct OptimizerState {
  CurveNetwork net;
  double value = 0.0;
  double compliance = 0.0;
  double length = 0.0;
  double step = 0.0;
  int iter = 0;
};

// Per-vertex normal velocity; positive = moving along the left normal
// decreases the functional to first order.
struct VertexVelocity {
  int edge = -1;
  int vertex = -1;  // interior polyline index
  Point2 pos;
  Point2 normal;  // left normal
  double jump = 0.0;
  double kappa = 0.0;
  double vel = 0.0;
  bool flagged = false;
  bool tip = false;  // degree-1 endpoint: lateral jump only, kappa = 0
};

struct ShapeGradient {
  std::vector<VertexVelocity> items;
  double max_abs = 0.0;  // stationarity residual
};

ShapeGradient shape_gradient(const Problem& problem, const Evaluation& eval,
                             const CurveNetwork& net);

// Sobolev-style preconditioning of the move direction: [1/4 1/2 1/4]
// passes of the normal speed along each edge chain (degree-2 node and
// endpoint items included), so arms move coherently instead of by
// single-vertex spikes. max_abs is left untouched: it reports the raw
// stationarity residual.
ShapeGradient smooth_gradient(const CurveNetwork& net, const ShapeGradient& grad,
                              int passes);

// Candidate after one explicit-descent displacement (velocities scaled
// by step along left normals), one junction-rebalancing sweep and
// domain projection; nullopt when the candidate is invalid
// (self-intersecting, outside a non-convex domain) or does not strictly
// decrease the functional.
std::optional<OptimizerState> descent_step(const Problem& problem,
                                           const OptimizerState& state,
                                           const ShapeGradient& grad, double step,
                                           double margin = 0.0);

// Tangential extend/retract and sidestep candidates for every endpoint,
// accepted on strict decrease; returns the improved state or nullopt.
std::optional<OptimizerState> tip_moves(const Problem& problem,
                                        const OptimizerState& state, double step,
                                        double margin = 0.0);

// Cut the loop at the flattest cycle vertex: for each cut diameter in
// the schedule list, remove the ball of half that diameter around the
// cycle vertex minimizing flatness, keeping connectivity; accept the
// best strictly decreasing candidate.
std::optional<OptimizerState> cut_loop(const Problem& problem,
                                       const OptimizerState& state,
                                       const std::vector<double>& cut_radii,
                                       double margin = 0.0);

// Replace the ball part around x by the straight chord (two transversal
// crossings required); accept on strict decrease.
std::optional<OptimizerState> chord_shortcut(const Problem& problem,
                                             const OptimizerState& state, Point2 x,
                                             double r, double margin = 0.0);

// Replace the ball part around x by the clipped circle; accept on
// strict decrease.
std::optional<OptimizerState> circle_wall(const Problem& problem,
                                          const OptimizerState& state, Point2 x,
                                          double r, double margin = 0.0);

// Probe points spread along the network at arclength spacing
// max(4h, length/64), capped.
std::vector<Point2> sample_probes(const CurveNetwork& net, double h, int cap);

struct TrajectoryRecord {
  int iter = 0;
  MoveKind move = MoveKind::Init;
  double value = 0.0, compliance = 0.0, length = 0.0, step = 0.0, residual = 0.0;
  int state_index = 0;  // index of the written network snapshot
};

struct OptimizeResult {
  OptimizerState state;
  std::vector<TrajectoryRecord> log;
  int accepted_descents = 0;
  int accepted_tips = 0;
  int accepted_cuts = 0;
  int accepted_chords = 0;
  int accepted_walls = 0;
  bool hit_iteration_cap = false;
};

// Full loop.  When out_dir is nonempty, writes net_%06d.txt per
// accepted state and trajectory.csv.
OptimizeResult run_optimize(const Problem& problem, const CurveNetwork& init,
                            const Schedule& schedule,
                            const std::string& out_dir = "");

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& log);

}  // namespace glueopt::optimizer
