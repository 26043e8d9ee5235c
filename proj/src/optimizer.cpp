#include "glueopt/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

#include "glueopt/format.hpp"
#include "glueopt/network_io.hpp"

namespace glueopt::optimizer {

using geometry::dist;
using geometry::DomainSpec;
using io::fmt17;

const char* to_string(MoveKind m) {
  switch (m) {
    case MoveKind::Init: return "init";
    case MoveKind::Descent: return "descent";
    case MoveKind::Tip: return "tip";
    case MoveKind::CutLoop: return "cut_loop";
    case MoveKind::ChordShortcut: return "chord_shortcut";
    case MoveKind::CircleWall: return "circle_wall";
  }
  return "?";
}

namespace {

std::vector<int> node_degrees(const CurveNetwork& net) {
  std::vector<int> deg(net.nodes.size(), 0);
  for (const auto& e : net.edges) {
    deg[e.a]++;
    deg[e.b]++;
  }
  return deg;
}

// first polyline point of edge e seen from the given node end
Point2 first_ring(const geometry::Edge& e, bool from_a) {
  return from_a ? e.pts[1] : e.pts[e.pts.size() - 2];
}

// one-sided derivative jump at pos with the given unit tangent, via a
// degenerate two-point segment centered there
double probe_jump(const solver::Evaluation& eval, Point2 pos, Point2 tangent,
                  bool* flagged) {
  double eps = 0.01 * eval.u.grid.h;
  auto js = solver::normal_jump(eval.u, eval.mask, pos - eps * tangent,
                                pos + eps * tangent, 1);
  *flagged = js.flagged[0];
  return js.jump[0];
}

// signed turn rate at b along a -> b -> c; negative when the polyline
// bends toward the left normal
double turn_kappa(Point2 a, Point2 b, Point2 c) {
  Point2 d1 = b - a, d2 = c - b;
  double ds = 0.5 * (geometry::norm(d1) + geometry::norm(d2));
  if (ds <= 0) return 0.0;
  double phi = std::atan2(geometry::cross(d1, d2), geometry::dot(d1, d2));
  return -phi / ds;
}

struct CandidateCheck {
  bool require_no_crossing = true;
  double margin = 0.0;
};

// validity + strict decrease beyond the margin; fills the new state on
// success
std::optional<OptimizerState> accept_candidate(const Problem& problem,
                                               const OptimizerState& state,
                                               CurveNetwork net,
                                               const CandidateCheck& check) {
  try {
    if (problem.domain().convex()) net = geometry::project_to_domain(net, problem.domain());
    net.validate();
    if (!geometry::is_connected(net)) return std::nullopt;
    if (check.require_no_crossing && geometry::self_intersects(net))
      return std::nullopt;
    auto ev = solver::evaluate_functional(problem, net);
    if (!(ev.value < state.value - check.margin)) return std::nullopt;
    OptimizerState out = state;
    out.net = std::move(net);
    out.value = ev.value;
    out.compliance = ev.compliance;
    out.length = ev.length;
    return out;
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

// damped single Weiszfeld sweep over all degree >= 3 nodes
void rebalance_junctions(CurveNetwork* net, double damp) {
  auto deg = node_degrees(*net);
  for (int n = 0; n < (int)net->nodes.size(); ++n) {
    if (deg[n] < 3) continue;
    Point2 x = net->nodes[n];
    Point2 acc{0, 0};
    double wsum = 0;
    for (const auto& e : net->edges) {
      if (e.a == n) {
        Point2 a = first_ring(e, true);
        double w = 1.0 / std::max(dist(x, a), 1e-12);
        acc = acc + w * a;
        wsum += w;
      }
      if (e.b == n) {
        Point2 a = first_ring(e, false);
        double w = 1.0 / std::max(dist(x, a), 1e-12);
        acc = acc + w * a;
        wsum += w;
      }
    }
    if (wsum <= 0) continue;
    Point2 target{acc.x / wsum, acc.y / wsum};
    Point2 moved = x + damp * (target - x);
    net->nodes[n] = moved;
    for (auto& e : net->edges) {
      if (e.a == n) e.pts.front() = moved;
      if (e.b == n) e.pts.back() = moved;
    }
  }
}

}  // namespace

ShapeGradient shape_gradient(const Problem& problem, const Evaluation& eval,
                             const CurveNetwork& net) {
  ShapeGradient g;
  double lambda = problem.lambda();
  auto deg = node_degrees(net);

  auto add_item = [&](int edge, int vertex, Point2 prev, Point2 pos, Point2 next) {
    VertexVelocity it;
    it.edge = edge;
    it.vertex = vertex;
    it.pos = pos;
    Point2 tang = geometry::normalized(next - prev);
    it.normal = geometry::perp(tang);
    it.jump = probe_jump(eval, pos, tang, &it.flagged);
    it.kappa = turn_kappa(prev, pos, next);
    it.vel = 0.5 * it.jump - lambda * it.kappa;
    if (!it.flagged) g.max_abs = std::max(g.max_abs, std::abs(it.vel));
    g.items.push_back(it);
  };

  for (int e = 0; e < (int)net.edges.size(); ++e) {
    const auto& pts = net.edges[e].pts;
    for (int k = 1; k + 1 < (int)pts.size(); ++k)
      add_item(e, k, pts[k - 1], pts[k], pts[k + 1]);
  }
  // degree-2 nodes move like interior vertices (edge = -1, vertex = node)
  for (int n = 0; n < (int)net.nodes.size(); ++n) {
    if (deg[n] != 2) continue;
    std::vector<Point2> ring;
    for (const auto& e : net.edges) {
      if (e.a == n) ring.push_back(first_ring(e, true));
      if (e.b == n) ring.push_back(first_ring(e, false));
    }
    if (ring.size() != 2) continue;  // self-loop base point stays put
    add_item(-1, n, ring[0], net.nodes[n], ring[1]);
  }
  // degree-1 endpoints carry the lateral part of the gradient (the
  // tangential part is explored by tip_moves): probe at the last
  // segment's midpoint, away from the free-end singularity; a straight
  // end has no curvature term. Tips drive descent but stay out of
  // max_abs: their probe sits where the field is strongest and the
  // rasterization noise dwarfs the interior noise floor.
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    const auto& edge = net.edges[e];
    for (bool at_a : {true, false}) {
      int n = at_a ? edge.a : edge.b;
      if (deg[n] != 1) continue;
      Point2 tip = at_a ? edge.pts.front() : edge.pts.back();
      Point2 inw = first_ring(edge, at_a);
      VertexVelocity it;
      it.edge = -1;
      it.vertex = n;
      it.pos = tip;
      Point2 tang = geometry::normalized(tip - inw);
      it.normal = geometry::perp(tang);
      it.jump = probe_jump(eval, 0.5 * (tip + inw), tang, &it.flagged);
      it.kappa = 0.0;
      it.vel = 0.5 * it.jump;
      it.tip = true;
      g.items.push_back(it);
    }
  }
  // junction stationarity: the unit tangents of a length-critical
  // triple point sum to zero
  for (int n = 0; n < (int)net.nodes.size(); ++n) {
    if (deg[n] < 3) continue;
    Point2 s{0, 0};
    for (const auto& e : net.edges) {
      if (e.a == n) s = s + geometry::normalized(first_ring(e, true) - net.nodes[n]);
      if (e.b == n) s = s + geometry::normalized(first_ring(e, false) - net.nodes[n]);
    }
    g.max_abs = std::max(g.max_abs, lambda * geometry::norm(s));
  }
  return g;
}

ShapeGradient smooth_gradient(const CurveNetwork& net, const ShapeGradient& grad,
                              int passes) {
  ShapeGradient g = grad;
  if (passes <= 0 || g.items.empty()) return g;

  // item lookup: interior vertices by (edge, vertex), node items by node
  std::map<std::pair<int, int>, int> by_edge;
  std::map<int, int> by_node;
  for (int i = 0; i < (int)g.items.size(); ++i) {
    const auto& it = g.items[i];
    if (it.edge >= 0)
      by_edge[{it.edge, it.vertex}] = i;
    else
      by_node[it.vertex] = i;
  }
  // chains: [a-end node item] interior vertices [b-end node item]
  std::vector<std::vector<int>> chains;
  for (int e = 0; e < (int)net.edges.size(); ++e) {
    std::vector<int> chain;
    if (auto it = by_node.find(net.edges[e].a); it != by_node.end())
      chain.push_back(it->second);
    for (int k = 1; k + 1 < (int)net.edges[e].pts.size(); ++k)
      if (auto it = by_edge.find({e, k}); it != by_edge.end())
        chain.push_back(it->second);
    if (auto it = by_node.find(net.edges[e].b); it != by_node.end())
      chain.push_back(it->second);
    if (chain.size() >= 2) chains.push_back(std::move(chain));
  }

  for (int pass = 0; pass < passes; ++pass) {
    std::vector<double> old(g.items.size());
    for (size_t i = 0; i < g.items.size(); ++i) old[i] = g.items[i].vel;
    std::vector<double> sum(g.items.size(), 0.0);
    std::vector<int> cnt(g.items.size(), 0);
    for (const auto& chain : chains)
      for (size_t j = 0; j < chain.size(); ++j) {
        double left = j > 0 ? old[chain[j - 1]] : old[chain[j]];
        double right = j + 1 < chain.size() ? old[chain[j + 1]] : old[chain[j]];
        sum[chain[j]] += 0.25 * left + 0.5 * old[chain[j]] + 0.25 * right;
        cnt[chain[j]]++;
      }
    for (size_t i = 0; i < g.items.size(); ++i)
      if (cnt[i] > 0) g.items[i].vel = sum[i] / cnt[i];
  }
  return g;
}

std::optional<OptimizerState> descent_step(const Problem& problem,
                                           const OptimizerState& state,
                                           const ShapeGradient& grad, double step,
                                           double margin) {
  CurveNetwork net = state.net;
  double cap = 2.0 * problem.h();  // displacement cap keeps the move local
  bool moved = false;
  for (const auto& it : grad.items) {
    if (it.flagged) continue;
    double amt = std::clamp(step * it.vel, -cap, cap);
    if (amt == 0) continue;
    Point2 np = it.pos + amt * it.normal;
    if (it.edge >= 0) {
      net.edges[it.edge].pts[it.vertex] = np;
    } else {
      net.nodes[it.vertex] = np;
      for (auto& e : net.edges) {
        if (e.a == it.vertex) e.pts.front() = np;
        if (e.b == it.vertex) e.pts.back() = np;
      }
    }
    moved = true;
  }
  rebalance_junctions(&net, 1.0);
  bool any_junction = false;
  for (int d : node_degrees(state.net))
    if (d >= 3) any_junction = true;
  if (!moved && !any_junction) return std::nullopt;
  return accept_candidate(problem, state, std::move(net), {.margin = margin});
}

std::optional<OptimizerState> tip_moves(const Problem& problem,
                                        const OptimizerState& state, double step,
                                        double margin) {
  auto deg = node_degrees(state.net);
  std::optional<OptimizerState> best;
  auto consider = [&](CurveNetwork net) {
    auto cand = accept_candidate(problem, state, std::move(net), {.margin = margin});
    if (cand && (!best || cand->value < best->value)) best = cand;
  };
  for (int e = 0; e < (int)state.net.edges.size(); ++e) {
    const auto& edge = state.net.edges[e];
    for (bool at_a : {true, false}) {
      int n = at_a ? edge.a : edge.b;
      if (deg[n] != 1) continue;
      Point2 tip = at_a ? edge.pts.front() : edge.pts.back();
      Point2 inward = first_ring(edge, at_a);
      Point2 out_dir = geometry::normalized(tip - inward);
      Point2 side = geometry::perp(out_dir);
      double seg = dist(tip, inward);
      // extend, retract, and sidestep: endpoints have no other lateral
      // move; sidesteps are half-quantum to stay below capture scale
      std::array<Point2, 4> deltas{step * out_dir,
                                   -std::min(step, 0.9 * seg) * out_dir,
                                   0.5 * step * side, -0.5 * step * side};
      for (Point2 d : deltas) {
        if (d.x == 0 && d.y == 0) continue;
        CurveNetwork net = state.net;
        Point2 np = tip + d;
        net.nodes[n] = np;
        if (at_a)
          net.edges[e].pts.front() = np;
        else
          net.edges[e].pts.back() = np;
        consider(std::move(net));
      }
    }
  }
  if (best) best->step = state.step;
  return best;
}

std::optional<OptimizerState> cut_loop(const Problem& problem,
                                       const OptimizerState& state,
                                       const std::vector<double>& cut_radii,
                                       double margin) {
  const CurveNetwork& net = state.net;
  if (!geometry::contains_loop(net)) return std::nullopt;

  // bridge edges (removal disconnects) are never on a cycle
  int nn = (int)net.nodes.size(), ne = (int)net.edges.size();
  std::vector<bool> on_cycle(ne, false);
  for (int e = 0; e < ne; ++e) {
    if (net.edges[e].a == net.edges[e].b) {
      on_cycle[e] = true;
      continue;
    }
    // connected without edge e and endpoints still joined?
    std::vector<int> parent(nn);
    for (int i = 0; i < nn; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (int o = 0; o < ne; ++o) {
      if (o == e) continue;
      parent[find(net.edges[o].a)] = find(net.edges[o].b);
    }
    on_cycle[e] = find(net.edges[e].a) == find(net.edges[e].b);
  }

  std::optional<OptimizerState> best;
  for (double diameter : cut_radii) {
    double r = 0.5 * diameter;
    // flattest cycle vertex at this scale
    Point2 center{};
    double best_beta = std::numeric_limits<double>::infinity();
    for (int e = 0; e < ne; ++e) {
      if (!on_cycle[e]) continue;
      for (const auto& p : net.edges[e].pts) {
        double beta;
        try {
          beta = geometry::flatness(net, p, r, 16);
        } catch (const std::runtime_error&) {
          continue;
        }
        if (beta < best_beta) {
          best_beta = beta;
          center = p;
        }
      }
    }
    if (!std::isfinite(best_beta)) continue;
    auto cutp = geometry::remove_ball(net, center, r, 1e-9);
    if (!cutp) continue;
    auto cand = accept_candidate(problem, state, std::move(*cutp),
                                 {.require_no_crossing = false, .margin = margin});
    if (cand && (!best || cand->value < best->value)) best = cand;
  }
  return best;
}

std::optional<OptimizerState> chord_shortcut(const Problem& problem,
                                             const OptimizerState& state, Point2 x,
                                             double r, double margin) {
  auto rep = geometry::chord_replace(state.net, x, r, 1e-9);
  if (!rep) return std::nullopt;
  return accept_candidate(problem, state, std::move(*rep),
                          {.require_no_crossing = false, .margin = margin});
}

std::optional<OptimizerState> circle_wall(const Problem& problem,
                                          const OptimizerState& state, Point2 x,
                                          double r, double margin) {
  double seg_len = std::max(problem.h(), r / 16);
  auto rep = geometry::circle_wall_replace(state.net, problem.domain(), x, r,
                                           seg_len, 1e-9);
  if (!rep) return std::nullopt;
  return accept_candidate(problem, state, std::move(*rep),
                          {.require_no_crossing = false, .margin = margin});
}

std::vector<Point2> sample_probes(const CurveNetwork& net, double h, int cap) {
  std::vector<Point2> out;
  double len = geometry::total_length(net);
  if (len <= 0 || cap <= 0) return out;
  double spacing = std::max(4 * h, len / 64);
  double next = 0.5 * spacing, walked = 0;
  for (const auto& e : net.edges)
    for (size_t s = 0; s + 1 < e.pts.size(); ++s) {
      Point2 a = e.pts[s], b = e.pts[s + 1];
      double seg = dist(a, b);
      while (next <= walked + seg) {
        double t = (next - walked) / seg;
        out.push_back(a + t * (b - a));
        next += spacing;
      }
      walked += seg;
    }
  if ((int)out.size() > cap) {
    std::vector<Point2> thin;
    for (int i = 0; i < cap; ++i)
      thin.push_back(out[(size_t)i * out.size() / cap]);
    out = thin;
  }
  return out;
}

OptimizeResult run_optimize(const Problem& problem, const CurveNetwork& init,
                            const Schedule& schedule, const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (!out_dir.empty()) fs::create_directories(out_dir);

  OptimizeResult res;
  CurveNetwork start = init;
  if (problem.domain().convex())
    start = geometry::project_to_domain(start, problem.domain());
  auto ev = solver::evaluate_functional(problem, start);
  res.state = {start, ev.value, ev.compliance, ev.length, schedule.step0, 0};

  int snapshots = 0;
  auto snapshot = [&](MoveKind move, double residual) {
    if (!out_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "net_%06d.txt", snapshots);
      geometry::write_network_file(out_dir + "/" + name, res.state.net);
    }
    res.log.push_back({res.state.iter, move, res.state.value, res.state.compliance,
                       res.state.length, res.state.step, residual, snapshots});
    ++snapshots;
  };
  snapshot(MoveKind::Init, 0.0);

  double period_start_value = res.state.value;
  double last_residual = 0.0;
  bool restart_at_cap = false;
  for (int iter = 1; iter <= schedule.max_iters; ++iter) {
    res.state.iter = iter;
    ev = solver::evaluate_functional(problem, res.state.net);
    auto grad = shape_gradient(problem, ev, res.state.net);
    last_residual = grad.max_abs;

    // widest useful step: the fastest vertex reaches the per-vertex
    // displacement clamp, so larger steps change nothing more
    double hi = std::max(10 * schedule.step0,
                         2 * problem.h() / std::max(grad.max_abs, 1e-12));
    bool started_at_cap;
    if (restart_at_cap) {
      res.state.step = hi;
      restart_at_cap = false;
      started_at_cap = true;
    } else {
      res.state.step = std::min(res.state.step, hi);
      started_at_cap = res.state.step >= hi * (1 - 1e-12);
    }

    auto line_search = [&](const ShapeGradient& g) {
      for (int bt = 0; bt < schedule.max_backtracks; ++bt) {
        auto cand = descent_step(problem, res.state, g, res.state.step,
                                 schedule.accept_margin);
        if (cand) {
          cand->iter = iter;
          cand->step = std::min(res.state.step * schedule.grow, hi);
          res.state = *cand;
          ++res.accepted_descents;
          snapshot(MoveKind::Descent, last_residual);
          return true;
        }
        if (res.state.step <= schedule.step_min) break;
        res.state.step = std::max(res.state.step * schedule.shrink, schedule.step_min);
      }
      return false;
    };
    ShapeGradient gmove =
        schedule.grad_smooth > 0
            ? smooth_gradient(res.state.net, grad, schedule.grad_smooth)
            : grad;
    bool accepted = line_search(gmove);
    if (!accepted) {
      // inside a mask plateau the jump components buy no compliance but
      // still pay length; retry with the length part alone, which
      // strictly shortens whenever any kink remains (curve shortening)
      ShapeGradient gk = grad;
      for (auto& it : gk.items) {
        it.vel = -problem.lambda() * it.kappa;
        it.flagged = false;  // needs no jump probe
      }
      res.state.step = hi;
      accepted = line_search(gk);
    }
    if (!accepted) {
      // coordinate fallback: the worst vertices may improve alone where
      // the coordinated move fights itself
      std::vector<VertexVelocity> order;
      for (const auto& it : grad.items)
        if (!it.flagged) order.push_back(it);
      std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return std::abs(a.vel) > std::abs(b.vel);
      });
      for (size_t pick = 0; pick < order.size() && pick < 3 && !accepted; ++pick) {
        ShapeGradient gone;
        gone.items = {order[pick]};
        gone.max_abs = std::abs(order[pick].vel);
        res.state.step = hi;
        accepted = line_search(gone);
      }
    }

    // a discrete move invalidates the line-search memory: restart the
    // next descent from the cap and backtrack from there
    double fresh = hi;
    if (!accepted) {
      // tips advance by the mask resolution quantum
      auto cand = tip_moves(problem, res.state, problem.h(),
                            schedule.accept_margin);
      if (cand) {
        cand->iter = iter;
        cand->step = fresh;
        res.state = *cand;
        ++res.accepted_tips;
        snapshot(MoveKind::Tip, last_residual);
        accepted = true;
      }
    }

    if (iter % schedule.topo_period == 0) {
      std::vector<double> diam;
      for (double f : schedule.cut_radius_factors) diam.push_back(f * problem.h());
      if (auto cand = cut_loop(problem, res.state, diam, schedule.accept_margin)) {
        cand->iter = iter;
        cand->step = fresh;
        res.state = *cand;
        ++res.accepted_cuts;
        snapshot(MoveKind::CutLoop, last_residual);
        accepted = true;
      }
      auto probes = sample_probes(res.state.net, problem.h(), schedule.probe_cap);
      for (Point2 x : probes)
        for (double f : schedule.probe_radius_factors) {
          if (auto cand = chord_shortcut(problem, res.state, x, f * problem.h(),
                                         schedule.accept_margin)) {
            cand->iter = iter;
            cand->step = fresh;
            res.state = *cand;
            ++res.accepted_chords;
            snapshot(MoveKind::ChordShortcut, last_residual);
            accepted = true;
          }
        }
      for (Point2 x : probes)
        for (double f : schedule.probe_radius_factors) {
          if (auto cand = circle_wall(problem, res.state, x, f * problem.h(),
                                      schedule.accept_margin)) {
            cand->iter = iter;
            cand->step = fresh;
            res.state = *cand;
            ++res.accepted_walls;
            snapshot(MoveKind::CircleWall, last_residual);
            accepted = true;
          }
        }
      // stall check over the whole period
      if (period_start_value - res.state.value < schedule.stop_df) break;
      period_start_value = res.state.value;
    }
    if (!accepted) {
      restart_at_cap = true;  // stall recovery: sweep from the cap next time
      // a full-range sweep plus every available move failed: discrete
      // local minimum (topology moves must have had their chance too)
      bool topo_tried = schedule.topo_period > 0 && iter % schedule.topo_period == 0;
      bool topo_never = schedule.topo_period > schedule.max_iters;
      if (started_at_cap && (topo_tried || topo_never)) break;
    }
    if (iter == schedule.max_iters) res.hit_iteration_cap = true;
  }

  if (!out_dir.empty()) {
    std::ofstream os(out_dir + "/trajectory.csv");
    write_trajectory_csv(os, res.log);
  }
  (void)last_residual;
  return res;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& log) {
  os << "iter,move,value,compliance,length,step,residual,state_index\n";
  for (const auto& r : log)
    os << r.iter << "," << to_string(r.move) << "," << fmt17(r.value) << ","
       << fmt17(r.compliance) << "," << fmt17(r.length) << "," << fmt17(r.step)
       << "," << fmt17(r.residual) << "," << r.state_index << "\n";
}

}  // namespace glueopt::optimizer
