#include "glueopt/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace glueopt::geometry {

namespace {
constexpr double kPi = std::numbers::pi;

// Roots t of |a + t d - x|^2 = r^2 within (lo, hi), sorted.
std::vector<double> ball_roots(Point2 a, Point2 d, Point2 x, double r, double lo,
                               double hi) {
  std::vector<double> out;
  Point2 w = a - x;
  double A = dot(d, d);
  if (A <= 0) return out;
  double B = 2 * dot(w, d);
  double Cq = dot(w, w) - r * r;
  double disc = B * B - 4 * A * Cq;
  if (disc < 0) return out;
  double sq = std::sqrt(disc);
  double q = (B >= 0) ? -0.5 * (B + sq) : -0.5 * (B - sq);
  double t1 = q / A;
  double t2 = (q != 0) ? Cq / q : t1;
  if (t1 > t2) std::swap(t1, t2);
  if (t1 > lo && t1 < hi) out.push_back(t1);
  if (disc > 0 && t2 > lo && t2 < hi) out.push_back(t2);
  return out;
}

// Chains of the pieces of net where keep_inside selects inside/outside
// of the ball; pieces cut exactly at the circle.
std::vector<std::vector<Point2>> clip_ball(const CurveNetwork& net, Point2 x,
                                           double r, bool keep_inside) {
  std::vector<std::vector<Point2>> chains;
  std::vector<Point2> cur;
  auto flush = [&] {
    if (cur.size() >= 2) chains.push_back(cur);
    cur.clear();
  };
  for (const auto& e : net.edges) {
    for (size_t s = 0; s + 1 < e.pts.size(); ++s) {
      Point2 a = e.pts[s], b = e.pts[s + 1], d = b - a;
      std::vector<double> cuts{0.0};
      for (double t : ball_roots(a, d, x, r, 0.0, 1.0)) cuts.push_back(t);
      cuts.push_back(1.0);
      for (size_t k = 0; k + 1 < cuts.size(); ++k) {
        double t0 = cuts[k], t1 = cuts[k + 1];
        if (t1 - t0 < 1e-15) continue;
        Point2 p0 = (k == 0) ? a : x + r * normalized(a + t0 * d - x);
        Point2 p1 = (k + 2 == cuts.size()) ? b : x + r * normalized(a + t1 * d - x);
        bool in = dist(a + (0.5 * (t0 + t1)) * d, x) <= r;
        if (in == keep_inside) {
          if (cur.empty()) cur.push_back(p0);
          cur.push_back(p1);
        } else {
          flush();
        }
      }
    }
    flush();
  }
  return chains;
}

}  // namespace

CurveNetwork from_chains(const std::vector<std::vector<Point2>>& chains,
                         double merge_tol) {
  CurveNetwork net;
  auto node_for = [&](Point2 p) {
    for (size_t i = 0; i < net.nodes.size(); ++i)
      if (dist(net.nodes[i], p) <= merge_tol) return (int)i;
    net.nodes.push_back(p);
    return (int)net.nodes.size() - 1;
  };
  for (const auto& raw : chains) {
    // drop repeated points, measure length
    std::vector<Point2> pts;
    double len = 0;
    for (const auto& p : raw) {
      if (!pts.empty()) {
        double d = dist(pts.back(), p);
        if (d <= 1e-13) continue;
        len += d;
      }
      pts.push_back(p);
    }
    if (pts.size() < 2 || len <= merge_tol) continue;
    int a = node_for(pts.front());
    int b = node_for(pts.back());
    pts.front() = net.nodes[a];
    pts.back() = net.nodes[b];
    // node substitution may collapse the first/last segment
    while (pts.size() > 2 && dist(pts[0], pts[1]) <= 1e-13) pts.erase(pts.begin() + 1);
    while (pts.size() > 2 && dist(pts[pts.size() - 2], pts.back()) <= 1e-13)
      pts.erase(pts.end() - 2);
    if (pts.size() == 2 && dist(pts[0], pts[1]) <= 1e-13) continue;
    net.edges.push_back({a, b, std::move(pts)});
  }
  return net;
}

std::vector<std::vector<Point2>> clip_outside_ball(const CurveNetwork& net,
                                                   Point2 x, double r) {
  return clip_ball(net, x, r, false);
}

std::vector<std::vector<Point2>> clip_inside_ball(const CurveNetwork& net,
                                                  Point2 x, double r) {
  return clip_ball(net, x, r, true);
}

std::optional<CurveNetwork> remove_ball(const CurveNetwork& net, Point2 x, double r,
                                        double merge_tol) {
  CurveNetwork out = from_chains(clip_outside_ball(net, x, r), merge_tol);
  if (out.empty() || !is_connected(out)) return std::nullopt;
  return out;
}

std::optional<CurveNetwork> chord_replace(const CurveNetwork& net, Point2 x, double r,
                                          double merge_tol) {
  std::vector<double> angles;
  try {
    angles = crossing_angles(net, x, r);
  } catch (const DegenerateCrossing&) {
    return std::nullopt;
  }
  if (angles.size() != 2) return std::nullopt;
  Point2 q1 = x + r * Point2{std::cos(angles[0]), std::sin(angles[0])};
  Point2 q2 = x + r * Point2{std::cos(angles[1]), std::sin(angles[1])};
  if (dist(q1, q2) <= merge_tol) return std::nullopt;
  auto chains = clip_outside_ball(net, x, r);
  chains.push_back({q1, q2});
  CurveNetwork out = from_chains(chains, merge_tol);
  if (out.empty() || !is_connected(out)) return std::nullopt;
  return out;
}

std::optional<CurveNetwork> circle_wall_replace(const CurveNetwork& net,
                                                const DomainSpec& domain, Point2 x,
                                                double r, double seg_len,
                                                double merge_tol) {
  if (!(seg_len > 0)) return std::nullopt;
  auto chains = clip_outside_ball(net, x, r);

  // angles where the clipped pieces end on the circle: the wall must
  // have chain endpoints exactly there
  std::vector<double> cut_angles;
  for (const auto& ch : chains)
    for (Point2 p : {ch.front(), ch.back()})
      if (std::abs(dist(p, x) - r) <= 1e-9 * r)
        cut_angles.push_back(std::atan2(p.y - x.y, p.x - x.x));

  // arcs of the circle inside the closed domain
  std::vector<double> wall = domain.boundary_circle_angles(x, r);
  std::vector<std::array<double, 2>> arcs;  // [begin, end], end > begin
  if (wall.empty()) {
    bool in = true;
    for (int k = 0; k < 8; ++k)
      in = in && domain.inside_closed(x + r * Point2{std::cos(kPi * k / 4),
                                                     std::sin(kPi * k / 4)});
    if (!in) return std::nullopt;  // circle leaves the domain entirely
    double base = cut_angles.empty() ? 0.0 : cut_angles[0];
    arcs.push_back({base, base + 2 * kPi});
  } else {
    std::sort(wall.begin(), wall.end());
    for (size_t i = 0; i < wall.size(); ++i) {
      double a0 = wall[i];
      double a1 = (i + 1 < wall.size()) ? wall[i + 1] : wall[0] + 2 * kPi;
      if (a1 - a0 < 1e-12) continue;
      double mid = 0.5 * (a0 + a1);
      if (domain.inside_closed(x + r * Point2{std::cos(mid), std::sin(mid)}))
        arcs.push_back({a0, a1});
    }
    if (arcs.empty()) return std::nullopt;
  }

  // polygonize every arc; cut angles become chain endpoints
  double dstep = seg_len / r;
  for (const auto& arc : arcs) {
    std::vector<double> stops{arc[0], arc[1]};
    for (double c : cut_angles) {
      double a = c;
      while (a < arc[0]) a += 2 * kPi;
      while (a > arc[1]) a -= 2 * kPi;
      if (a > arc[0] + 1e-12 && a < arc[1] - 1e-12) stops.push_back(a);
    }
    std::sort(stops.begin(), stops.end());
    for (size_t i = 0; i + 1 < stops.size(); ++i) {
      double a0 = stops[i], a1 = stops[i + 1];
      if (a1 - a0 < 1e-12) continue;
      int steps = std::max(1, (int)std::ceil((a1 - a0) / dstep));
      std::vector<Point2> ch;
      for (int k = 0; k <= steps; ++k) {
        double th = a0 + (a1 - a0) * k / steps;
        ch.push_back(x + r * Point2{std::cos(th), std::sin(th)});
      }
      chains.push_back(std::move(ch));
    }
  }

  CurveNetwork out = from_chains(chains, merge_tol);
  if (out.empty() || !is_connected(out)) return std::nullopt;
  return out;
}

bool self_intersects(const CurveNetwork& net) {
  auto segs = net.segments();
  const double tol = 1e-12;
  for (size_t i = 0; i < segs.size(); ++i)
    for (size_t j = i + 1; j < segs.size(); ++j) {
      const auto&A = segs[i], &B = segs[j];
      // adjacent (shared endpoint) pairs touch legitimately
      if (dist(A.p, B.p) <= tol || dist(A.p, B.q) <= tol ||
          dist(A.q, B.p) <= tol || dist(A.q, B.q) <= tol)
        continue;
      double d1 = cross(B.q - B.p, A.p - B.p);
      double d2 = cross(B.q - B.p, A.q - B.p);
      double d3 = cross(A.q - A.p, B.p - A.p);
      double d4 = cross(A.q - A.p, B.q - A.p);
      if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return true;
      // endpoint resting in the other segment's interior
      auto touches = [&](Point2 p, Point2 a, Point2 b) {
        return segment_distance(p, a, b) <= tol && dist(p, a) > tol &&
               dist(p, b) > tol;
      };
      if (touches(A.p, B.p, B.q) || touches(A.q, B.p, B.q) ||
          touches(B.p, A.p, A.q) || touches(B.q, A.p, A.q))
        return true;
    }
  return false;
}

}  // namespace glueopt::geometry
