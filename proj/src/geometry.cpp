#include "glueopt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace glueopt::geometry {

namespace {
constexpr double kPi = std::numbers::pi;

// Union-find over node indices.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  // returns false when already joined
  bool join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};
}  // namespace

double segment_distance(Point2 p, Point2 a, Point2 b) {
  return dist(p, segment_closest(p, a, b));
}

Point2 segment_closest(Point2 p, Point2 a, Point2 b) {
  Point2 d = b - a;
  double len2 = dot(d, d);
  if (len2 <= 0) return a;
  double t = dot(p - a, d) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return a + t * d;
}

std::vector<Segment> CurveNetwork::segments() const {
  std::vector<Segment> out;
  for (int e = 0; e < (int)edges.size(); ++e) {
    const auto& pts = edges[e].pts;
    for (int s = 0; s + 1 < (int)pts.size(); ++s)
      out.push_back({pts[s], pts[s + 1], e, s});
  }
  return out;
}

void CurveNetwork::validate() const {
  for (const auto& p : nodes)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::runtime_error("network: non-finite node coordinate");
  for (const auto& e : edges) {
    if (e.a < 0 || e.a >= (int)nodes.size() || e.b < 0 || e.b >= (int)nodes.size())
      throw std::runtime_error("network: edge references missing node");
    if (e.pts.size() < 2) throw std::runtime_error("network: edge with fewer than 2 points");
    for (const auto& p : e.pts)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::runtime_error("network: non-finite edge coordinate");
    if (dist(e.pts.front(), nodes[e.a]) > 1e-9 || dist(e.pts.back(), nodes[e.b]) > 1e-9)
      throw std::runtime_error("network: polyline ends do not match nodes");
    for (size_t s = 0; s + 1 < e.pts.size(); ++s)
      if (dist(e.pts[s], e.pts[s + 1]) <= 0)
        throw std::runtime_error("network: zero-length segment");
  }
}

double total_length(const CurveNetwork& net) {
  double len = 0;
  for (const auto& e : net.edges)
    for (size_t s = 0; s + 1 < e.pts.size(); ++s) len += dist(e.pts[s], e.pts[s + 1]);
  return len;
}

bool is_connected(const CurveNetwork& net) {
  if (net.nodes.empty()) return true;
  UnionFind uf((int)net.nodes.size());
  for (const auto& e : net.edges) uf.join(e.a, e.b);
  int root = uf.find(0);
  for (int i = 1; i < (int)net.nodes.size(); ++i)
    if (uf.find(i) != root) return false;
  return true;
}

bool contains_loop(const CurveNetwork& net) {
  UnionFind uf((int)net.nodes.size());
  for (const auto& e : net.edges) {
    if (e.a == e.b) return true;
    if (!uf.join(e.a, e.b)) return true;
  }
  return false;
}

// ---- DomainSpec -------------------------------------------------------

DomainSpec DomainSpec::disc(Point2 center, double radius) {
  if (!(radius > 0)) throw std::runtime_error("domain: disc radius must be positive");
  DomainSpec d;
  d.kind_ = Kind::Disc;
  d.center_ = center;
  d.radius_ = radius;
  return d;
}

DomainSpec DomainSpec::polygon(std::vector<Point2> vertices) {
  if (vertices.size() < 3) throw std::runtime_error("domain: polygon needs >= 3 vertices");
  DomainSpec d;
  d.kind_ = Kind::Polygon;
  // normalize to counter-clockwise orientation
  double twice_area = 0;
  for (size_t i = 0; i < vertices.size(); ++i) {
    Point2 a = vertices[i], b = vertices[(i + 1) % vertices.size()];
    twice_area += cross(a, b);
  }
  if (twice_area < 0) std::reverse(vertices.begin(), vertices.end());
  d.verts_ = std::move(vertices);
  return d;
}

bool DomainSpec::inside(Point2 p) const {
  if (kind_ == Kind::Disc) return dist(p, center_) < radius_;
  // strictly inside: positive winding and not on the boundary
  if (boundary_distance(p) <= 0) return false;
  bool in = false;
  size_t n = verts_.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2&a = verts_[i], &b = verts_[j];
    if ((a.y > p.y) != (b.y > p.y) &&
        p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
      in = !in;
  }
  return in;
}

bool DomainSpec::inside_closed(Point2 p) const {
  if (kind_ == Kind::Disc) return dist(p, center_) <= radius_ + 1e-12 * radius_;
  if (boundary_distance(p) <= 1e-12) return true;
  return inside(p);
}

double DomainSpec::boundary_distance(Point2 p) const {
  if (kind_ == Kind::Disc) return std::abs(dist(p, center_) - radius_);
  double d = std::numeric_limits<double>::infinity();
  size_t n = verts_.size();
  for (size_t i = 0; i < n; ++i)
    d = std::min(d, segment_distance(p, verts_[i], verts_[(i + 1) % n]));
  return d;
}

bool DomainSpec::convex() const {
  if (kind_ == Kind::Disc) return true;
  size_t n = verts_.size();
  for (size_t i = 0; i < n; ++i) {
    Point2 a = verts_[i], b = verts_[(i + 1) % n], c = verts_[(i + 2) % n];
    if (cross(b - a, c - b) < -1e-12) return false;
  }
  return true;
}

Point2 DomainSpec::project(Point2 p) const {
  if (!convex()) throw std::runtime_error("domain: projection requires a convex domain");
  if (kind_ == Kind::Disc) {
    double d = dist(p, center_);
    if (d <= radius_) return p;
    return center_ + (radius_ / d) * (p - center_);
  }
  if (inside_closed(p)) return p;
  Point2 best = verts_[0];
  double bd = std::numeric_limits<double>::infinity();
  size_t n = verts_.size();
  for (size_t i = 0; i < n; ++i) {
    Point2 q = segment_closest(p, verts_[i], verts_[(i + 1) % n]);
    double d = dist(p, q);
    if (d < bd) {
      bd = d;
      best = q;
    }
  }
  return best;
}

std::array<Point2, 2> DomainSpec::bbox() const {
  if (kind_ == Kind::Disc)
    return {Point2{center_.x - radius_, center_.y - radius_},
            Point2{center_.x + radius_, center_.y + radius_}};
  Point2 lo = verts_[0], hi = verts_[0];
  for (const auto& v : verts_) {
    lo.x = std::min(lo.x, v.x);
    lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
  }
  return {lo, hi};
}

double DomainSpec::area() const {
  if (kind_ == Kind::Disc) return kPi * radius_ * radius_;
  double twice = 0;
  size_t n = verts_.size();
  for (size_t i = 0; i < n; ++i) twice += cross(verts_[i], verts_[(i + 1) % n]);
  return std::abs(twice) / 2;
}

namespace {

// Roots t of |a + t d - x|^2 = r^2 within [lo, hi].
void circle_segment_roots(Point2 a, Point2 d, Point2 x, double r, double lo,
                          double hi, std::vector<double>* out) {
  Point2 w = a - x;
  double A = dot(d, d);
  if (A <= 0) return;
  double B = 2 * dot(w, d);
  double Cq = dot(w, w) - r * r;
  double disc = B * B - 4 * A * Cq;
  if (disc < 0) return;
  double sq = std::sqrt(disc);
  // numerically stable pair
  double q = (B >= 0) ? -0.5 * (B + sq) : -0.5 * (B - sq);
  double t1 = q / A;
  double t2 = (q != 0) ? Cq / q : t1;
  if (t1 > t2) std::swap(t1, t2);
  if (t1 >= lo && t1 <= hi) out->push_back(t1);
  if (disc > 0 && t2 >= lo && t2 <= hi) out->push_back(t2);
}

}  // namespace

std::vector<double> DomainSpec::boundary_circle_angles(Point2 x, double r) const {
  std::vector<double> angles;
  if (kind_ == Kind::Disc) {
    // circle-circle intersection
    double d = dist(center_, x);
    if (d > 1e-15 && d < r + radius_ && d > std::abs(r - radius_)) {
      double a = (r * r - radius_ * radius_ + d * d) / (2 * d);
      double h2 = r * r - a * a;
      if (h2 >= 0) {
        double hh = std::sqrt(h2);
        Point2 dir = normalized(center_ - x);
        Point2 mid = x + a * dir;
        Point2 off = hh * perp(dir);
        Point2 p1 = mid + off, p2 = mid - off;
        angles.push_back(std::atan2(p1.y - x.y, p1.x - x.x));
        if (h2 > 0) angles.push_back(std::atan2(p2.y - x.y, p2.x - x.x));
      }
    }
    return angles;
  }
  size_t n = verts_.size();
  std::vector<double> roots;
  for (size_t i = 0; i < n; ++i) {
    Point2 a = verts_[i], b = verts_[(i + 1) % n];
    roots.clear();
    circle_segment_roots(a, b - a, x, r, 0.0, 1.0, &roots);
    for (double t : roots) {
      Point2 q = a + t * (b - a);
      angles.push_back(std::atan2(q.y - x.y, q.x - x.x));
    }
  }
  return angles;
}

// ---- ball clipping helpers (shared with flatness/density) -------------

namespace {

struct ClippedSeg {
  Point2 p, q;
};

// Parts of [a, b] inside the closed ball.
void clip_segment_to_ball(Point2 a, Point2 b, Point2 x, double r,
                          std::vector<ClippedSeg>* out) {
  Point2 d = b - a;
  std::vector<double> cuts{0.0, 1.0};
  circle_segment_roots(a, d, x, r, 0.0, 1.0, &cuts);
  std::sort(cuts.begin(), cuts.end());
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    double t0 = cuts[k], t1 = cuts[k + 1];
    if (t1 - t0 < 1e-15) continue;
    Point2 mid = a + (0.5 * (t0 + t1)) * d;
    if (dist(mid, x) <= r) out->push_back({a + t0 * d, a + t1 * d});
  }
}

std::vector<ClippedSeg> clip_network_to_ball(const CurveNetwork& net, Point2 x,
                                             double r) {
  std::vector<ClippedSeg> parts;
  for (const auto& e : net.edges)
    for (size_t s = 0; s + 1 < e.pts.size(); ++s) {
      Point2 a = e.pts[s], b = e.pts[s + 1];
      // cheap reject
      if (segment_distance(x, a, b) > r) continue;
      clip_segment_to_ball(a, b, x, r, &parts);
    }
  return parts;
}

}  // namespace

double ahlfors_density(const CurveNetwork& net, Point2 x, double r) {
  if (!(r > 0)) throw std::runtime_error("ahlfors_density: r must be positive");
  double len = 0;
  for (const auto& part : clip_network_to_ball(net, x, r)) len += dist(part.p, part.q);
  return len / r;
}

double flatness(const CurveNetwork& net, Point2 x, double r, int angle_samples) {
  if (!(r > 0)) throw std::runtime_error("flatness: r must be positive");
  if (angle_samples < 1) throw std::runtime_error("flatness: angle_samples < 1");
  auto parts = clip_network_to_ball(net, x, r);
  if (parts.empty()) throw std::runtime_error("flatness: empty network part in ball");

  const int chord_samples = 256;  // arclength step r/256 along the chord
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < angle_samples; ++k) {
    double th = kPi * k / angle_samples;
    Point2 u{std::cos(th), std::sin(th)};
    Point2 c0 = x - r * u, c1 = x + r * u;
    // net side: distance to a segment (convex) peaks at subsegment ends
    double d1 = 0;
    for (const auto& part : parts) {
      d1 = std::max(d1, segment_distance(part.p, c0, c1));
      d1 = std::max(d1, segment_distance(part.q, c0, c1));
      if (d1 >= best) break;
    }
    if (d1 >= best) continue;
    // chord side: sampled sup of distance to the clipped network
    double d2 = 0;
    for (int s = 0; s <= chord_samples; ++s) {
      Point2 p = c0 + (double(s) / chord_samples) * (c1 - c0);
      double dp = std::numeric_limits<double>::infinity();
      for (const auto& part : parts) {
        dp = std::min(dp, segment_distance(p, part.p, part.q));
        if (dp <= d2) break;
      }
      d2 = std::max(d2, dp);
      if (std::max(d1, d2) >= best) break;
    }
    best = std::min(best, std::max(d1, d2));
  }
  return best / r;
}

// ---- geodesics --------------------------------------------------------

namespace {

struct NetGraph {
  // vertex 0..n-1; adjacency (target, weight)
  std::vector<std::vector<std::pair<int, double>>> adj;
  // graph vertex of every polyline point: per edge, per point index
  std::vector<std::vector<int>> point_vertex;

  int add_vertex() {
    adj.emplace_back();
    return (int)adj.size() - 1;
  }
  void add_arc(int a, int b, double w) {
    adj[a].push_back({b, w});
    adj[b].push_back({a, w});
  }
};

NetGraph build_graph(const CurveNetwork& net) {
  NetGraph g;
  std::vector<int> node_vertex(net.nodes.size());
  for (size_t i = 0; i < net.nodes.size(); ++i) node_vertex[i] = g.add_vertex();
  g.point_vertex.resize(net.edges.size());
  for (size_t e = 0; e < net.edges.size(); ++e) {
    const auto& pts = net.edges[e].pts;
    auto& pv = g.point_vertex[e];
    pv.resize(pts.size());
    for (size_t k = 0; k < pts.size(); ++k) {
      if (k == 0)
        pv[k] = node_vertex[net.edges[e].a];
      else if (k + 1 == pts.size())
        pv[k] = node_vertex[net.edges[e].b];
      else
        pv[k] = g.add_vertex();
    }
    for (size_t k = 0; k + 1 < pts.size(); ++k)
      g.add_arc(pv[k], pv[k + 1], dist(pts[k], pts[k + 1]));
  }
  return g;
}

struct NetLocation {
  int edge = -1, seg = -1;
  double t = 0;
  Point2 pos;
  double off = std::numeric_limits<double>::infinity();
};

NetLocation locate(const CurveNetwork& net, Point2 p) {
  NetLocation best;
  for (size_t e = 0; e < net.edges.size(); ++e) {
    const auto& pts = net.edges[e].pts;
    for (size_t s = 0; s + 1 < pts.size(); ++s) {
      Point2 q = segment_closest(p, pts[s], pts[s + 1]);
      double d = dist(p, q);
      if (d < best.off) {
        double seglen = dist(pts[s], pts[s + 1]);
        best = {(int)e, (int)s, seglen > 0 ? dist(pts[s], q) / seglen : 0.0, q, d};
      }
    }
  }
  return best;
}

// Insert a located point as a fresh vertex splitting its segment.
int insert_location(NetGraph* g, const CurveNetwork& net, const NetLocation& loc) {
  int v = g->add_vertex();
  const auto& pts = net.edges[loc.edge].pts;
  int va = g->point_vertex[loc.edge][loc.seg];
  int vb = g->point_vertex[loc.edge][loc.seg + 1];
  g->add_arc(v, va, dist(loc.pos, pts[loc.seg]));
  g->add_arc(v, vb, dist(loc.pos, pts[loc.seg + 1]));
  return v;
}

std::vector<double> dijkstra(const NetGraph& g, int src) {
  std::vector<double> d(g.adj.size(), std::numeric_limits<double>::infinity());
  std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                      std::greater<>> pq;
  d[src] = 0;
  pq.push({0, src});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    for (auto [v, w] : g.adj[u])
      if (du + w < d[v]) {
        d[v] = du + w;
        pq.push({d[v], v});
      }
  }
  return d;
}

}  // namespace

double geodesic_distance(const CurveNetwork& net, Point2 a, Point2 b,
                         double snap_tol) {
  if (net.empty()) throw std::runtime_error("geodesic_distance: empty network");
  NetLocation la = locate(net, a), lb = locate(net, b);
  if (la.off > snap_tol || lb.off > snap_tol)
    throw std::runtime_error("geodesic_distance: point not on the network");
  NetGraph g = build_graph(net);
  int va = insert_location(&g, net, la);
  int vb = insert_location(&g, net, lb);
  if (la.edge == lb.edge && la.seg == lb.seg)
    g.add_arc(va, vb, dist(la.pos, lb.pos));
  auto d = dijkstra(g, va);
  if (!std::isfinite(d[vb]))
    throw std::runtime_error("geodesic_distance: points in different components");
  return d[vb];
}

double chord_arc_constant(const CurveNetwork& net, int samples) {
  double len = total_length(net);
  if (net.empty() || len <= 0) return 1.0;
  if (!is_connected(net))
    throw std::runtime_error("chord_arc_constant: network not connected");

  // sample locations: every node, plus uniform arclength fill
  std::vector<NetLocation> locs;
  for (size_t e = 0; e < net.edges.size(); ++e) {
    const auto& pts = net.edges[e].pts;
    locs.push_back({(int)e, 0, 0.0, pts.front(), 0.0});
    locs.push_back({(int)e, (int)pts.size() - 2, 1.0, pts.back(), 0.0});
  }
  int fill = std::max(0, samples - (int)locs.size());
  if (fill > 0) {
    double spacing = len / (fill + 1);
    double carry = 0;
    for (size_t e = 0; e < net.edges.size(); ++e) {
      const auto& pts = net.edges[e].pts;
      for (size_t s = 0; s + 1 < pts.size(); ++s) {
        double seglen = dist(pts[s], pts[s + 1]);
        double pos = spacing - carry;
        while (pos < seglen) {
          double t = pos / seglen;
          locs.push_back({(int)e, (int)s, t, pts[s] + t * (pts[s + 1] - pts[s]), 0.0});
          pos += spacing;
        }
        carry = std::fmod(carry + seglen, spacing);
      }
    }
  }

  NetGraph g = build_graph(net);
  std::vector<int> verts;
  verts.reserve(locs.size());
  for (const auto& loc : locs) verts.push_back(insert_location(&g, net, loc));
  // direct arcs between samples sharing one segment
  for (size_t i = 0; i < locs.size(); ++i)
    for (size_t j = i + 1; j < locs.size(); ++j)
      if (locs[i].edge == locs[j].edge && locs[i].seg == locs[j].seg)
        g.add_arc(verts[i], verts[j], dist(locs[i].pos, locs[j].pos));

  double worst = 1.0;
  for (size_t i = 0; i < locs.size(); ++i) {
    auto d = dijkstra(g, verts[i]);
    for (size_t j = i + 1; j < locs.size(); ++j) {
      double eu = dist(locs[i].pos, locs[j].pos);
      if (eu < 1e-12) continue;
      if (std::isfinite(d[verts[j]])) worst = std::max(worst, d[verts[j]] / eu);
    }
  }
  return worst;
}

// ---- circle crossings -------------------------------------------------

namespace {

struct Crossing {
  double t;
  Point2 q;
  bool degenerate;
};

// All circle crossings of one segment with degeneracy marking: roots at
// the segment ends or with near-tangential incidence are unstable.
void segment_crossings(Point2 a, Point2 b, Point2 x, double r,
                       std::vector<Crossing>* out) {
  Point2 d = b - a;
  std::vector<double> roots;
  circle_segment_roots(a, d, x, r, -1e-9, 1.0 + 1e-9, &roots);
  for (double t : roots) {
    Point2 q = a + t * d;
    bool bad = false;
    if (t < 1e-9 || t > 1 - 1e-9) bad = true;  // crossing at a vertex
    double dn = norm(d), qn = dist(q, x);
    if (dn > 0 && qn > 0) {
      double trans = std::abs(dot(d, q - x)) / (dn * qn);
      if (trans < 1e-3) bad = true;  // nearly tangent
    } else {
      bad = true;
    }
    out->push_back({t, q, bad});
  }
}

}  // namespace

std::vector<double> crossing_angles(const CurveNetwork& net, Point2 x, double r) {
  if (!(r > 0)) throw std::runtime_error("crossing_angles: r must be positive");
  std::vector<double> angles;
  std::vector<Crossing> cr;
  for (const auto& e : net.edges)
    for (size_t s = 0; s + 1 < e.pts.size(); ++s) {
      Point2 a = e.pts[s], b = e.pts[s + 1];
      if (segment_distance(x, a, b) > r) continue;
      if (dist(a, x) < r && dist(b, x) < r) continue;  // fully inside the ball
      cr.clear();
      segment_crossings(a, b, x, r, &cr);
      for (const auto& c : cr) {
        if (c.degenerate)
          throw DegenerateCrossing("degenerate circle crossing (vertex or tangency)");
        angles.push_back(std::atan2(c.q.y - x.y, c.q.x - x.x));
      }
    }
  return angles;
}

int branch_count(const CurveNetwork& net, Point2 x, double r) {
  return (int)crossing_angles(net, x, r).size();
}

GammaResult gamma_sup(const CurveNetwork& net, const DomainSpec& domain, Point2 x,
                      double r0, double r1, int radius_samples) {
  if (!(r1 > r0) || !(r0 > 0))
    throw std::runtime_error("gamma_sup: need 0 < r0 < r1");
  GammaResult res;
  res.gamma = 0;
  std::vector<Crossing> cr;
  for (int k = 0; k < radius_samples; ++k) {
    double r = r0 + (k + 0.5) * (r1 - r0) / radius_samples;
    // obstacle points: every intersection of circle with net or boundary
    std::vector<double> angles = domain.boundary_circle_angles(x, r);
    for (const auto& e : net.edges)
      for (size_t s = 0; s + 1 < e.pts.size(); ++s) {
        if (segment_distance(x, e.pts[s], e.pts[s + 1]) > r) continue;
        cr.clear();
        segment_crossings(e.pts[s], e.pts[s + 1], x, r, &cr);
        for (const auto& c : cr)
          angles.push_back(std::atan2(c.q.y - x.y, c.q.x - x.x));
      }
    if (angles.empty()) {
      res.circle_missed = true;
      res.gamma = 2 * kPi;
      continue;
    }
    std::sort(angles.begin(), angles.end());
    double maxgap = 2 * kPi - (angles.back() - angles.front());
    for (size_t i = 0; i + 1 < angles.size(); ++i)
      maxgap = std::max(maxgap, angles[i + 1] - angles[i]);
    res.gamma = std::max(res.gamma, maxgap);
  }
  if (res.gamma <= 0) res.gamma = 2 * kPi;
  return res;
}

CurveNetwork project_to_domain(const CurveNetwork& net, const DomainSpec& domain) {
  if (!domain.convex())
    throw std::runtime_error("project_to_domain: domain is not convex");
  CurveNetwork out = net;
  for (auto& p : out.nodes) p = domain.project(p);
  for (auto& e : out.edges)
    for (auto& p : e.pts) p = domain.project(p);
  return out;
}

}  // namespace glueopt::geometry
