#pragma once

// Planar curve networks (connected polyline systems) and the geometric
// measurements used by the solver, the diagnostics and the optimizer:
// length, connectivity, flatness relative to lines, geodesic metric,
// circle crossings, free-arc bounds and domain projection.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace glueopt::geometry {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 normalized(Point2 a) {
  double n = norm(a);
  return n > 0 ? Point2{a.x / n, a.y / n} : Point2{0, 0};
}
// rotate by +90 degrees (left normal of a direction vector)
inline Point2 perp(Point2 a) { return {-a.y, a.x}; }

// Distance from p to the closed segment [a, b].
double segment_distance(Point2 p, Point2 a, Point2 b);
// Closest point on [a, b] to p.
Point2 segment_closest(Point2 p, Point2 a, Point2 b);

// An edge is an open polyline joining two network nodes.  pts holds the
// full vertex chain including both node positions (pts.front() is the
// position of node a, pts.back() of node b).
struct Edge {
  int a = -1;
  int b = -1;
  std::vector<Point2> pts;
};

// One (segment) of the network with its owning edge recorded; the flat
// list view used by most geometric queries.
struct Segment {
  Point2 p, q;
  int edge = -1;
  int index = -1;  // segment index within the edge polyline
};

struct CurveNetwork {
  std::vector<Point2> nodes;
  std::vector<Edge> edges;

  bool empty() const { return nodes.empty(); }
  std::vector<Segment> segments() const;
  // Throws std::runtime_error when structurally invalid (bad indices,
  // non-finite coordinates, polyline ends not matching node positions,
  // zero-length segments).
  void validate() const;
};

double total_length(const CurveNetwork& net);
bool is_connected(const CurveNetwork& net);
bool contains_loop(const CurveNetwork& net);

// Membrane domains: a disc or a simple polygon.
class DomainSpec {
 public:
  static DomainSpec disc(Point2 center, double radius);
  static DomainSpec polygon(std::vector<Point2> vertices);

  bool is_disc() const { return kind_ == Kind::Disc; }
  Point2 center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<Point2>& vertices() const { return verts_; }

  bool inside(Point2 p) const;         // strict interior
  bool inside_closed(Point2 p) const;  // closure
  double boundary_distance(Point2 p) const;  // distance to the boundary curve
  bool convex() const;
  // Nearest point of the closed domain; only valid for convex domains.
  Point2 project(Point2 p) const;
  // Axis-aligned bounding box {min, max}.
  std::array<Point2, 2> bbox() const;
  // Polar angles (about x) at which the circle |p - x| = r meets the
  // domain boundary.
  std::vector<double> boundary_circle_angles(Point2 x, double r) const;
  double area() const;

 private:
  enum class Kind { Disc, Polygon };
  Kind kind_ = Kind::Disc;
  Point2 center_{};
  double radius_ = 1.0;
  std::vector<Point2> verts_;
};

// Scale-free deviation of the network from a straight line through x:
// min over line directions of the two-sided Hausdorff distance between
// net ∩ B_r(x) and the diameter chord, divided by r.  Directions are
// swept at pi/angle_samples steps; the chord side of the Hausdorff
// distance is sampled at arclength step r/256, the network side is
// exact (segment endpoints suffice for distance to a convex chord).
// Throws if the ball contains no part of the network.
double flatness(const CurveNetwork& net, Point2 x, double r, int angle_samples = 64);

// Intrinsic (along-network) distance between two points lying on the
// network (within snap_tol of it).  Throws when a point is off the
// network or the two points are in different components.
double geodesic_distance(const CurveNetwork& net, Point2 a, Point2 b,
                         double snap_tol = 1e-9);

// Max over sampled point pairs of geodesic / euclidean distance.
// samples points are spread at uniform arclength (node points always
// included).  Requires a connected network with positive length.
double chord_arc_constant(const CurveNetwork& net, int samples = 64);

// H^1(net ∩ B_r(x)) / r by exact clipping.
double ahlfors_density(const CurveNetwork& net, Point2 x, double r);

// Number of transversal crossings of the network with the circle
// |p - x| = r.  Throws DegenerateCrossing when a crossing is tangent or
// sits at a polyline vertex (callers retry with a perturbed radius).
struct DegenerateCrossing : std::runtime_error {
  using std::runtime_error::runtime_error;
};
int branch_count(const CurveNetwork& net, Point2 x, double r);
// Crossing angles (polar, about x) for the same circle; same throwing
// behaviour as branch_count.
std::vector<double> crossing_angles(const CurveNetwork& net, Point2 x, double r);

// Largest free arc of sampled circles about x: sup over r in (r0, r1)
// of (max angular gap of dB_r(x) minus network and domain boundary).
// When a sampled circle meets neither, the sup is 2*pi and
// circle_missed is set (the bound is then uninformative).
struct GammaResult {
  double gamma = 2 * 3.14159265358979323846;
  bool circle_missed = false;
};
GammaResult gamma_sup(const CurveNetwork& net, const DomainSpec& domain, Point2 x,
                      double r0, double r1, int radius_samples = 64);

// Pull every vertex into the closed domain (nearest-point projection).
// Convex domains only; throws otherwise.  Never increases total length.
CurveNetwork project_to_domain(const CurveNetwork& net, const DomainSpec& domain);

}  // namespace glueopt::geometry
