#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "glueopt/geometry.hpp"

using namespace glueopt::geometry;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

CurveNetwork segment_net(Point2 a, Point2 b) {
  CurveNetwork net;
  net.nodes = {a, b};
  net.edges.push_back({0, 1, {a, b}});
  return net;
}

// closed regular n-gon of radius rho as a single self-loop edge
CurveNetwork polygon_loop(Point2 c, double rho, int n) {
  CurveNetwork net;
  std::vector<Point2> pts;
  for (int k = 0; k <= n; ++k) {
    double th = 2 * kPi * k / n;
    pts.push_back({c.x + rho * std::cos(th), c.y + rho * std::sin(th)});
  }
  pts.back() = pts.front();
  net.nodes = {pts.front()};
  net.edges.push_back({0, 0, pts});
  return net;
}

// three unit spokes from c at the given polar angles
CurveNetwork propeller(Point2 c, double a0, double a1, double a2, double len = 1.0) {
  CurveNetwork net;
  net.nodes = {c};
  for (double a : {a0, a1, a2}) {
    Point2 tip{c.x + len * std::cos(a), c.y + len * std::sin(a)};
    net.nodes.push_back(tip);
    net.edges.push_back({0, (int)net.nodes.size() - 1, {c, tip}});
  }
  return net;
}
}  // namespace

TEST_CASE("point helpers: distances, normals, products") {
  Point2 a{1, 2}, b{4, 6};
  CHECK(dist(a, b) == Approx(5.0));
  CHECK(dot(a, b) == Approx(16.0));
  CHECK(cross(a, b) == Approx(-2.0));
  Point2 n = perp(Point2{1, 0});
  CHECK(n.x == Approx(0.0));
  CHECK(n.y == Approx(1.0));  // left normal of +x is +y
  CHECK(norm(normalized(Point2{3, -4})) == Approx(1.0));
}

TEST_CASE("segment distance and closest point") {
  Point2 a{0, 0}, b{2, 0};
  CHECK(segment_distance({1, 3}, a, b) == Approx(3.0));
  CHECK(segment_distance({-3, 4}, a, b) == Approx(5.0));  // clamps to a
  CHECK(segment_distance({5, 4}, a, b) == Approx(5.0));   // clamps to b
  Point2 q = segment_closest({1, 3}, a, b);
  CHECK(q.x == Approx(1.0));
  CHECK(q.y == Approx(0.0));
  // degenerate segment
  CHECK(segment_distance({3, 4}, a, a) == Approx(5.0));
}

TEST_CASE("total length of an inscribed 64-gon matches the closed form") {
  auto net = polygon_loop({0, 0}, 1.0, 64);
  double expected = 2 * 64 * std::sin(kPi / 64);  // n chords of 2 sin(pi/n)
  CHECK(total_length(net) == Approx(expected).epsilon(1e-12));
  CHECK(expected == Approx(6.2806623139095737).epsilon(1e-12));
}

TEST_CASE("network validation rejects structural defects") {
  CurveNetwork net = segment_net({0, 0}, {1, 0});
  CHECK_NOTHROW(net.validate());
  CurveNetwork bad = net;
  bad.edges[0].b = 7;
  CHECK_THROWS_AS(bad.validate(), std::runtime_error);
  bad = net;
  bad.edges[0].pts.back() = {5, 5};  // polyline end detached from node
  CHECK_THROWS_AS(bad.validate(), std::runtime_error);
  bad = net;
  bad.edges[0].pts = {{0, 0}};
  CHECK_THROWS_AS(bad.validate(), std::runtime_error);
}

TEST_CASE("connectivity and loop detection") {
  CurveNetwork net;
  net.nodes = {{0, 0}, {1, 0}, {2, 0}, {5, 5}};
  net.edges.push_back({0, 1, {{0, 0}, {1, 0}}});
  net.edges.push_back({1, 2, {{1, 0}, {2, 0}}});
  CHECK_FALSE(is_connected(net));  // node 3 isolated
  net.edges.push_back({2, 3, {{2, 0}, {5, 5}}});
  CHECK(is_connected(net));
  CHECK_FALSE(contains_loop(net));
  net.edges.push_back({3, 0, {{5, 5}, {0, 0}}});
  CHECK(contains_loop(net));
  CHECK(contains_loop(polygon_loop({0, 0}, 1, 16)));  // self loop
  CHECK(is_connected(CurveNetwork{}));                // empty is connected
}

TEST_CASE("disc domain: membership, projection, bbox, area") {
  auto d = DomainSpec::disc({1, 0}, 2.0);
  CHECK(d.inside({1, 0}));
  CHECK(d.inside({2.9, 0}));
  CHECK_FALSE(d.inside({3, 0}));       // boundary is not strict interior
  CHECK(d.inside_closed({3, 0}));
  CHECK(d.boundary_distance({1, 0}) == Approx(2.0));
  CHECK(d.boundary_distance({4, 0}) == Approx(1.0));
  CHECK(d.convex());
  Point2 p = d.project({6, 0});
  CHECK(p.x == Approx(3.0));
  auto [lo, hi] = d.bbox();
  CHECK(lo.x == Approx(-1.0));
  CHECK(hi.y == Approx(2.0));
  CHECK(d.area() == Approx(4 * kPi));
}

TEST_CASE("polygon domain: membership, projection, area, orientation") {
  // clockwise input gets normalized
  auto sq = DomainSpec::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(sq.inside({0.5, 0.5}));
  CHECK_FALSE(sq.inside({0.5, 0}));
  CHECK(sq.inside_closed({0.5, 0}));
  CHECK_FALSE(sq.inside({1.5, 0.5}));
  CHECK(sq.boundary_distance({0.5, 0.5}) == Approx(0.5));
  CHECK(sq.boundary_distance({0.5, 0.2}) == Approx(0.2));
  CHECK(sq.convex());
  CHECK(sq.area() == Approx(1.0));
  Point2 p = sq.project({0.5, 2});
  CHECK(p.x == Approx(0.5));
  CHECK(p.y == Approx(1.0));
  Point2 corner = sq.project({-1, -2});
  CHECK(corner.x == Approx(0.0));
  CHECK(corner.y == Approx(0.0));

  auto ell = DomainSpec::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  CHECK_FALSE(ell.convex());
  CHECK(ell.area() == Approx(3.0));
  CHECK(ell.inside({1.5, 0.5}));
  CHECK_FALSE(ell.inside({1.5, 1.5}));
  CHECK_THROWS_AS(ell.project({1.5, 1.5}), std::runtime_error);
}

TEST_CASE("boundary circle angles: disc-circle and square-circle crossings") {
  auto d = DomainSpec::disc({0, 0}, 1.0);
  // circle about a boundary-adjacent point
  auto ang = d.boundary_circle_angles({0.8, 0}, 0.5);
  REQUIRE(ang.size() == 2);
  // crossing points must lie on both circles
  for (double a : ang) {
    Point2 q{0.8 + 0.5 * std::cos(a), 0.5 * std::sin(a)};
    CHECK(norm(q) == Approx(1.0).epsilon(1e-12));
  }
  CHECK(d.boundary_circle_angles({0, 0}, 0.5).empty());  // fully inside

  auto sq = DomainSpec::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  auto sa = sq.boundary_circle_angles({0.5, 0}, 0.25);
  REQUIRE(sa.size() == 2);  // meets the bottom side twice
}

TEST_CASE("flatness: straight line is flat, bent pair matches sin, corner is 1") {
  auto line = segment_net({-1, 0}, {1, 0});
  CHECK(flatness(line, {0, 0}, 0.5) == Approx(0.0).epsilon(1e-12));

  // rays 170 degrees apart: best line splits the residual 5 degrees
  double a170 = 170.0 * kPi / 180;
  CurveNetwork bent;
  bent.nodes = {{0, 0}, {1, 0}, {std::cos(a170), std::sin(a170)}};
  bent.edges.push_back({0, 1, {{0, 0}, {1, 0}}});
  bent.edges.push_back({0, 2, {{0, 0}, bent.nodes[2]}});
  // 36 direction samples include the optimal 175-degree line exactly
  double beta = flatness(bent, {0, 0}, 0.5, 36);
  CHECK(beta == Approx(std::sin(5.0 * kPi / 180)).epsilon(1e-3));
  CHECK(beta == Approx(0.087155742747658166).epsilon(1e-3));

  // right-angle corner: the best line is the anti-bisector, both rays
  // deviate 45 degrees from it -> beta = sin(pi/4)
  CurveNetwork corner;
  corner.nodes = {{0, 0}, {1, 0}, {0, 1}};
  corner.edges.push_back({0, 1, {{0, 0}, {1, 0}}});
  corner.edges.push_back({0, 2, {{0, 0}, {0, 1}}});
  CHECK(flatness(corner, {0, 0}, 0.5) == Approx(std::sqrt(0.5)).epsilon(1e-2));

  CHECK_THROWS_AS(flatness(line, {0, 0.9}, 0.05), std::runtime_error);
}

TEST_CASE("geodesic distance: along edges, around bends, across junctions") {
  // U shape: opposite tips are 3 apart along the wire, 1 apart in the plane
  CurveNetwork u;
  u.nodes = {{0, 1}, {1, 1}};
  u.edges.push_back({0, 1, {{0, 1}, {0, 0}, {1, 0}, {1, 1}}});
  CHECK(geodesic_distance(u, {0, 1}, {1, 1}) == Approx(3.0).epsilon(1e-12));
  CHECK(geodesic_distance(u, {0, 0.5}, {0, 1}) == Approx(0.5).epsilon(1e-12));
  // same-segment shortcut
  CHECK(geodesic_distance(u, {0.25, 0}, {0.75, 0}) == Approx(0.5).epsilon(1e-12));

  // V with 60 degrees between unit legs: tips are 1 apart, wire distance 2
  double a = kPi / 6;
  CurveNetwork v;
  Point2 t1{std::cos(a), std::sin(a)}, t2{std::cos(a), -std::sin(a)};
  v.nodes = {{0, 0}, t1, t2};
  v.edges.push_back({0, 1, {{0, 0}, t1}});
  v.edges.push_back({0, 2, {{0, 0}, t2}});
  CHECK(dist(t1, t2) == Approx(1.0));
  CHECK(geodesic_distance(v, t1, t2) == Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(geodesic_distance(u, {5, 5}, {0, 0}), std::runtime_error);
}

TEST_CASE("chord-arc constant: U shape hits 3 at the tips, V hits 2") {
  CurveNetwork u;
  u.nodes = {{0, 1}, {1, 1}};
  u.edges.push_back({0, 1, {{0, 1}, {0, 0}, {1, 0}, {1, 1}}});
  CHECK(chord_arc_constant(u) == Approx(3.0).epsilon(1e-9));

  double a = kPi / 6;
  CurveNetwork v;
  Point2 t1{std::cos(a), std::sin(a)}, t2{std::cos(a), -std::sin(a)};
  v.nodes = {{0, 0}, t1, t2};
  v.edges.push_back({0, 1, {{0, 0}, t1}});
  v.edges.push_back({0, 2, {{0, 0}, t2}});
  CHECK(chord_arc_constant(v) == Approx(2.0).epsilon(1e-9));

  CHECK(chord_arc_constant(segment_net({0, 0}, {1, 0})) == Approx(1.0));
}

TEST_CASE("ahlfors density: diameter chord counts twice, tip counts once") {
  auto line = segment_net({-1, 0}, {1, 0});
  CHECK(ahlfors_density(line, {0, 0}, 0.25) == Approx(2.0).epsilon(1e-12));
  CHECK(ahlfors_density(line, {1, 0}, 0.25) == Approx(1.0).epsilon(1e-12));
  // off-network center at height d: each branch has length sqrt(r^2-d^2)
  double r = 0.5, d = 0.3;
  CHECK(ahlfors_density(line, {0, d}, r) ==
        Approx(2 * std::sqrt(r * r - d * d) / r).epsilon(1e-12));
  CHECK(ahlfors_density(CurveNetwork{}, {0, 0}, 1.0) == Approx(0.0));
}

TEST_CASE("branch count: chord, tip, triple, and vertex degeneracy") {
  auto line = segment_net({-1, 0}, {1, 0});
  CHECK(branch_count(line, {0.3, 0}, 0.25) == 2);
  CHECK(branch_count(line, {1, 0}, 0.25) == 1);
  CHECK(branch_count(line, {0, 0.5}, 0.25) == 0);

  auto prop = propeller({0, 0}, kPi / 2, kPi / 2 + 2 * kPi / 3,
                        kPi / 2 + 4 * kPi / 3);
  CHECK(branch_count(prop, {0, 0}, 0.5) == 3);

  // circle passing exactly through a polyline vertex is degenerate
  CurveNetwork bent;
  bent.nodes = {{-1, 0}, {1, 1}};
  bent.edges.push_back({0, 1, {{-1, 0}, {0, 0}, {1, 1}}});
  CHECK_THROWS_AS(branch_count(bent, {-0.5, 0}, 0.5), DegenerateCrossing);
  // tangent circle is degenerate too
  CHECK_THROWS_AS(branch_count(line, {0, 0.25}, 0.25), DegenerateCrossing);
}

TEST_CASE("crossing angles sit on the circle at the right polar angles") {
  auto line = segment_net({-1, 0}, {1, 0});
  auto ang = crossing_angles(line, {0.2, 0}, 0.3);
  REQUIRE(ang.size() == 2);
  std::sort(ang.begin(), ang.end());
  CHECK(ang[0] == Approx(0.0).epsilon(1e-9));  // crossing at (0.5, 0)
  CHECK(ang[1] == Approx(kPi).epsilon(1e-9));  // crossing at (-0.1, 0)
}

TEST_CASE("largest free arc: chord gives pi, tip 2 pi, triple 2 pi / 3") {
  auto big = DomainSpec::disc({0, 0}, 4.0);
  auto line = segment_net({-1, 0}, {1, 0});
  auto g = gamma_sup(line, big, {0, 0}, 0.05, 0.4);
  CHECK_FALSE(g.circle_missed);
  CHECK(g.gamma == Approx(kPi).epsilon(1e-12));

  auto half = segment_net({0, 0}, {1, 0});
  auto gh = gamma_sup(half, big, {0, 0}, 0.05, 0.4);
  CHECK(gh.gamma == Approx(2 * kPi).epsilon(1e-12));

  auto prop = propeller({0, 0}, 0, 2 * kPi / 3, 4 * kPi / 3);
  auto gp = gamma_sup(prop, big, {0, 0}, 0.05, 0.4);
  CHECK(gp.gamma == Approx(2 * kPi / 3).epsilon(1e-12));

  // circles too small to meet anything
  auto gm = gamma_sup(line, big, {0, 2}, 0.05, 0.4);
  CHECK(gm.circle_missed);
  CHECK(gm.gamma == Approx(2 * kPi));

  // the domain boundary is an obstacle as well: near-boundary circles
  // cross it twice, capping the free arc well below 2 pi
  auto tight = DomainSpec::disc({0, 0}, 1.0);
  auto gb = gamma_sup(half, tight, {0.9, 0}, 0.15, 0.2);
  CHECK_FALSE(gb.circle_missed);
  CHECK(gb.gamma > 2.0);
  CHECK(gb.gamma < 2.5);  // analytic sup over the range is about 2.28
}

TEST_CASE("domain projection never increases length") {
  auto d = DomainSpec::disc({0, 0}, 1.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.6, 1.6);
  for (int trial = 0; trial < 20; ++trial) {
    CurveNetwork net;
    net.nodes = {{uni(rng), uni(rng)}, {uni(rng), uni(rng)}};
    std::vector<Point2> pts{net.nodes[0]};
    for (int k = 0; k < 4; ++k) pts.push_back({uni(rng), uni(rng)});
    pts.push_back(net.nodes[1]);
    net.edges.push_back({0, 1, pts});
    auto proj = project_to_domain(net, d);
    CHECK(total_length(proj) <= total_length(net) + 1e-12);
    for (const auto& e : proj.edges)
      for (const auto& p : e.pts) CHECK(d.inside_closed(p));
  }
}
