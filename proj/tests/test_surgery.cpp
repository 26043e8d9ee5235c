#include "doctest.h"

#include <cmath>
#include <numbers>

#include "glueopt/geometry.hpp"
#include "glueopt/surgery.hpp"

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

CurveNetwork circle_loop(Point2 c, double rho, int n) {
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

double sum_length(const std::vector<std::vector<Point2>>& chains) {
  double s = 0;
  for (const auto& ch : chains)
    for (size_t i = 0; i + 1 < ch.size(); ++i) s += dist(ch[i], ch[i + 1]);
  return s;
}
}  // namespace

TEST_CASE("from_chains merges coincident endpoints into shared nodes") {
  std::vector<std::vector<Point2>> chains{
      {{0, 0}, {1, 0}},
      {{1, 0}, {1, 1}},
      {{1.0 + 1e-9, 1.0}, {0, 1}},  // endpoint within merge_tol of chain 2
  };
  auto net = from_chains(chains, 1e-6);
  net.validate();
  CHECK(net.nodes.size() == 4);
  CHECK(net.edges.size() == 3);
  CHECK(is_connected(net));
  CHECK(total_length(net) == Approx(3.0).epsilon(1e-6));
}

TEST_CASE("from_chains drops degenerate chains and duplicate points") {
  std::vector<std::vector<Point2>> chains{
      {{0, 0}, {0, 0}, {1, 0}},          // consecutive duplicate point
      {{2, 0}, {2.0 + 1e-9, 0}},         // near zero length chain
      {{1, 0}, {2, 0}},
  };
  auto net = from_chains(chains, 1e-6);
  net.validate();
  CHECK(net.edges.size() == 2);
  CHECK(total_length(net) == Approx(2.0).epsilon(1e-6));
}

TEST_CASE("ball clipping splits a chord into exact outside pieces") {
  auto line = segment_net({-1, 0}, {1, 0});
  auto out = clip_outside_ball(line, {0, 0}, 0.25);
  REQUIRE(out.size() == 2);
  CHECK(sum_length(out) == Approx(2.0 - 0.5).epsilon(1e-12));
  // cut points land on the circle
  for (const auto& ch : out) {
    bool touches = std::abs(norm(ch.front()) - 0.25) < 1e-12 ||
                   std::abs(norm(ch.back()) - 0.25) < 1e-12;
    CHECK(touches);
  }
  auto in = clip_inside_ball(line, {0, 0}, 0.25);
  REQUIRE(in.size() == 1);
  CHECK(sum_length(in) == Approx(0.5).epsilon(1e-12));

  // off-center ball still partitions the length exactly
  auto out2 = clip_outside_ball(line, {0.4, 0}, 0.3);
  auto in2 = clip_inside_ball(line, {0.4, 0}, 0.3);
  CHECK(sum_length(out2) + sum_length(in2) == Approx(2.0).epsilon(1e-12));

  // ball missing the network leaves it untouched
  auto out3 = clip_outside_ball(line, {0, 5}, 0.25);
  CHECK(sum_length(out3) == Approx(2.0).epsilon(1e-12));
  CHECK(clip_inside_ball(line, {0, 5}, 0.25).empty());
}

TEST_CASE("remove_ball keeps a loop connected but disconnects a chord") {
  auto line = segment_net({-1, 0}, {1, 0});
  CHECK_FALSE(remove_ball(line, {0, 0}, 0.25, 1e-9).has_value());

  auto loop = circle_loop({0, 0}, 1.0, 64);
  auto cut = remove_ball(loop, {1, 0}, 0.3, 1e-9);
  REQUIRE(cut.has_value());
  cut->validate();
  CHECK(is_connected(*cut));
  CHECK_FALSE(contains_loop(*cut));
  CHECK(total_length(*cut) < total_length(loop));
  // removed arc is about 2 * rho * asin(r / (2 rho)) short... just bound it
  CHECK(total_length(*cut) > total_length(loop) - 2 * 0.3 - 0.2);

  // ball clear of the network returns it unchanged (same length)
  auto same = remove_ball(line, {0, 5}, 0.25, 1e-9);
  REQUIRE(same.has_value());
  CHECK(total_length(*same) == Approx(2.0).epsilon(1e-12));

  // ball swallowing everything yields nullopt
  CHECK_FALSE(remove_ball(line, {0, 0}, 3.0, 1e-9).has_value());
}

TEST_CASE("chord_replace straightens a bent detour through a ball") {
  // V path from (-1,0) up to (0,0.4) and back down to (1,0)
  CurveNetwork bent;
  bent.nodes = {{-1, 0}, {1, 0}};
  bent.edges.push_back({0, 1, {{-1, 0}, {0, 0.4}, {1, 0}}});
  double before = total_length(bent);

  auto flat = chord_replace(bent, {0, 0.4}, 0.3, 1e-9);
  REQUIRE(flat.has_value());
  flat->validate();
  CHECK(is_connected(*flat));
  CHECK(total_length(*flat) < before);

  // cap tips only once -> one crossing -> refuse
  CHECK_FALSE(chord_replace(bent, {-1, 0}, 0.3, 1e-9).has_value());
  // ball missing the network -> refuse
  CHECK_FALSE(chord_replace(bent, {0, 5}, 0.3, 1e-9).has_value());
}

TEST_CASE("chord_replace on a straight chord is length neutral") {
  auto line = segment_net({-1, 0}, {1, 0});
  auto r = chord_replace(line, {0.2, 0}, 0.3, 1e-9);
  REQUIRE(r.has_value());
  CHECK(total_length(*r) == Approx(2.0).epsilon(1e-9));
  CHECK(is_connected(*r));
}

TEST_CASE("circle_wall_replace rebuilds the ball interior as a circle") {
  auto dom = DomainSpec::disc({0, 0}, 2.0);
  auto line = segment_net({-1, 0}, {1, 0});
  double r = 0.3, seg = 0.05;
  auto walled = circle_wall_replace(line, dom, {0, 0}, r, seg, 1e-9);
  REQUIRE(walled.has_value());
  walled->validate();
  CHECK(is_connected(*walled));
  CHECK(contains_loop(*walled));  // the full circle survives as a loop
  // length = outside pieces + polygonized circle
  double expect = (2.0 - 2 * r) + 2 * kPi * r;
  CHECK(total_length(*walled) == Approx(expect).epsilon(2e-3));
  // every vertex stays in the domain
  for (const auto& e : walled->edges)
    for (const auto& p : e.pts) CHECK(dom.inside_closed(p));
}

TEST_CASE("circle_wall_replace clips the wall at the domain boundary") {
  auto dom = DomainSpec::disc({0, 0}, 1.0);
  auto line = segment_net({-1, 0}, {1, 0});
  // ball centered on the boundary point (1, 0): only the inside arc is kept
  auto walled = circle_wall_replace(line, dom, {0.9, 0}, 0.3, 0.02, 1e-9);
  REQUIRE(walled.has_value());
  walled->validate();
  CHECK(is_connected(*walled));
  for (const auto& e : walled->edges)
    for (const auto& p : e.pts) CHECK(dom.inside_closed(p));
  // strictly less than the full circle would give
  double full = (2.0 - 0.0) + 2 * kPi * 0.3;
  CHECK(total_length(*walled) < full);
}

TEST_CASE("self intersection detection: crossing, touching, sharing") {
  // X crossing of two independent edges
  CurveNetwork x;
  x.nodes = {{-1, -1}, {1, 1}, {-1, 1}, {1, -1}};
  x.edges.push_back({0, 1, {{-1, -1}, {1, 1}}});
  x.edges.push_back({2, 3, {{-1, 1}, {1, -1}}});
  CHECK(self_intersects(x));

  // T touch: an edge ending in the interior of another
  CurveNetwork t;
  t.nodes = {{-1, 0}, {1, 0}, {0, 1}, {0, 0}};
  t.edges.push_back({0, 1, {{-1, 0}, {1, 0}}});
  t.edges.push_back({2, 3, {{0, 1}, {0, 0}}});
  CHECK(self_intersects(t));

  // star: three edges sharing one node do not self intersect
  CurveNetwork star;
  star.nodes = {{0, 0}, {1, 0}, {0, 1}, {-1, 0}};
  star.edges.push_back({0, 1, {{0, 0}, {1, 0}}});
  star.edges.push_back({0, 2, {{0, 0}, {0, 1}}});
  star.edges.push_back({0, 3, {{0, 0}, {-1, 0}}});
  CHECK_FALSE(self_intersects(star));

  // plain polyline bends are fine
  CurveNetwork bend;
  bend.nodes = {{0, 0}, {1, 1}};
  bend.edges.push_back({0, 1, {{0, 0}, {1, 0}, {1, 1}}});
  CHECK_FALSE(self_intersects(bend));
}
