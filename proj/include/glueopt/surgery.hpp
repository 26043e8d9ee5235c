#pragma once

// Ball surgery on curve networks: remove the part inside a ball and
// optionally reconnect with a chord or with the circle itself.  Shared
// by the lower-bound competitors in diagnostics and by the topology
// moves of the optimizer.

#include <optional>
#include <vector>

#include "glueopt/geometry.hpp"

namespace glueopt::geometry {

// Rebuild a network from a set of open polyline chains, merging chain
// endpoints that coincide within merge_tol into shared nodes and
// dropping degenerate (near zero length) chains.
CurveNetwork from_chains(const std::vector<std::vector<Point2>>& chains,
                         double merge_tol);

// The polyline pieces of net outside the open ball B_r(x); pieces are
// cut exactly at the circle.
std::vector<std::vector<Point2>> clip_outside_ball(const CurveNetwork& net,
                                                   Point2 x, double r);
// The pieces inside the closed ball.
std::vector<std::vector<Point2>> clip_inside_ball(const CurveNetwork& net,
                                                  Point2 x, double r);

// net minus the open ball, no reconnection.  Empty result or a
// disconnected result yields nullopt.
std::optional<CurveNetwork> remove_ball(const CurveNetwork& net, Point2 x, double r,
                                        double merge_tol);

// Replace net ∩ B_r(x) by the chord joining the two circle crossings.
// Requires exactly two transversal crossings; nullopt when the crossing
// pattern is different/degenerate or the result is disconnected.
std::optional<CurveNetwork> chord_replace(const CurveNetwork& net, Point2 x, double r,
                                          double merge_tol);

// Replace net ∩ B_r(x) by the circle dB_r(x) clipped to the closed
// domain, polygonized at arclength step seg_len.  Crossing points of
// the removed pieces are inserted as wall vertices so the result stays
// connected.  nullopt when the result is disconnected.
std::optional<CurveNetwork> circle_wall_replace(const CurveNetwork& net,
                                                const DomainSpec& domain, Point2 x,
                                                double r, double seg_len,
                                                double merge_tol);

// True when any two non-adjacent segments of the network cross.
bool self_intersects(const CurveNetwork& net);

}  // namespace glueopt::geometry
