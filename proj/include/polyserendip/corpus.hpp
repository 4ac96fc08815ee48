#pragma once

#include "polyserendip/fem.hpp"
#include "polyserendip/geometry.hpp"

#include <random>
#include <vector>

namespace polyserendip {

using Rng = std::mt19937_64;

Polygon unit_square();
/// Regular n-gon of circumradius `radius` centred at the origin, first vertex at angle `phase`.
Polygon regular_polygon(int n, double radius = 1.0, double phase = 0.0);
/// Unit square with an extra vertex at the midpoint of its bottom edge, listed
/// first: (0.5,0), (1,0), (1,1), (0,1), (0,0).
Polygon degenerate_pentagon();
/// Hexagon on the unit circle whose edges v2v3 and v5v0 have length about delta.
/// The diagonal {0, 3} has d_a = d_b = cos(delta)/(1 + sin(delta)).
Polygon shrinking_edge_hexagon(double delta);

/// Strictly convex n-gon: sorted random angles on a circle (minimum gap
/// enforced), then a random stretch, rotation and shift.
Polygon random_convex_polygon(int n, Rng& rng);

/// Random convex n-gon passing G1-G3 with gamma* = 6, d* = 0.05 diam, beta* = 0.95 pi.
Polygon random_shape_regular_polygon(int n, Rng& rng);
ShapeThresholds corpus_thresholds(const Polygon& polygon);

/// Uniform samples at least margin_rel * diameter inside the polygon.
std::vector<Point> random_interior_points(const Polygon& polygon, int count, Rng& rng, double margin_rel = 1e-3);

/// Conforming mesh of [0,1.6] x [0,1.1] mixing squares, triangles, a strictly
/// convex pentagon and a degenerate pentagon with a flat vertex.
PolyMesh mixed_mesh();

} // namespace polyserendip
