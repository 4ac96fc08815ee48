#pragma once

#include "polyserendip/barycentric.hpp"
#include "polyserendip/geometry.hpp"

#include <vector>

namespace polyserendip {

/// Points and positive weights; weights sum to the integration domain's area.
struct QuadratureRule {
    std::vector<Point> points;
    std::vector<double> weights;
    int degree = 0;

    [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre nodes and weights on [0, 1].
QuadratureRule gauss_legendre_01(int npoints);

/// Rule on the reference triangle (0,0), (1,0), (0,1), exact for total degree
/// <= degree, 1 <= degree <= 20. Collapsed (Duffy) product of Gauss-Legendre
/// and Gauss-Jacobi(1,0) points, so all points are interior and all weights
/// positive. Degree 1 is the centroid rule.
QuadratureRule triangle_rule(int degree);

/// Triangle rule mapped onto the centroid fan, each fan triangle split at its
/// edge midpoint so every polygon vertex is a collapsed corner of the rule,
/// then refined once more into four. Sub-triangles at flat vertices are
/// additionally graded toward the boundary line.
QuadratureRule polygon_rule(const Polygon& polygon, int degree);

/// Triangle rule on the fan (v_0, v_i, v_{i+1}); skips nothing, so a flat
/// vertex other than v_0 throws.
QuadratureRule vertex_fan_rule(const Polygon& polygon, int degree);

/// Rule suited to the coordinate kind: the vertex-0 fan for triangulation
/// coordinates (piecewise polynomial there), polygon_rule otherwise.
QuadratureRule element_rule(const Polygon& polygon, CoordinateKind kind, int degree);

/// Maps a reference-triangle rule onto triangle (p0, p1, p2) and appends it.
void append_mapped(const QuadratureRule& reference, const Point& p0, const Point& p1, const Point& p2,
    QuadratureRule& out);

} // namespace polyserendip
