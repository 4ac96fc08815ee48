#pragma once

#include "polyserendip/geometry.hpp"
#include "polyserendip/index_sets.hpp"

#include <string_view>
#include <vector>

namespace polyserendip {

enum class CoordinateKind {
    Wachspress,
    MeanValue,
    /// Fan triangulation from vertex 0.
    Triangulation,
};

std::string_view to_string(CoordinateKind kind);
/// Accepts "wachspress", "meanvalue" (or "mean_value"), "triangulation"; throws InvalidInput.
CoordinateKind parse_coordinate_kind(std::string_view name);

/// lambda_i(x) and grad lambda_i(x), i = 0..n-1. Gradients are empty for
/// boundary evaluations.
struct CoordEval {
    Point point = Point::Zero();
    std::vector<double> values;
    std::vector<Vector> gradients;
};

/// mu_ab = lambda_a lambda_b in the canonical V, E, D ordering.
struct PairwiseEval {
    std::vector<double> values;
    std::vector<Vector> gradients;
};

/// Immutable per-polygon evaluator. Vertex-only quantities (corner areas, fan
/// triangles) are computed once at construction.
class BarycentricCoordinates {
public:
    BarycentricCoordinates(Polygon polygon, CoordinateKind kind, double boundary_eps_rel = 1e-10);

    [[nodiscard]] const Polygon& polygon() const { return polygon_; }
    [[nodiscard]] CoordinateKind kind() const { return kind_; }
    [[nodiscard]] double boundary_eps() const { return boundary_eps_; }

    /// Values and analytic gradients at a strictly interior point; throws
    /// BoundaryEvaluationError within boundary_eps of the boundary.
    [[nodiscard]] CoordEval eval(const Point& x) const;
    void eval(const Point& x, CoordEval& out) const;

private:
    void wachspress(const Point& x, CoordEval& out) const;
    void mean_value(const Point& x, CoordEval& out) const;
    void triangulation(const Point& x, CoordEval& out) const;

    Polygon polygon_;
    CoordinateKind kind_;
    double boundary_eps_;
    std::vector<double> corner_area_;
};

CoordEval eval_coords(const Polygon& polygon, CoordinateKind kind, const Point& x);
/// Gradients only; same contract as eval_coords.
std::vector<Vector> eval_gradients(const Polygon& polygon, CoordinateKind kind, const Point& x);

/// Exact boundary values on edge (v_i, v_{i+1}) at parameter t in [0, 1]:
/// lambda_i = 1 - t, lambda_{i+1} = t, all others zero.
CoordEval eval_boundary(const Polygon& polygon, int edge, double t);

/// Product rule applied to a coordinate evaluation; gradients are produced
/// only when the input carries them.
PairwiseEval pairwise_products(const IndexSets& sets, const CoordEval& coords);
void pairwise_products(const IndexSets& sets, const CoordEval& coords, PairwiseEval& out);

PairwiseEval eval_pairwise(const Polygon& polygon, CoordinateKind kind, const Point& x);

} // namespace polyserendip
