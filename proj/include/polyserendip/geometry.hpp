#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace polyserendip {

using Point = Eigen::Vector2d;
using Vector = Eigen::Vector2d;

/// z-component of the 2-D cross product.
inline double cross(const Vector& u, const Vector& v) { return u.x() * v.y() - u.y() * v.x(); }

/// Left-hand perpendicular; the inward normal direction of a counterclockwise edge.
inline Vector perp(const Vector& u) { return {-u.y(), u.x()}; }

enum class Convexity {
    Strict,
    /// Accept vertices with interior angle exactly pi (hanging nodes of adaptive meshes).
    AllowCollinear,
};

/// Convex polygon with counterclockwise vertices. Vertex indices are 0-based and
/// taken modulo n by every accessor.
class Polygon {
public:
    explicit Polygon(std::vector<Point> vertices, Convexity mode = Convexity::Strict);

    [[nodiscard]] int size() const { return static_cast<int>(vertices_.size()); }
    [[nodiscard]] const Point& vertex(int i) const { return vertices_[static_cast<std::size_t>(wrap(i))]; }
    [[nodiscard]] std::span<const Point> vertices() const { return vertices_; }
    [[nodiscard]] Point midpoint(int i, int j) const { return 0.5 * (vertex(i) + vertex(j)); }
    [[nodiscard]] int wrap(int i) const
    {
        const int n = size();
        return ((i % n) + n) % n;
    }

    [[nodiscard]] double area() const { return area_; }
    [[nodiscard]] Point centroid() const { return centroid_; }
    [[nodiscard]] double diameter() const { return diameter_; }
    [[nodiscard]] Convexity convexity() const { return mode_; }
    /// True when the interior angle at vertex i is pi (only possible with AllowCollinear).
    [[nodiscard]] bool is_flat(int i) const { return flat_[static_cast<std::size_t>(wrap(i))]; }
    [[nodiscard]] bool has_flat_vertex() const;

    /// Signed distance from x to the line of edge (v_i, v_{i+1}); positive inside.
    [[nodiscard]] double edge_distance(int i, const Point& x) const;
    /// Minimum of edge_distance over all edges.
    [[nodiscard]] double interior_distance(const Point& x) const;
    [[nodiscard]] bool contains(const Point& x, double margin = 0.0) const { return interior_distance(x) > margin; }

private:
    std::vector<Point> vertices_;
    std::vector<bool> flat_;
    Convexity mode_;
    double area_ = 0.0;
    double diameter_ = 0.0;
    Point centroid_ = Point::Zero();
};

struct ShapeMetrics {
    double diameter = 0.0;
    double inradius = 0.0;
    Point incenter = Point::Zero();
    double aspect_ratio = 0.0;
    std::vector<double> interior_angles;
};

/// Diameter, Chebyshev incircle, aspect ratio and interior angles.
ShapeMetrics shape_metrics(const Polygon& polygon);

struct ShapeThresholds {
    double gamma_star = 0.0;
    double d_star = 0.0;
    double beta_star = 0.0;
    /// Let the angle condition fail on one consecutive run of vertices.
    bool relaxed_g3 = false;
};

struct ShapeConditions {
    ShapeThresholds thresholds;
    double epsilon_star = 0.0;
    bool aspect_ratio_ok = false;  // G1
    bool min_edge_ok = false;      // G2
    bool max_angle_ok = false;     // G3, strict or relaxed per thresholds
    bool strict_max_angle_ok = false;
    std::vector<int> large_angle_vertices;

    [[nodiscard]] bool all() const { return aspect_ratio_ok && min_edge_ok && max_angle_ok; }
};

/// epsilon_star = d_star * sin((pi - beta_star) / 2).
double epsilon_star(double d_star, double beta_star);

ShapeConditions check_conditions(const Polygon& polygon, const ShapeThresholds& thresholds);

/// Rigid motion taking v_a to (-l, 0) and v_b to (l, 0); orientation preserving.
class DiagonalFrame {
public:
    DiagonalFrame(const Point& va, const Point& vb);

    [[nodiscard]] Point apply(const Point& p) const { return rotation_ * (p - origin_); }
    [[nodiscard]] Point inverse(const Point& q) const { return rotation_.transpose() * q + origin_; }
    [[nodiscard]] double half_length() const { return half_length_; }
    [[nodiscard]] const Eigen::Matrix2d& rotation() const { return rotation_; }
    [[nodiscard]] const Point& origin() const { return origin_; }

private:
    Eigen::Matrix2d rotation_;
    Point origin_;
    double half_length_;
};

/// Frame for the strict diagonal {a, b}; throws InvalidInput when {a, b} is an edge or a == b.
DiagonalFrame diagonal_frame(const Polygon& polygon, int a, int b);

/// True when b is neither a nor a neighbour of a (mod n).
bool is_strict_diagonal(int n, int a, int b);

/// Copy of the polygon under x -> scale * (x - shift).
Polygon scaled(const Polygon& polygon, const Point& shift, double scale);

} // namespace polyserendip
