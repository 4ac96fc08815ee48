#include "polyserendip/geometry.hpp"

#include "polyserendip/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace polyserendip {

namespace {

// Relative tolerance on cross products scaled by the two edge lengths.
constexpr double kConvexityTol = 1e-12;

double interior_angle(const Point& prev, const Point& v, const Point& next)
{
    const Vector u = prev - v;
    const Vector w = next - v;
    return std::atan2(std::abs(cross(u, w)), u.dot(w));
}

} // namespace

Polygon::Polygon(std::vector<Point> vertices, Convexity mode)
    : vertices_(std::move(vertices)), mode_(mode)
{
    const int n = size();
    if (n < 3) {
        throw InvalidInput("polygon needs at least 3 vertices");
    }
    for (const auto& v : vertices_) {
        if (!std::isfinite(v.x()) || !std::isfinite(v.y())) {
            throw InvalidInput("polygon vertex is not finite");
        }
    }

    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            scale = std::max(scale, (vertices_[i] - vertices_[j]).norm());
        }
    }
    diameter_ = scale;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if ((vertices_[i] - vertices_[j]).norm() <= 1e-14 * scale) {
                std::ostringstream msg;
                msg << "polygon has repeated vertices " << i << " and " << j;
                throw InvalidInput(msg.str());
            }
        }
    }

    double twice_area = 0.0;
    Point moment = Point::Zero();
    for (int i = 0; i < n; ++i) {
        const Point& p = vertices_[i];
        const Point& q = vertices_[(i + 1) % n];
        const double c = cross(p, q);
        twice_area += c;
        moment += c * (p + q);
    }
    if (std::abs(twice_area) <= 1e-14 * scale * scale) {
        throw GeometryError("degenerate polygon (near-zero area)");
    }
    if (twice_area < 0.0) {
        throw InvalidInput("polygon vertices must be in counterclockwise order");
    }
    area_ = 0.5 * twice_area;
    centroid_ = moment / (3.0 * twice_area);

    flat_.assign(static_cast<std::size_t>(n), false);
    double angle_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vector e_in = vertices_[i] - vertices_[(i + n - 1) % n];
        const Vector e_out = vertices_[(i + 1) % n] - vertices_[i];
        const double rel = cross(e_in, e_out) / (e_in.norm() * e_out.norm());
        if (rel > kConvexityTol) {
            // strictly convex corner
        } else if (std::abs(rel) <= kConvexityTol && e_in.dot(e_out) > 0.0 && mode == Convexity::AllowCollinear) {
            flat_[static_cast<std::size_t>(i)] = true;
        } else {
            throw InvalidInput("polygon not convex");
        }
        angle_sum += interior_angle(vertices_[(i + n - 1) % n], vertices_[i], vertices_[(i + 1) % n]);
    }
    // Rules out self-overlapping (star) vertex orders that turn left everywhere.
    if (std::abs(angle_sum - (n - 2) * std::numbers::pi) > 1e-8) {
        throw InvalidInput("polygon not convex");
    }
}

bool Polygon::has_flat_vertex() const
{
    return std::any_of(flat_.begin(), flat_.end(), [](bool f) { return f; });
}

double Polygon::edge_distance(int i, const Point& x) const
{
    const Point& p = vertex(i);
    const Vector e = vertex(i + 1) - p;
    return cross(e, x - p) / e.norm();
}

double Polygon::interior_distance(const Point& x) const
{
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i) {
        d = std::min(d, edge_distance(i, x));
    }
    return d;
}

ShapeMetrics shape_metrics(const Polygon& polygon)
{
    const int n = polygon.size();
    ShapeMetrics m;
    m.diameter = polygon.diameter();

    // Inward unit normals and offsets: distance_k(x) = normal_k . x - offset_k.
    std::vector<Vector> normals(static_cast<std::size_t>(n));
    std::vector<double> offsets(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const Vector e = polygon.vertex(k + 1) - polygon.vertex(k);
        normals[k] = perp(e).normalized();
        offsets[k] = normals[k].dot(polygon.vertex(k));
    }

    const double tol = 1e-12 * m.diameter;
    double best_r = -1.0;
    Point best_c = Point::Zero();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                Eigen::Matrix3d sys;
                Eigen::Vector3d rhs;
                const int idx[3] = {i, j, k};
                for (int r = 0; r < 3; ++r) {
                    sys(r, 0) = normals[idx[r]].x();
                    sys(r, 1) = normals[idx[r]].y();
                    sys(r, 2) = -1.0;
                    rhs(r) = offsets[idx[r]];
                }
                if (std::abs(sys.determinant()) < 1e-12) {
                    continue;
                }
                const Eigen::Vector3d sol = sys.partialPivLu().solve(rhs);
                const Point c(sol(0), sol(1));
                const double r = sol(2);
                if (r <= 0.0) {
                    continue;
                }
                bool feasible = true;
                for (int q = 0; q < n && feasible; ++q) {
                    feasible = normals[q].dot(c) - offsets[q] >= r - tol;
                }
                if (!feasible) {
                    continue;
                }
                const bool better = r > best_r + tol;
                const bool tie = std::abs(r - best_r) <= tol;
                const bool lex_smaller = c.x() < best_c.x() - tol
                    || (std::abs(c.x() - best_c.x()) <= tol && c.y() < best_c.y() - tol);
                if (better || (tie && lex_smaller)) {
                    best_r = std::max(r, best_r);
                    best_c = c;
                }
            }
        }
    }
    if (best_r <= 0.0) {
        throw GeometryError("could not locate the incircle");
    }
    m.inradius = best_r;
    m.incenter = best_c;
    m.aspect_ratio = m.diameter / m.inradius;
    m.interior_angles.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        m.interior_angles[i] = interior_angle(polygon.vertex(i - 1), polygon.vertex(i), polygon.vertex(i + 1));
    }
    return m;
}

double epsilon_star(double d_star, double beta_star)
{
    return d_star * std::sin((std::numbers::pi - beta_star) / 2.0);
}

ShapeConditions check_conditions(const Polygon& polygon, const ShapeThresholds& thresholds)
{
    if (!(thresholds.gamma_star > 0.0) || !(thresholds.d_star > 0.0) || !(thresholds.beta_star > 0.0)
        || !(thresholds.beta_star < std::numbers::pi)) {
        throw InvalidInput("shape thresholds must be positive with beta_star < pi");
    }
    const ShapeMetrics metrics = shape_metrics(polygon);
    const int n = polygon.size();

    ShapeConditions out;
    out.thresholds = thresholds;
    out.epsilon_star = epsilon_star(thresholds.d_star, thresholds.beta_star);
    out.aspect_ratio_ok = metrics.aspect_ratio < thresholds.gamma_star;

    out.min_edge_ok = true;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!((polygon.vertex(i) - polygon.vertex(j)).norm() > thresholds.d_star)) {
                out.min_edge_ok = false;
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        if (!(metrics.interior_angles[i] < thresholds.beta_star)) {
            out.large_angle_vertices.push_back(i);
        }
    }
    const auto& bad = out.large_angle_vertices;
    out.strict_max_angle_ok = bad.empty();

    // Violators form one cyclic run iff exactly one violator has a non-violating predecessor.
    bool single_run = true;
    if (!bad.empty() && static_cast<int>(bad.size()) < n) {
        std::vector<bool> is_bad(static_cast<std::size_t>(n), false);
        for (int v : bad) {
            is_bad[v] = true;
        }
        int run_starts = 0;
        for (int i = 0; i < n; ++i) {
            if (is_bad[i] && !is_bad[(i + n - 1) % n]) {
                ++run_starts;
            }
        }
        single_run = run_starts == 1;
    }
    out.max_angle_ok = thresholds.relaxed_g3 ? single_run : out.strict_max_angle_ok;
    return out;
}

DiagonalFrame::DiagonalFrame(const Point& va, const Point& vb)
{
    const Vector d = vb - va;
    const double len = d.norm();
    if (!(len > 0.0)) {
        throw InvalidInput("diagonal endpoints coincide");
    }
    const Vector u = d / len;
    rotation_ << u.x(), u.y(), -u.y(), u.x();
    origin_ = 0.5 * (va + vb);
    half_length_ = 0.5 * len;
}

bool is_strict_diagonal(int n, int a, int b)
{
    const int diff = (((b - a) % n) + n) % n;
    return diff != 0 && diff != 1 && diff != n - 1;
}

DiagonalFrame diagonal_frame(const Polygon& polygon, int a, int b)
{
    const int n = polygon.size();
    if (!is_strict_diagonal(n, a, b)) {
        std::ostringstream msg;
        msg << "{" << a << ", " << b << "} is not a strict diagonal of a " << n << "-gon";
        throw InvalidInput(msg.str());
    }
    return DiagonalFrame(polygon.vertex(a), polygon.vertex(b));
}

Polygon scaled(const Polygon& polygon, const Point& shift, double scale)
{
    std::vector<Point> vs;
    vs.reserve(static_cast<std::size_t>(polygon.size()));
    for (const auto& v : polygon.vertices()) {
        vs.push_back(scale * (v - shift));
    }
    return Polygon(std::move(vs), polygon.convexity());
}

} // namespace polyserendip
