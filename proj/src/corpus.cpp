#include "polyserendip/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polyserendip {

Polygon unit_square()
{
    return Polygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
}

Polygon regular_polygon(int n, double radius, double phase)
{
    if (n < 3) {
        throw InvalidInput("regular polygon needs n >= 3");
    }
    std::vector<Point> v;
    for (int i = 0; i < n; ++i) {
        const double t = phase + 2.0 * std::numbers::pi * i / n;
        v.emplace_back(radius * std::cos(t), radius * std::sin(t));
    }
    return Polygon(std::move(v));
}

Polygon degenerate_pentagon()
{
    return Polygon({{0.5, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.0, 0.0}}, Convexity::AllowCollinear);
}

Polygon shrinking_edge_hexagon(double delta)
{
    if (!(delta > 0.0 && delta < std::numbers::pi / 2)) {
        throw InvalidInput("delta must lie in (0, pi/2)");
    }
    const double pi = std::numbers::pi;
    const double angles[] = {pi, 1.5 * pi, 2.0 * pi - delta, 0.0, 0.5 * pi, pi - delta};
    std::vector<Point> v;
    for (double t : angles) {
        v.emplace_back(std::cos(t), std::sin(t));
    }
    return Polygon(std::move(v));
}

Polygon random_convex_polygon(int n, Rng& rng)
{
    if (n < 3) {
        throw InvalidInput("random polygon needs n >= 3");
    }
    const double two_pi = 2.0 * std::numbers::pi;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double min_gap = 0.2 * two_pi / n;
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (;;) {
        for (double& a : angles) {
            a = two_pi * unit(rng);
        }
        std::sort(angles.begin(), angles.end());
        double gap = two_pi - angles.back() + angles.front();
        for (std::size_t i = 1; i < angles.size(); ++i) {
            gap = std::min(gap, angles[i] - angles[i - 1]);
        }
        if (gap >= min_gap) {
            break;
        }
    }
    const double stretch = 0.5 + 1.5 * unit(rng);
    const double rot = two_pi * unit(rng);
    const Point shift(4.0 * unit(rng) - 2.0, 4.0 * unit(rng) - 2.0);
    const double scale = 0.1 + 3.0 * unit(rng);
    const Eigen::Matrix2d r = Eigen::Rotation2Dd(rot).toRotationMatrix();
    std::vector<Point> v;
    for (double a : angles) {
        v.push_back(shift + scale * (r * Point(stretch * std::cos(a), std::sin(a))));
    }
    return Polygon(std::move(v));
}

ShapeThresholds corpus_thresholds(const Polygon& polygon)
{
    ShapeThresholds t;
    t.gamma_star = 6.0;
    t.d_star = 0.05 * polygon.diameter();
    t.beta_star = 0.95 * std::numbers::pi;
    t.relaxed_g3 = false;
    return t;
}

Polygon random_shape_regular_polygon(int n, Rng& rng)
{
    for (;;) {
        Polygon p = random_convex_polygon(n, rng);
        if (check_conditions(p, corpus_thresholds(p)).all()) {
            return p;
        }
    }
}

std::vector<Point> random_interior_points(const Polygon& polygon, int count, Rng& rng, double margin_rel)
{
    Point lo = polygon.vertex(0);
    Point hi = lo;
    for (const Point& p : polygon.vertices()) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    std::uniform_real_distribution<double> ux(lo.x(), hi.x());
    std::uniform_real_distribution<double> uy(lo.y(), hi.y());
    const double margin = margin_rel * polygon.diameter();
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    while (static_cast<int>(out.size()) < count) {
        const Point x(ux(rng), uy(rng));
        if (polygon.contains(x, margin)) {
            out.push_back(x);
        }
    }
    return out;
}

PolyMesh mixed_mesh()
{
    std::vector<Point> v{
        {0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0},  // 0 1 2
        {0.0, 0.5}, {0.5, 0.5}, {1.0, 0.5},  // 3 4 5
        {0.0, 1.0}, {1.0, 1.0},              // 6 7
        {1.5, 0.0}, {1.6, 0.5}, {1.5, 1.0},  // 8 9 10
        {1.2, 1.1},                          // 11
    };
    std::vector<std::vector<int>> cells{
        {0, 1, 4, 3},          // square
        {1, 2, 5, 4},          // square
        {4, 5, 7, 6, 3},       // degenerate pentagon, flat at vertex 4
        {2, 8, 9},             // triangle
        {2, 9, 5},             // triangle
        {5, 9, 10, 11, 7},     // convex pentagon
    };
    return PolyMesh(std::move(v), std::move(cells));
}

} // namespace polyserendip
