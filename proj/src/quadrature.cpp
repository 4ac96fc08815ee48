#include "polyserendip/quadrature.hpp"

#include "polyserendip/error.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <mutex>

namespace polyserendip {

namespace {

// Golub-Welsch for Jacobi weight (1-t)^alpha (1+t)^beta on [-1, 1].
void gauss_jacobi(int m, double alpha, double beta, std::vector<double>& nodes, std::vector<double>& weights)
{
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    const double ab = alpha + beta;
    for (int k = 0; k < m; ++k) {
        const double s = 2.0 * k + ab;
        J(k, k) = (k == 0 && ab == 0.0) ? (beta - alpha) / (ab + 2.0)
                                        : (beta * beta - alpha * alpha) / (s * (s + 2.0));
        if (k + 1 < m) {
            const double k1 = k + 1.0;
            const double s1 = 2.0 * k1 + ab;
            const double num = 4.0 * k1 * (k1 + alpha) * (k1 + beta) * (k1 + ab);
            const double den = s1 * s1 * (s1 + 1.0) * (s1 - 1.0);
            J(k, k + 1) = J(k + 1, k) = std::sqrt(num / den);
        }
    }
    const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0)
        / std::tgamma(ab + 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(static_cast<std::size_t>(m));
    weights.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        nodes[k] = es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        weights[k] = mu0 * v0 * v0;
    }
}

QuadratureRule build_triangle_rule(int degree)
{
    const int m = (degree + 2) / 2;  // 2m - 1 >= degree
    std::vector<double> tu;
    std::vector<double> wu;
    std::vector<double> tv;
    std::vector<double> wv;
    gauss_jacobi(m, 0.0, 0.0, tu, wu);
    gauss_jacobi(m, 1.0, 0.0, tv, wv);

    QuadratureRule rule;
    rule.degree = degree;
    // x = u (1 - v), y = v, dx dy = (1 - v) du dv; v-weight (1 - v) absorbed by Jacobi(1, 0).
    for (int j = 0; j < m; ++j) {
        const double v = 0.5 * (1.0 + tv[j]);
        const double wvj = 0.25 * wv[j];
        for (int i = 0; i < m; ++i) {
            const double u = 0.5 * (1.0 + tu[i]);
            const double wui = 0.5 * wu[i];
            rule.points.emplace_back(u * (1.0 - v), v);
            rule.weights.push_back(wui * wvj);
        }
    }
    return rule;
}

} // namespace

QuadratureRule gauss_legendre_01(int npoints)
{
    if (npoints < 1) {
        throw InvalidInput("Gauss-Legendre rule needs at least one point");
    }
    std::vector<double> t;
    std::vector<double> w;
    gauss_jacobi(npoints, 0.0, 0.0, t, w);
    QuadratureRule rule;
    rule.degree = 2 * npoints - 1;
    for (int i = 0; i < npoints; ++i) {
        rule.points.emplace_back(0.5 * (1.0 + t[i]), 0.0);
        rule.weights.push_back(0.5 * w[i]);
    }
    return rule;
}

QuadratureRule triangle_rule(int degree)
{
    if (degree < 1 || degree > 20) {
        throw InvalidInput("triangle rule degree must be in [1, 20]");
    }
    static std::array<QuadratureRule, 21> cache;
    static std::array<std::once_flag, 21> once;
    std::call_once(once[static_cast<std::size_t>(degree)],
        [degree] { cache[static_cast<std::size_t>(degree)] = build_triangle_rule(degree); });
    return cache[static_cast<std::size_t>(degree)];
}

void append_mapped(const QuadratureRule& reference, const Point& p0, const Point& p1, const Point& p2,
    QuadratureRule& out)
{
    const double jac = cross(p1 - p0, p2 - p0);
    if (!(jac > 0.0)) {
        throw GeometryError("degenerate or inverted triangle in quadrature fan");
    }
    for (std::size_t q = 0; q < reference.size(); ++q) {
        const Point& r = reference.points[q];
        out.points.push_back(p0 + r.x() * (p1 - p0) + r.y() * (p2 - p0));
        out.weights.push_back(reference.weights[q] * jac);
    }
}

QuadratureRule polygon_rule(const Polygon& polygon, int degree)
{
    const QuadratureRule ref = triangle_rule(degree);
    QuadratureRule out;
    out.degree = degree;
    const int n = polygon.size();
    out.points.reserve(8 * ref.size() * static_cast<std::size_t>(n));
    out.weights.reserve(8 * ref.size() * static_cast<std::size_t>(n));
    const Point c = polygon.centroid();
    // Each fan triangle is halved at its edge midpoint so that every polygon
    // vertex is the collapsed corner (reference (0,1)) of the sub-triangles
    // touching it; integrands with direction-dependent limits at the vertices
    // are then smooth in the collapsed coordinates. One further midpoint
    // refinement keeps that property and shrinks the angular error near the
    // vertices, which dominates for mean value gradients.
    const auto refine = [&](const Point& a, const Point& b, const Point& apex) {
        const Point mab = 0.5 * (a + b);
        const Point mb = 0.5 * (b + apex);
        const Point ma = 0.5 * (apex + a);
        append_mapped(ref, ma, mb, apex, out);
        append_mapped(ref, a, mab, ma, out);
        append_mapped(ref, mab, b, mb, out);
        append_mapped(ref, mb, ma, mab, out);
    };
    // At a flat vertex the angular profile is singular toward the boundary
    // line, so the sectors are graded toward the edge-side corner `edge_end`.
    const auto graded = [&](const Point& edge_end, const Point& centre, const Point& apex, bool edge_first) {
        const double cuts[] = {0.0, 0.25, 0.5, 1.0};
        for (int k = 0; k < 3; ++k) {
            const Point p = edge_end + cuts[k] * (centre - edge_end);
            const Point q = edge_end + cuts[k + 1] * (centre - edge_end);
            if (edge_first) {
                refine(p, q, apex);
            } else {
                refine(q, p, apex);
            }
        }
    };
    for (int i = 0; i < n; ++i) {
        const Point m = polygon.midpoint(i, i + 1);
        if (polygon.is_flat(i)) {
            graded(m, c, polygon.vertex(i), true);
        } else {
            refine(m, c, polygon.vertex(i));
        }
        if (polygon.is_flat(i + 1)) {
            graded(m, c, polygon.vertex(i + 1), false);
        } else {
            refine(c, m, polygon.vertex(i + 1));
        }
    }
    return out;
}

QuadratureRule vertex_fan_rule(const Polygon& polygon, int degree)
{
    const QuadratureRule ref = triangle_rule(degree);
    QuadratureRule out;
    out.degree = degree;
    for (int i = 1; i + 1 < polygon.size(); ++i) {
        append_mapped(ref, polygon.vertex(0), polygon.vertex(i), polygon.vertex(i + 1), out);
    }
    return out;
}

QuadratureRule element_rule(const Polygon& polygon, CoordinateKind kind, int degree)
{
    return kind == CoordinateKind::Triangulation ? vertex_fan_rule(polygon, degree) : polygon_rule(polygon, degree);
}

} // namespace polyserendip
