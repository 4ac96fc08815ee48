#include "polyserendip/barycentric.hpp"

#include "polyserendip/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>

namespace polyserendip {

std::string_view to_string(CoordinateKind kind)
{
    switch (kind) {
    case CoordinateKind::Wachspress: return "wachspress";
    case CoordinateKind::MeanValue: return "meanvalue";
    case CoordinateKind::Triangulation: return "triangulation";
    }
    return "unknown";
}

CoordinateKind parse_coordinate_kind(std::string_view name)
{
    std::string s;
    for (char c : name) {
        if (c != '_' && c != '-') {
            s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (s == "wachspress" || s == "wach") {
        return CoordinateKind::Wachspress;
    }
    if (s == "meanvalue" || s == "mval" || s == "mvc") {
        return CoordinateKind::MeanValue;
    }
    if (s == "triangulation" || s == "tri") {
        return CoordinateKind::Triangulation;
    }
    throw InvalidInput("unknown coordinate kind '" + std::string(name) + "'");
}

BarycentricCoordinates::BarycentricCoordinates(Polygon polygon, CoordinateKind kind, double boundary_eps_rel)
    : polygon_(std::move(polygon)), kind_(kind), boundary_eps_(boundary_eps_rel * polygon_.diameter())
{
    const int n = polygon_.size();
    if (kind_ == CoordinateKind::Wachspress) {
        corner_area_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            if (polygon_.is_flat(i)) {
                throw GeometryError("Wachspress coordinates are undefined at a vertex with interior angle pi");
            }
            const Point& p = polygon_.vertex(i - 1);
            const Point& v = polygon_.vertex(i);
            const Point& q = polygon_.vertex(i + 1);
            corner_area_[i] = 0.5 * cross(v - p, q - v);
        }
    } else if (kind_ == CoordinateKind::Triangulation) {
        for (int k = 1; k + 1 < n; ++k) {
            const double a2 = cross(polygon_.vertex(k) - polygon_.vertex(0), polygon_.vertex(k + 1) - polygon_.vertex(0));
            if (!(a2 > 1e-14 * polygon_.diameter() * polygon_.diameter())) {
                throw GeometryError("fan triangulation from vertex 0 has a degenerate triangle");
            }
        }
    }
}

CoordEval BarycentricCoordinates::eval(const Point& x) const
{
    CoordEval out;
    eval(x, out);
    return out;
}

void BarycentricCoordinates::eval(const Point& x, CoordEval& out) const
{
    const double dist = polygon_.interior_distance(x);
    if (!(dist > boundary_eps_)) {
        std::ostringstream msg;
        msg << "point (" << x.x() << ", " << x.y() << ") is not strictly inside the polygon (distance " << dist
            << ")";
        throw BoundaryEvaluationError(msg.str());
    }
    const auto n = static_cast<std::size_t>(polygon_.size());
    out.point = x;
    out.values.assign(n, 0.0);
    out.gradients.assign(n, Vector::Zero());
    switch (kind_) {
    case CoordinateKind::Wachspress: wachspress(x, out); break;
    case CoordinateKind::MeanValue: mean_value(x, out); break;
    case CoordinateKind::Triangulation: triangulation(x, out); break;
    }
}

// w_i = C_i / (A_{i-1}(x) A_i(x)), A_j(x) = area(x, v_j, v_{j+1}), C_i = area(v_{i-1}, v_i, v_{i+1}).
void BarycentricCoordinates::wachspress(const Point& x, CoordEval& out) const
{
    const int n = polygon_.size();
    std::vector<double> area(static_cast<std::size_t>(n));
    std::vector<Vector> grad_area(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const Point& p = polygon_.vertex(j);
        const Point& q = polygon_.vertex(j + 1);
        area[j] = 0.5 * cross(p - x, q - x);
        grad_area[j] = 0.5 * Vector(p.y() - q.y(), q.x() - p.x());
    }
    double total = 0.0;
    Vector grad_total = Vector::Zero();
    for (int i = 0; i < n; ++i) {
        const int im = (i + n - 1) % n;
        const double w = corner_area_[i] / (area[im] * area[i]);
        const Vector gw = -w * (grad_area[im] / area[im] + grad_area[i] / area[i]);
        out.values[i] = w;
        out.gradients[i] = gw;
        total += w;
        grad_total += gw;
    }
    for (int i = 0; i < n; ++i) {
        const double lam = out.values[i] / total;
        out.gradients[i] = (out.gradients[i] - lam * grad_total) / total;
        out.values[i] = lam;
    }
}

// w_i = (tan(alpha_{i-1}/2) + tan(alpha_i/2)) / r_i with tan(alpha/2) = (r_i r_{i+1} - d_i.d_{i+1}) / (d_i x d_{i+1}).
void BarycentricCoordinates::mean_value(const Point& x, CoordEval& out) const
{
    const int n = polygon_.size();
    std::vector<Vector> d(static_cast<std::size_t>(n));
    std::vector<double> r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        d[i] = polygon_.vertex(i) - x;
        r[i] = d[i].norm();
    }
    std::vector<double> t(static_cast<std::size_t>(n));
    std::vector<Vector> grad_t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n;
        const double dot = d[i].dot(d[ip]);
        const double crs = cross(d[i], d[ip]);
        const double prod = r[i] * r[ip];
        t[i] = (prod - dot) / crs;
        const Vector grad_dot = -(d[i] + d[ip]);
        const Vector grad_crs(d[i].y() - d[ip].y(), d[ip].x() - d[i].x());
        const Vector grad_prod = -(r[ip] / r[i]) * d[i] - (r[i] / r[ip]) * d[ip];
        grad_t[i] = (grad_prod - grad_dot - t[i] * grad_crs) / crs;
    }
    double total = 0.0;
    Vector grad_total = Vector::Zero();
    for (int i = 0; i < n; ++i) {
        const int im = (i + n - 1) % n;
        const double w = (t[im] + t[i]) / r[i];
        // grad r_i = -d_i / r_i
        const Vector gw = (grad_t[im] + grad_t[i]) / r[i] + w * d[i] / (r[i] * r[i]);
        out.values[i] = w;
        out.gradients[i] = gw;
        total += w;
        grad_total += gw;
    }
    for (int i = 0; i < n; ++i) {
        const double lam = out.values[i] / total;
        out.gradients[i] = (out.gradients[i] - lam * grad_total) / total;
        out.values[i] = lam;
    }
}

void BarycentricCoordinates::triangulation(const Point& x, CoordEval& out) const
{
    const int n = polygon_.size();
    const Point& p0 = polygon_.vertex(0);
    const double tol = 1e-13;
    for (int k = 1; k + 1 < n; ++k) {
        const Point& p1 = polygon_.vertex(k);
        const Point& p2 = polygon_.vertex(k + 1);
        const double a2 = cross(p1 - p0, p2 - p0);
        const double l0 = cross(p1 - x, p2 - x) / a2;
        const double l1 = cross(p2 - x, p0 - x) / a2;
        const double l2 = 1.0 - l0 - l1;
        const bool last = k + 2 == n;
        if ((l0 >= -tol && l1 >= -tol && l2 >= -tol) || last) {
            out.values[0] = l0;
            out.values[k] = l1;
            out.values[k + 1] = l2;
            out.gradients[0] = Vector(p1.y() - p2.y(), p2.x() - p1.x()) / a2;
            out.gradients[k] = Vector(p2.y() - p0.y(), p0.x() - p2.x()) / a2;
            out.gradients[k + 1] = -(out.gradients[0] + out.gradients[k]);
            return;
        }
    }
}

CoordEval eval_coords(const Polygon& polygon, CoordinateKind kind, const Point& x)
{
    return BarycentricCoordinates(polygon, kind).eval(x);
}

std::vector<Vector> eval_gradients(const Polygon& polygon, CoordinateKind kind, const Point& x)
{
    return eval_coords(polygon, kind, x).gradients;
}

CoordEval eval_boundary(const Polygon& polygon, int edge, double t)
{
    const int n = polygon.size();
    if (edge < 0 || edge >= n) {
        throw InvalidInput("edge index out of range");
    }
    if (!(t >= 0.0 && t <= 1.0)) {
        throw InvalidInput("edge parameter must lie in [0, 1]");
    }
    CoordEval out;
    const int next = (edge + 1) % n;
    out.point = (1.0 - t) * polygon.vertex(edge) + t * polygon.vertex(next);
    out.values.assign(static_cast<std::size_t>(n), 0.0);
    out.values[edge] = 1.0 - t;
    out.values[next] = t;
    return out;
}

void pairwise_products(const IndexSets& sets, const CoordEval& coords, PairwiseEval& out)
{
    const std::size_t m = sets.total();
    const bool with_grad = !coords.gradients.empty();
    out.values.resize(m);
    out.gradients.resize(with_grad ? m : 0);
    std::size_t c = 0;
    auto put = [&](const IndexPair& p) {
        const double la = coords.values[p.a];
        const double lb = coords.values[p.b];
        out.values[c] = la * lb;
        if (with_grad) {
            out.gradients[c] = la * coords.gradients[p.b] + lb * coords.gradients[p.a];
        }
        ++c;
    };
    for (const auto& p : sets.V) {
        put(p);
    }
    for (const auto& p : sets.E) {
        put(p);
    }
    for (const auto& p : sets.D) {
        put(p);
    }
}

PairwiseEval pairwise_products(const IndexSets& sets, const CoordEval& coords)
{
    PairwiseEval out;
    pairwise_products(sets, coords, out);
    return out;
}

PairwiseEval eval_pairwise(const Polygon& polygon, CoordinateKind kind, const Point& x)
{
    return pairwise_products(index_sets(polygon.size()), eval_coords(polygon, kind, x));
}

} // namespace polyserendip
