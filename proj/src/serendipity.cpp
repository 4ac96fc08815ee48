#include "polyserendip/serendipity.hpp"

#include "polyserendip/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace polyserendip {

std::string_view to_string(Strategy strategy)
{
    switch (strategy) {
    case Strategy::Auto: return "auto";
    case Strategy::UnitSquare: return "unit-square";
    case Strategy::RegularPolygon: return "regular";
    case Strategy::Quadrilateral: return "quadrilateral";
    case Strategy::Generic: return "generic";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view name)
{
    std::string s;
    for (char c : name) {
        if (c != '_' && c != '-') {
            s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (s == "auto") {
        return Strategy::Auto;
    }
    if (s == "unitsquare" || s == "square") {
        return Strategy::UnitSquare;
    }
    if (s == "regular" || s == "regularpolygon") {
        return Strategy::RegularPolygon;
    }
    if (s == "quadrilateral" || s == "quad") {
        return Strategy::Quadrilateral;
    }
    if (s == "generic") {
        return Strategy::Generic;
    }
    throw InvalidInput("unknown strategy '" + std::string(name) + "'");
}

namespace {

Eigen::MatrixXd identity_block(const IndexSets& sets)
{
    const auto rows = static_cast<Eigen::Index>(2 * sets.n);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(sets.total()));
    A.leftCols(rows).setIdentity();
    return A;
}

void place(Eigen::MatrixXd& A, const IndexSets& sets, const DiagonalCoefficients& c)
{
    const int n = sets.n;
    const auto col = static_cast<Eigen::Index>(sets.column(c.a, c.b));
    auto wrap = [n](int i) { return ((i % n) + n) % n; };
    A(c.a, col) = c.c_aa;
    A(c.b, col) = c.c_bb;
    A(n + wrap(c.a - 1), col) += c.c_prev_a;
    A(n + wrap(c.a), col) += c.c_a_next;
    A(n + wrap(c.b - 1), col) += c.c_prev_b;
    A(n + wrap(c.b), col) += c.c_b_next;
}

} // namespace

RegularCoefficients regular_coefficients(double theta, double sigma)
{
    if (!(sigma > 0.0) || theta < sigma - 1e-12 || theta > std::numbers::pi / 2 + 1e-12) {
        throw InvalidInput("regular-polygon parameters need 0 < sigma <= theta <= pi/2");
    }
    const double cs = std::cos(sigma);
    const double sn = std::sin(sigma);
    RegularCoefficients c;
    if (std::abs(theta - std::numbers::pi / 2) <= 1e-12) {
        // tan(theta) -> infinity
        c.c0 = (1.0 + cs) / (cs - 1.0);
        c.c_minus = 1.0 / (2.0 * (1.0 - cs));
        c.c_plus = c.c_minus;
        return c;
    }
    const double tn = std::tan(theta);
    const double ct = 1.0 / tn;
    c.c0 = ((cs - 1.0) * ct + (1.0 + cs) * tn) / ((cs - 1.0) * (ct + tn));
    const double den = 2.0 * (tn + ct) * sn * (cs - 1.0);
    c.c_minus = (cs - sn * tn - 1.0) / den;
    c.c_plus = (1.0 - cs - sn * tn) / den;
    return c;
}

DiagonalCoefficients quadrilateral_coefficients(const Polygon& polygon, int a, int b)
{
    if (polygon.size() != 4) {
        throw InvalidInput("quadrilateral construction needs n = 4");
    }
    const DiagonalFrame frame = diagonal_frame(polygon, a, b);
    const double l = frame.half_length();
    const Point below = frame.apply(polygon.vertex(a + 1));
    const Point above = frame.apply(polygon.vertex(b + 1));

    DiagonalCoefficients c;
    c.a = polygon.wrap(a);
    c.b = polygon.wrap(b);
    c.half_length = l;
    c.c_a_next = above.y() / (above.y() - below.y());
    c.c_b_next = below.y() / (below.y() - above.y());
    c.c_prev_b = c.c_a_next;
    c.c_prev_a = c.c_b_next;
    c.d = (c.c_a_next * below.x() + c.c_b_next * above.x()) / l;
    c.c_aa = c.d - 1.0;
    c.c_bb = -c.d - 1.0;
    c.d_a = -c.d;
    c.d_b = c.d;
    c.s = 1.0;
    return c;
}

DiagonalCoefficients generic_coefficients(const Polygon& polygon, int a, int b)
{
    const int n = polygon.size();
    if (n < 5) {
        throw InvalidInput("generic construction needs n >= 5");
    }
    const DiagonalFrame frame = diagonal_frame(polygon, a, b);
    const double l = frame.half_length();
    const Point am = frame.apply(polygon.vertex(a - 1));
    const Point ap = frame.apply(polygon.vertex(a + 1));
    const Point bm = frame.apply(polygon.vertex(b - 1));
    const Point bp = frame.apply(polygon.vertex(b + 1));

    const double den_a = am.y() - ap.y();
    const double den_b = bm.y() - bp.y();
    if (!(std::abs(den_a) > 1e-14 * l) || !(std::abs(den_b) > 1e-14 * l)) {
        throw ConstructionError("neighbours of a diagonal endpoint both lie on the diagonal");
    }

    DiagonalCoefficients c;
    c.a = polygon.wrap(a);
    c.b = polygon.wrap(b);
    c.half_length = l;
    c.d_a = (am.x() * ap.y() - ap.x() * am.y()) / den_a / l;
    c.d_b = (bp.x() * bm.y() - bm.x() * bp.y()) / den_b / l;
    const double gap = 2.0 - (c.d_a + c.d_b);
    if (!(gap > 1e-12)) {
        std::ostringstream msg;
        msg << "serendipity coefficients blow up on diagonal {" << c.a << ", " << c.b << "}: d_a + d_b = "
            << c.d_a + c.d_b;
        throw ConstructionError(msg.str());
    }
    c.s = 2.0 / gap;

    // Sum and y-component of each side system; the x-component is checked below.
    c.c_prev_a = -c.s * ap.y() / den_a;
    c.c_a_next = c.s * am.y() / den_a;
    c.c_prev_b = -c.s * bp.y() / den_b;
    c.c_b_next = c.s * bm.y() / den_b;
    c.c_aa = (-2.0 - 2.0 * c.d_a) / gap;
    c.c_bb = (-2.0 - 2.0 * c.d_b) / gap;

    const double res_a = c.c_prev_a * am.x() + c.c_a_next * ap.x() + c.s * c.d_a * l;
    const double res_b = c.c_prev_b * bm.x() + c.c_b_next * bp.x() - c.s * c.d_b * l;
    c.consistency_residual = std::max(std::abs(res_a), std::abs(res_b)) / l;
    return c;
}

Eigen::MatrixXd build_A_unit_square()
{
    const IndexSets sets = index_sets(4);
    Eigen::MatrixXd A = identity_block(sets);
    // columns 8 and 9 are mu_13 and mu_24 (1-based vertex labels)
    A.col(8) << -1, 0, -1, 0, 0.5, 0.5, 0.5, 0.5;
    A.col(9) << 0, -1, 0, -1, 0.5, 0.5, 0.5, 0.5;
    return A;
}

Eigen::MatrixXd build_A_regular(int n)
{
    const IndexSets sets = index_sets(n);
    Eigen::MatrixXd A = identity_block(sets);
    const double sigma = 2.0 * std::numbers::pi / n;
    for (const auto& pair : sets.D) {
        // Orient so v_a sits at +theta and v_b at -theta with theta <= pi/2:
        // k counts the steps taken counterclockwise from b to a.
        int a = pair.a;
        int b = pair.b;
        int k = ((a - b) % n + n) % n;
        if (2 * k > n) {
            std::swap(a, b);
            k = n - k;
        }
        const double theta = 2 * k == n ? std::numbers::pi / 2 : k * sigma / 2.0;
        const RegularCoefficients rc = regular_coefficients(theta, sigma);
        DiagonalCoefficients c;
        c.a = a;
        c.b = b;
        c.c_aa = rc.c0;
        c.c_bb = rc.c0;
        c.c_prev_a = rc.c_minus;
        c.c_b_next = rc.c_minus;
        c.c_a_next = rc.c_plus;
        c.c_prev_b = rc.c_plus;
        place(A, sets, c);
    }
    return A;
}

Eigen::MatrixXd build_A_quadrilateral(const Polygon& polygon)
{
    const IndexSets sets = index_sets(4);
    Eigen::MatrixXd A = identity_block(sets);
    for (const auto& pair : sets.D) {
        place(A, sets, quadrilateral_coefficients(polygon, pair.a, pair.b));
    }
    return A;
}

Eigen::MatrixXd build_A_generic(const Polygon& polygon)
{
    const int n = polygon.size();
    if (n == 4) {
        throw InvalidInput("generic construction is undefined on quadrilaterals");
    }
    const IndexSets sets = index_sets(n);
    Eigen::MatrixXd A = identity_block(sets);
    for (const auto& pair : sets.D) {
        place(A, sets, generic_coefficients(polygon, pair.a, pair.b));
    }
    return A;
}

Eigen::MatrixXd build_B(int n)
{
    if (n < 3) {
        throw InvalidInput("B needs n >= 3");
    }
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        B(i, i) = 1.0;
        B(i, n + i) = -1.0;
        B(i, n + (i + n - 1) % n) = -1.0;
        B(n + i, n + i) = 4.0;
    }
    return B;
}

bool is_regular(const Polygon& polygon, double rel_tol)
{
    const int n = polygon.size();
    const Point c = polygon.centroid();
    double mean_r = 0.0;
    for (const auto& v : polygon.vertices()) {
        mean_r += (v - c).norm();
    }
    mean_r /= n;
    const double sigma = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
        const Vector u = polygon.vertex(i) - c;
        const Vector w = polygon.vertex(i + 1) - c;
        if (std::abs(u.norm() - mean_r) > rel_tol * mean_r) {
            return false;
        }
        const double angle = std::atan2(cross(u, w), u.dot(w));
        if (std::abs(angle - sigma) > rel_tol * sigma) {
            return false;
        }
    }
    return true;
}

bool is_unit_square(const Polygon& polygon, double tol)
{
    if (polygon.size() != 4) {
        return false;
    }
    const Point corners[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (int i = 0; i < 4; ++i) {
        if ((polygon.vertex(i) - corners[i]).norm() > tol) {
            return false;
        }
    }
    return true;
}

SerendipityMap build_map(const Polygon& polygon, Strategy strategy)
{
    const int n = polygon.size();
    SerendipityMap map;
    map.sets = index_sets(n);
    map.B = build_B(n);

    if (strategy == Strategy::Auto) {
        if (n == 3) {
            strategy = Strategy::Generic;
        } else if (n == 4) {
            strategy = Strategy::Quadrilateral;
        } else if (is_regular(polygon)) {
            strategy = Strategy::RegularPolygon;
        } else {
            strategy = Strategy::Generic;
        }
    }
    map.strategy = strategy;

    switch (strategy) {
    case Strategy::UnitSquare:
        if (!is_unit_square(polygon)) {
            throw InvalidInput("unit-square strategy requires vertices (0,0), (1,0), (1,1), (0,1)");
        }
        map.A = build_A_unit_square();
        break;
    case Strategy::RegularPolygon:
        if (!is_regular(polygon)) {
            throw InvalidInput("regular strategy requires a regular polygon");
        }
        map.A = build_A_regular(n);
        break;
    case Strategy::Quadrilateral:
        if (n != 4) {
            throw InvalidInput("quadrilateral strategy requires n = 4");
        }
        map.A = build_A_quadrilateral(polygon);
        break;
    case Strategy::Generic:
        if (n == 3) {
            map.A = identity_block(map.sets);
        } else {
            map.A = build_A_generic(polygon);
        }
        break;
    case Strategy::Auto: break;
    }
    return map;
}

std::vector<Point> basis_nodes(const Polygon& polygon)
{
    const int n = polygon.size();
    std::vector<Point> nodes;
    nodes.reserve(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        nodes.push_back(polygon.vertex(i));
    }
    for (int i = 0; i < n; ++i) {
        nodes.push_back(polygon.midpoint(i, i + 1));
    }
    return nodes;
}

SerendipityEval eval_basis(const SerendipityMap& map, const CoordEval& coords)
{
    const PairwiseEval mu = pairwise_products(map.sets, coords);
    const auto m = static_cast<Eigen::Index>(mu.values.size());
    const Eigen::Map<const Eigen::VectorXd> mu_v(mu.values.data(), m);

    SerendipityEval out;
    out.point = coords.point;
    const Eigen::VectorXd xi = map.A * mu_v;
    const Eigen::VectorXd psi = map.B * xi;
    out.xi_values.assign(xi.data(), xi.data() + xi.size());
    out.psi_values.assign(psi.data(), psi.data() + psi.size());

    if (!mu.gradients.empty()) {
        Eigen::MatrixXd g(m, 2);
        for (Eigen::Index c = 0; c < m; ++c) {
            g.row(c) = mu.gradients[static_cast<std::size_t>(c)].transpose();
        }
        const Eigen::MatrixXd xi_g = map.A * g;
        const Eigen::MatrixXd psi_g = map.B * xi_g;
        out.xi_gradients.resize(static_cast<std::size_t>(xi_g.rows()));
        out.psi_gradients.resize(static_cast<std::size_t>(psi_g.rows()));
        for (Eigen::Index r = 0; r < xi_g.rows(); ++r) {
            out.xi_gradients[static_cast<std::size_t>(r)] = xi_g.row(r).transpose();
            out.psi_gradients[static_cast<std::size_t>(r)] = psi_g.row(r).transpose();
        }
    }
    return out;
}

SerendipityEval eval_basis(const Polygon& polygon, CoordinateKind kind, const SerendipityMap& map, const Point& x)
{
    if (polygon.size() != map.n()) {
        throw InvalidInput("map and polygon sizes differ");
    }
    return eval_basis(map, eval_coords(polygon, kind, x));
}

SerendipityEval eval_basis_boundary(const Polygon& polygon, const SerendipityMap& map, int edge, double t)
{
    if (polygon.size() != map.n()) {
        throw InvalidInput("map and polygon sizes differ");
    }
    return eval_basis(map, eval_boundary(polygon, edge, t));
}

Eigen::MatrixXd nodal_table(const Polygon& polygon, const SerendipityMap& map)
{
    const int n = polygon.size();
    Eigen::MatrixXd table(2 * n, 2 * n);
    for (int q = 0; q < 2 * n; ++q) {
        const SerendipityEval e = q < n ? eval_basis_boundary(polygon, map, q, 0.0)
                                        : eval_basis_boundary(polygon, map, q - n, 0.5);
        for (int p = 0; p < 2 * n; ++p) {
            table(p, q) = e.psi_values[static_cast<std::size_t>(p)];
        }
    }
    return table;
}

SerendipityElement::SerendipityElement(Polygon polygon, CoordinateKind kind, Strategy strategy)
    : coords_(std::move(polygon), kind), map_(build_map(coords_.polygon(), strategy)), BA_(map_.B * map_.A)
{
}

void SerendipityElement::eval_psi(const Point& x, std::vector<double>& values, std::vector<Vector>& gradients) const
{
    thread_local CoordEval coords;
    thread_local PairwiseEval mu;
    coords_.eval(x, coords);
    pairwise_products(map_.sets, coords, mu);
    const auto rows = BA_.rows();
    const auto cols = BA_.cols();
    values.assign(static_cast<std::size_t>(rows), 0.0);
    gradients.assign(static_cast<std::size_t>(rows), Vector::Zero());
    for (Eigen::Index c = 0; c < cols; ++c) {
        const double mv = mu.values[static_cast<std::size_t>(c)];
        const Vector& mg = mu.gradients[static_cast<std::size_t>(c)];
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double w = BA_(r, c);
            if (w != 0.0) {
                values[static_cast<std::size_t>(r)] += w * mv;
                gradients[static_cast<std::size_t>(r)] += w * mg;
            }
        }
    }
}

SerendipityEval SerendipityElement::eval(const Point& x) const
{
    return eval_basis(map_, coords_.eval(x));
}

double ColumnResidual::max() const
{
    return std::max({qc1, qc2, qc3});
}

ConstraintReport verify_constraints(const Polygon& polygon, const SerendipityMap& map, double tolerance)
{
    const int n = polygon.size();
    if (n != map.n()) {
        throw InvalidInput("map and polygon sizes differ");
    }
    const double scale = 1.0 / polygon.diameter();
    const Point shift = polygon.centroid();
    std::vector<Point> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        v[i] = scale * (polygon.vertex(i) - shift);
    }

    ConstraintReport report;
    report.tolerance = tolerance;
    const auto pairs = map.sets.ordered();
    report.columns.reserve(pairs.size());
    for (std::size_t col = 0; col < pairs.size(); ++col) {
        const IndexPair p = pairs[col];
        const bool vertex_col = p.a == p.b;
        double sum = 0.0;
        Vector lin = Vector::Zero();
        Eigen::Matrix2d quad = Eigen::Matrix2d::Zero();
        for (int i = 0; i < n; ++i) {
            const double c = map.A(i, static_cast<Eigen::Index>(col));
            sum += c;
            lin += c * v[i];
            quad += c * v[i] * v[i].transpose();
        }
        for (int i = 0; i < n; ++i) {
            const double c = map.A(n + i, static_cast<Eigen::Index>(col));
            const Point& vi = v[i];
            const Point& vj = v[(i + 1) % n];
            sum += 2.0 * c;
            lin += c * (vi + vj);
            quad += c * (vi * vj.transpose() + vj * vi.transpose());
        }
        const Point& va = v[p.a];
        const Point& vb = v[p.b];
        const double rhs1 = vertex_col ? 1.0 : 2.0;
        const Vector rhs2 = vertex_col ? Vector(va) : Vector(va + vb);
        const Eigen::Matrix2d rhs3
            = vertex_col ? Eigen::Matrix2d(va * va.transpose()) : Eigen::Matrix2d(va * vb.transpose() + vb * va.transpose());
        ColumnResidual r;
        r.pair = p;
        r.qc1 = std::abs(sum - rhs1);
        r.qc2 = (lin - rhs2).cwiseAbs().maxCoeff();
        r.qc3 = (quad - rhs3).cwiseAbs().maxCoeff();
        if (col == 0 || r.max() > report.max_residual) {
            report.max_residual = r.max();
            report.worst_column = col;
        }
        report.columns.push_back(r);
    }
    report.pass = report.max_residual <= tolerance;
    return report;
}

double xi_precision_residual(const Polygon& polygon, const SerendipityEval& eval)
{
    const int n = polygon.size();
    const auto& xi = eval.xi_values;
    double sum = 0.0;
    Vector lin = Vector::Zero();
    Eigen::Matrix2d quad = Eigen::Matrix2d::Zero();
    for (int i = 0; i < n; ++i) {
        const Point& vi = polygon.vertex(i);
        sum += xi[i];
        lin += xi[i] * vi;
        quad += xi[i] * vi * vi.transpose();
    }
    for (int i = 0; i < n; ++i) {
        const double e = xi[static_cast<std::size_t>(n + i)];
        const Point& vi = polygon.vertex(i);
        const Point& vj = polygon.vertex(i + 1);
        sum += 2.0 * e;
        lin += e * (vi + vj);
        quad += e * (vi * vj.transpose() + vj * vi.transpose());
    }
    const Point& x = eval.point;
    double r = std::abs(sum - 1.0);
    r = std::max(r, (lin - x).cwiseAbs().maxCoeff());
    r = std::max(r, (quad - x * x.transpose()).cwiseAbs().maxCoeff());
    return r;
}

double psi_reproduction_residual(const Polygon& polygon, const SerendipityEval& eval)
{
    const auto nodes = basis_nodes(polygon);
    auto monomial = [](int k, const Point& p) {
        switch (k) {
        case 0: return 1.0;
        case 1: return p.x();
        case 2: return p.y();
        case 3: return p.x() * p.x();
        case 4: return p.x() * p.y();
        default: return p.y() * p.y();
        }
    };
    double worst = 0.0;
    for (int k = 0; k < 6; ++k) {
        double s = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            s += monomial(k, nodes[q]) * eval.psi_values[q];
        }
        worst = std::max(worst, std::abs(s - monomial(k, eval.point)));
    }
    return worst;
}

double coefficient_bound(double epsilon_unit)
{
    if (!(epsilon_unit > 0.0)) {
        throw InvalidInput("coefficient bound needs epsilon_star > 0");
    }
    const double e = epsilon_unit;
    return std::max({(4.0 - 4.0 * e) / (1.0 + 2.0 * e), 2.0 / (1.0 + 2.0 * e), 1.0});
}

double coefficient_bound(const Polygon& polygon, const ShapeConditions& conditions)
{
    return coefficient_bound(conditions.epsilon_star / polygon.diameter());
}

double corrected_coefficient_bound(double epsilon_unit)
{
    if (!(epsilon_unit > 0.0)) {
        throw InvalidInput("coefficient bound needs epsilon_star > 0");
    }
    const double e = epsilon_unit;
    return std::max({(1.0 - e) / e, 0.5 / e, 1.0});
}

double corrected_coefficient_bound(const Polygon& polygon, const ShapeConditions& conditions)
{
    return corrected_coefficient_bound(conditions.epsilon_star / polygon.diameter());
}

double max_row_sum(const Eigen::MatrixXd& m)
{
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

} // namespace polyserendip
