#pragma once

#include "polyserendip/barycentric.hpp"
#include "polyserendip/geometry.hpp"
#include "polyserendip/index_sets.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <vector>

namespace polyserendip {

/// How the diagonal columns of A are filled. Auto is only a request value;
/// a built map always carries a concrete strategy.
enum class Strategy {
    Auto,
    UnitSquare,
    RegularPolygon,
    Quadrilateral,
    Generic,
};

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view name);

/// Reduction A (2n x n(n+1)/2) taking pairwise products to the serendipity
/// basis xi, and the fixed transform B (2n x 2n) taking xi to the Lagrange-like
/// basis psi. Rows of A and B: n vertex functions then n edge functions, edge i
/// joining v_i and v_{i+1}. Columns of A follow IndexSets::ordered().
struct SerendipityMap {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Strategy strategy = Strategy::Generic;
    IndexSets sets;

    [[nodiscard]] int n() const { return sets.n; }
};

/// The six nonzero entries of one diagonal column {a, b} of A plus the
/// geometric quantities they were derived from.
struct DiagonalCoefficients {
    int a = 0;
    int b = 0;
    double c_aa = 0.0;
    double c_bb = 0.0;
    double c_prev_a = 0.0;  // row of edge (a-1, a)
    double c_a_next = 0.0;  // row of edge (a, a+1)
    double c_prev_b = 0.0;  // row of edge (b-1, b)
    double c_b_next = 0.0;  // row of edge (b, b+1)
    double half_length = 0.0;
    // generic construction
    double d_a = 0.0;
    double d_b = 0.0;
    double s = 1.0;
    /// |x-component| residuals of the two rank-deficient side systems.
    double consistency_residual = 0.0;
    // quadrilateral construction: x-intercept of v_{a+1} v_{b+1}, over l
    double d = 0.0;
};

/// Symmetric coefficients of the regular-polygon construction for one diagonal.
struct RegularCoefficients {
    double c0 = 0.0;
    double c_minus = 0.0;
    double c_plus = 0.0;
};

/// sigma = 2 pi / n, theta = half the angle subtended by the diagonal, 0 < sigma <= theta <= pi/2.
/// At theta = pi/2 the limit values are returned.
RegularCoefficients regular_coefficients(double theta, double sigma);

/// Quadrilateral coefficients for diagonal {a, a+2}.
DiagonalCoefficients quadrilateral_coefficients(const Polygon& polygon, int a, int b);
/// Generic (n >= 5) coefficients for the strict diagonal {a, b}; throws
/// ConstructionError when d_a + d_b reaches 2 (s blows up).
DiagonalCoefficients generic_coefficients(const Polygon& polygon, int a, int b);

Eigen::MatrixXd build_A_unit_square();
Eigen::MatrixXd build_A_regular(int n);
Eigen::MatrixXd build_A_quadrilateral(const Polygon& polygon);
Eigen::MatrixXd build_A_generic(const Polygon& polygon);
Eigen::MatrixXd build_B(int n);

/// Regular n-gon test with relative tolerance on radii and central angles.
bool is_regular(const Polygon& polygon, double rel_tol = 1e-9);
/// Vertices exactly (0,0), (1,0), (1,1), (0,1) within tol.
bool is_unit_square(const Polygon& polygon, double tol = 1e-12);

/// Auto: n = 3 identity, n = 4 quadrilateral, regular n-gon regular, else generic.
SerendipityMap build_map(const Polygon& polygon, Strategy strategy = Strategy::Auto);

/// xi = A mu and psi = B xi with gradients. Gradients are empty for boundary evaluations.
struct SerendipityEval {
    Point point = Point::Zero();
    std::vector<double> xi_values;
    std::vector<Vector> xi_gradients;
    std::vector<double> psi_values;
    std::vector<Vector> psi_gradients;
};

/// The 2n interpolation nodes: vertices then edge midpoints.
std::vector<Point> basis_nodes(const Polygon& polygon);

SerendipityEval eval_basis(const Polygon& polygon, CoordinateKind kind, const SerendipityMap& map, const Point& x);
/// Applies A and B to already evaluated coordinates.
SerendipityEval eval_basis(const SerendipityMap& map, const CoordEval& coords);
/// Values on edge (v_edge, v_edge+1) at parameter t via the exact boundary trace.
SerendipityEval eval_basis_boundary(const Polygon& polygon, const SerendipityMap& map, int edge, double t);

/// psi_p(node_q) for all p, q using the boundary trace; should be the identity.
Eigen::MatrixXd nodal_table(const Polygon& polygon, const SerendipityMap& map);

/// Polygon + coordinates + map, with scratch-free evaluation for hot loops.
class SerendipityElement {
public:
    SerendipityElement(Polygon polygon, CoordinateKind kind, Strategy strategy = Strategy::Auto);

    [[nodiscard]] const Polygon& polygon() const { return coords_.polygon(); }
    [[nodiscard]] const SerendipityMap& map() const { return map_; }
    [[nodiscard]] const BarycentricCoordinates& coordinates() const { return coords_; }
    [[nodiscard]] int num_basis() const { return 2 * map_.n(); }

    /// psi values and gradients only (xi left empty).
    void eval_psi(const Point& x, std::vector<double>& values, std::vector<Vector>& gradients) const;
    [[nodiscard]] SerendipityEval eval(const Point& x) const;

private:
    BarycentricCoordinates coords_;
    SerendipityMap map_;
    Eigen::MatrixXd BA_;
};

struct ColumnResidual {
    IndexPair pair;
    double qc1 = 0.0;
    double qc2 = 0.0;
    double qc3 = 0.0;
    [[nodiscard]] double max() const;
};

struct ConstraintReport {
    std::vector<ColumnResidual> columns;
    double max_residual = 0.0;
    std::size_t worst_column = 0;
    double tolerance = 1e-9;
    bool pass = false;
};

/// Residuals of the column constraints behind constant, linear and quadratic
/// precision, measured on the polygon rescaled to unit diameter.
ConstraintReport verify_constraints(const Polygon& polygon, const SerendipityMap& map, double tolerance = 1e-9);

/// Max residual of the xi precision identities at the evaluation point.
double xi_precision_residual(const Polygon& polygon, const SerendipityEval& eval);
/// Max over {1, x, y, x^2, xy, y^2} of |sum_nodes m(node) psi_node - m(x)|.
double psi_reproduction_residual(const Polygon& polygon, const SerendipityEval& eval);

/// max((4 - 4e)/(1 + 2e), 2/(1 + 2e), 1) for the unit-diameter margin e > 0.
double coefficient_bound(double epsilon_unit);
/// Bound for a polygon from its shape conditions; epsilon_star is rescaled by
/// the polygon diameter.
double coefficient_bound(const Polygon& polygon, const ShapeConditions& conditions);

/// max((1 - e)/e, 1/(2e), 1). At unit diameter the intercepts only satisfy
/// d_a, d_b < 1 - 2e, so 2 - d_a - d_b > 4e; this is the bound that follows.
/// The formula above is smaller and is exceeded by regular polygons with n >= 6.
double corrected_coefficient_bound(double epsilon_unit);
double corrected_coefficient_bound(const Polygon& polygon, const ShapeConditions& conditions);

/// Maximum absolute row sum.
double max_row_sum(const Eigen::MatrixXd& m);

} // namespace polyserendip
