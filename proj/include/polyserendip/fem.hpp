#pragma once

#include "polyserendip/barycentric.hpp"
#include "polyserendip/geometry.hpp"
#include "polyserendip/linalg.hpp"
#include "polyserendip/serendipity.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace polyserendip {

/// An edge with its adjacent cells. `local0` is the edge's index inside
/// `cell0`, where it runs v0 -> v1; in `cell1` (if any) it runs v1 -> v0.
struct MeshEdge {
    int v0 = 0;
    int v1 = 0;
    int cell0 = -1;
    int local0 = -1;
    int cell1 = -1;
    int local1 = -1;

    [[nodiscard]] bool is_boundary() const { return cell1 < 0; }
};

/// Conforming polygonal mesh. Cells are counterclockwise vertex lists; every
/// cell must be a valid convex polygon (collinear vertices allowed).
class PolyMesh {
public:
    PolyMesh(std::vector<Point> vertices, std::vector<std::vector<int>> cells);

    [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
    [[nodiscard]] int num_cells() const { return static_cast<int>(cells_.size()); }
    [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }

    [[nodiscard]] const std::vector<Point>& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<std::vector<int>>& cells() const { return cells_; }
    [[nodiscard]] const std::vector<MeshEdge>& edges() const { return edges_; }
    /// Global edge index of each local edge (v_i, v_{i+1}) of cell c.
    [[nodiscard]] const std::vector<int>& cell_edges(int c) const { return cell_edges_[static_cast<std::size_t>(c)]; }
    [[nodiscard]] const Polygon& cell_polygon(int c) const { return polygons_[static_cast<std::size_t>(c)]; }

    [[nodiscard]] bool is_boundary_vertex(int v) const { return boundary_vertex_[static_cast<std::size_t>(v)]; }
    [[nodiscard]] Point edge_midpoint(int e) const;

private:
    std::vector<Point> vertices_;
    std::vector<std::vector<int>> cells_;
    std::vector<Polygon> polygons_;
    std::vector<MeshEdge> edges_;
    std::vector<std::vector<int>> cell_edges_;
    std::vector<bool> boundary_vertex_;
};

/// n x n trapezoids on [0,1]^2. Interior row j of vertex column i sits at
/// y = j/n + (-1)^i offset/n. Requires n >= 1 and 0 <= offset < 0.5.
PolyMesh trapezoid_mesh(int n, double offset);

/// Vertex DOFs first (index = vertex id), then one DOF per edge midpoint.
class DofMap {
public:
    explicit DofMap(const PolyMesh& mesh);

    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] std::size_t vertex_dof(int v) const { return static_cast<std::size_t>(v); }
    [[nodiscard]] std::size_t edge_dof(int e) const { return num_vertices_ + static_cast<std::size_t>(e); }
    /// Local-to-global map of cell c: its vertices then its edges, in local order.
    [[nodiscard]] const std::vector<std::size_t>& cell_dofs(int c) const { return cell_dofs_[static_cast<std::size_t>(c)]; }
    [[nodiscard]] const Point& node(std::size_t dof) const { return nodes_[dof]; }
    [[nodiscard]] bool is_boundary(std::size_t dof) const { return boundary_[dof]; }
    [[nodiscard]] const std::vector<std::size_t>& boundary_dofs() const { return boundary_dofs_; }
    [[nodiscard]] const std::vector<std::size_t>& interior_dofs() const { return interior_dofs_; }

private:
    std::size_t num_vertices_ = 0;
    std::vector<Point> nodes_;
    std::vector<bool> boundary_;
    std::vector<std::size_t> boundary_dofs_;
    std::vector<std::size_t> interior_dofs_;
    std::vector<std::vector<std::size_t>> cell_dofs_;
};

/// Mesh + DOFs + one serendipity element per cell.
class Discretization {
public:
    Discretization(PolyMesh mesh, CoordinateKind kind, Strategy strategy = Strategy::Auto, int threads = 1);

    [[nodiscard]] const PolyMesh& mesh() const { return mesh_; }
    [[nodiscard]] const DofMap& dofs() const { return dofs_; }
    [[nodiscard]] CoordinateKind kind() const { return kind_; }
    [[nodiscard]] const SerendipityElement& element(int c) const { return elements_[static_cast<std::size_t>(c)]; }

private:
    PolyMesh mesh_;
    DofMap dofs_;
    CoordinateKind kind_;
    std::vector<SerendipityElement> elements_;
};

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Vector(const Point&)>;

struct LinearSystem {
    SparseMatrix matrix;
    std::vector<double> rhs;
};

struct AssemblyOptions {
    int degree = 10;
    /// Worker threads for the element loop; each owns its triplet buffer.
    int threads = 1;
};

/// Stiffness entries int grad psi_p . grad psi_q and load int f psi_p over all DOFs.
LinearSystem assemble(const Discretization& disc, const ScalarField& source, const AssemblyOptions& options = {});

/// Coefficients per global DOF; u_h at a node equals its coefficient.
class DiscreteSolution {
public:
    DiscreteSolution(std::shared_ptr<const Discretization> disc, std::vector<double> coefficients);

    [[nodiscard]] const Discretization& discretization() const { return *disc_; }
    [[nodiscard]] const std::vector<double>& coefficients() const { return coefficients_; }

    /// Value and gradient of u_h restricted to cell c at an interior point.
    [[nodiscard]] double value(int c, const Point& x) const;
    [[nodiscard]] Vector gradient(int c, const Point& x) const;
    /// Trace on local edge `edge` of cell c at parameter t.
    [[nodiscard]] double boundary_value(int c, int edge, double t) const;
    /// Locates a cell strictly containing x; nullopt outside the mesh or on a cell boundary.
    [[nodiscard]] std::optional<double> evaluate(const Point& x) const;

private:
    std::shared_ptr<const Discretization> disc_;
    std::vector<double> coefficients_;
};

struct DirichletResult {
    DiscreteSolution solution;
    SolveReport report;
};

/// Boundary DOFs take g(node); interior DOFs solve the reduced system by CG.
DirichletResult solve_dirichlet(std::shared_ptr<const Discretization> disc, const LinearSystem& system,
    const ScalarField& g, double tol = 1e-12);

/// Nodal interpolant of u.
DiscreteSolution interpolate(std::shared_ptr<const Discretization> disc, const ScalarField& u);

struct ErrorNorms {
    double l2_error = 0.0;
    double h1_semi_error = 0.0;
};

ErrorNorms error_norms(const DiscreteSolution& solution, const ScalarField& u, const VectorField& grad_u,
    int degree = 14);

/// Largest disagreement of u_h across interior edges, sampled at `samples`
/// interior points per edge.
double max_interface_jump(const DiscreteSolution& solution, int samples = 5);

struct Problem {
    ScalarField u;
    VectorField grad_u;
    ScalarField f;  // -Laplace u
};

/// u = sin(x) e^y, harmonic.
Problem sine_exp_problem();
/// Quadratic monomial u = x^px y^py with px + py = 2.
Problem quadratic_problem(int px, int py);

struct ConvergenceOptions {
    std::vector<int> levels{2, 4, 8, 16, 32, 64};
    CoordinateKind kind = CoordinateKind::MeanValue;
    Strategy strategy = Strategy::Auto;
    double offset = 0.25;
    int assembly_degree = 10;
    int norm_degree = 14;
    int threads = 1;
};

struct ConvergenceRow {
    int n = 0;
    std::size_t dofs = 0;
    double l2_error = 0.0;
    std::optional<double> l2_rate;
    double h1_error = 0.0;
    std::optional<double> h1_rate;
    std::size_t cg_iterations = 0;
};

/// Levels must ascend, each double the previous.
std::vector<ConvergenceRow> convergence_study(const Problem& problem, const ConvergenceOptions& options);

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
std::string convergence_markdown(const std::vector<ConvergenceRow>& rows);

} // namespace polyserendip
