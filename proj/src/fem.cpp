#include "polyserendip/fem.hpp"

#include "polyserendip/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace polyserendip {

namespace {

int resolve_threads(int threads, int work)
{
    if (threads <= 0) {
        threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    return std::max(1, std::min(threads, work));
}

// Splits [0, count) into contiguous chunks, one per worker; fn(worker, begin, end).
// The first exception thrown by any worker is rethrown on the caller's thread.
template <class Fn>
void parallel_chunks(int count, int threads, Fn&& fn)
{
    const int workers = resolve_threads(threads, count);
    if (workers == 1) {
        fn(0, 0, count);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const int begin = static_cast<int>(static_cast<long long>(count) * w / workers);
        const int end = static_cast<int>(static_cast<long long>(count) * (w + 1) / workers);
        pool.emplace_back([&, w, begin, end] {
            try {
                fn(w, begin, end);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

std::uint64_t edge_key(int a, int b)
{
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (lo << 32U) | hi;
}

bool on_open_segment(const Point& p, const Point& a, const Point& b)
{
    const Vector d = b - a;
    const double len2 = d.squaredNorm();
    const double t = (p - a).dot(d) / len2;
    if (t <= 1e-12 || t >= 1.0 - 1e-12) {
        return false;
    }
    return std::abs(cross(d, p - a)) <= 1e-12 * len2;
}

} // namespace

PolyMesh::PolyMesh(std::vector<Point> vertices, std::vector<std::vector<int>> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells))
{
    if (cells_.empty()) {
        throw InvalidInput("mesh has no cells");
    }
    const int nv = num_vertices();
    for (const Point& p : vertices_) {
        if (!p.allFinite()) {
            throw InvalidInput("mesh vertex coordinates must be finite");
        }
    }

    std::vector<bool> used(static_cast<std::size_t>(nv), false);
    polygons_.reserve(cells_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto& cell = cells_[c];
        if (cell.size() < 3) {
            throw InvalidInput("cell " + std::to_string(c) + " has fewer than 3 vertices");
        }
        std::vector<Point> pts;
        pts.reserve(cell.size());
        for (int v : cell) {
            if (v < 0 || v >= nv) {
                throw InvalidInput("cell " + std::to_string(c) + " references vertex " + std::to_string(v)
                    + " out of range");
            }
            used[static_cast<std::size_t>(v)] = true;
            pts.push_back(vertices_[static_cast<std::size_t>(v)]);
        }
        try {
            polygons_.emplace_back(std::move(pts), Convexity::AllowCollinear);
        } catch (const GeometryError& e) {
            throw GeometryError("cell " + std::to_string(c) + ": " + e.what());
        } catch (const Error& e) {
            throw InvalidInput("cell " + std::to_string(c) + ": " + e.what());
        }
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) {
        throw InvalidInput("mesh has vertices not used by any cell");
    }

    std::unordered_map<std::uint64_t, int> lookup;
    cell_edges_.resize(cells_.size());
    for (int c = 0; c < num_cells(); ++c) {
        const auto& cell = cells_[static_cast<std::size_t>(c)];
        const int n = static_cast<int>(cell.size());
        auto& local = cell_edges_[static_cast<std::size_t>(c)];
        local.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const int a = cell[static_cast<std::size_t>(i)];
            const int b = cell[static_cast<std::size_t>((i + 1) % n)];
            const auto [it, inserted] = lookup.try_emplace(edge_key(a, b), num_edges());
            if (inserted) {
                edges_.push_back(MeshEdge{a, b, c, i, -1, -1});
            } else {
                MeshEdge& e = edges_[static_cast<std::size_t>(it->second)];
                if (e.cell1 >= 0) {
                    throw InvalidInput("edge shared by more than two cells");
                }
                if (e.v0 == a) {
                    throw InvalidInput("cells " + std::to_string(e.cell0) + " and " + std::to_string(c)
                        + " traverse a shared edge in the same direction (overlap or orientation error)");
                }
                e.cell1 = c;
                e.local1 = i;
            }
            local[static_cast<std::size_t>(i)] = it->second;
        }
    }

    boundary_vertex_.assign(static_cast<std::size_t>(nv), false);
    for (const auto& e : edges_) {
        if (e.is_boundary()) {
            boundary_vertex_[static_cast<std::size_t>(e.v0)] = true;
            boundary_vertex_[static_cast<std::size_t>(e.v1)] = true;
        }
    }
    // A hanging node splits one side of an edge, leaving both sides unmatched
    // and the node itself on the open unmatched edge.
    for (const auto& e : edges_) {
        if (!e.is_boundary()) {
            continue;
        }
        const Point& a = vertices_[static_cast<std::size_t>(e.v0)];
        const Point& b = vertices_[static_cast<std::size_t>(e.v1)];
        for (int v = 0; v < nv; ++v) {
            if (boundary_vertex_[static_cast<std::size_t>(v)] && v != e.v0 && v != e.v1
                && on_open_segment(vertices_[static_cast<std::size_t>(v)], a, b)) {
                throw InvalidInput("mesh is not conforming: vertex " + std::to_string(v) + " lies inside edge ("
                    + std::to_string(e.v0) + ", " + std::to_string(e.v1) + ")");
            }
        }
    }
}

Point PolyMesh::edge_midpoint(int e) const
{
    const MeshEdge& edge = edges_[static_cast<std::size_t>(e)];
    return 0.5 * (vertices_[static_cast<std::size_t>(edge.v0)] + vertices_[static_cast<std::size_t>(edge.v1)]);
}

PolyMesh trapezoid_mesh(int n, double offset)
{
    if (n < 1) {
        throw InvalidInput("trapezoid mesh needs n >= 1");
    }
    if (!std::isfinite(offset) || offset < 0.0 || offset >= 0.5) {
        throw InvalidInput("trapezoid offset must lie in [0, 0.5)");
    }
    const auto id = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<Point> vertices(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            double y = static_cast<double>(j) / n;
            if (j > 0 && j < n) {
                y += (i % 2 == 0 ? 1.0 : -1.0) * offset / n;
            }
            vertices[static_cast<std::size_t>(id(i, j))] = Point(static_cast<double>(i) / n, y);
        }
    }
    std::vector<std::vector<int>> cells;
    cells.reserve(static_cast<std::size_t>(n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return PolyMesh(std::move(vertices), std::move(cells));
}

DofMap::DofMap(const PolyMesh& mesh) : num_vertices_(static_cast<std::size_t>(mesh.num_vertices()))
{
    nodes_ = mesh.vertices();
    boundary_.resize(nodes_.size());
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        boundary_[static_cast<std::size_t>(v)] = mesh.is_boundary_vertex(v);
    }
    for (int e = 0; e < mesh.num_edges(); ++e) {
        nodes_.push_back(mesh.edge_midpoint(e));
        boundary_.push_back(mesh.edges()[static_cast<std::size_t>(e)].is_boundary());
    }
    for (std::size_t d = 0; d < nodes_.size(); ++d) {
        (boundary_[d] ? boundary_dofs_ : interior_dofs_).push_back(d);
    }
    cell_dofs_.resize(static_cast<std::size_t>(mesh.num_cells()));
    for (int c = 0; c < mesh.num_cells(); ++c) {
        auto& dofs = cell_dofs_[static_cast<std::size_t>(c)];
        for (int v : mesh.cells()[static_cast<std::size_t>(c)]) {
            dofs.push_back(vertex_dof(v));
        }
        for (int e : mesh.cell_edges(c)) {
            dofs.push_back(edge_dof(e));
        }
    }
}

Discretization::Discretization(PolyMesh mesh, CoordinateKind kind, Strategy strategy, int threads)
    : mesh_(std::move(mesh)), dofs_(mesh_), kind_(kind)
{
    std::vector<std::optional<SerendipityElement>> built(static_cast<std::size_t>(mesh_.num_cells()));
    parallel_chunks(mesh_.num_cells(), threads, [&](int, int begin, int end) {
        for (int c = begin; c < end; ++c) {
            built[static_cast<std::size_t>(c)].emplace(mesh_.cell_polygon(c), kind, strategy);
        }
    });
    elements_.reserve(built.size());
    for (auto& e : built) {
        elements_.push_back(std::move(*e));
    }
}

LinearSystem assemble(const Discretization& disc, const ScalarField& source, const AssemblyOptions& options)
{
    const PolyMesh& mesh = disc.mesh();
    const DofMap& dofs = disc.dofs();
    const int workers = resolve_threads(options.threads, mesh.num_cells());
    std::vector<std::vector<Triplet>> triplets(static_cast<std::size_t>(workers));
    std::vector<std::vector<double>> loads(static_cast<std::size_t>(workers), std::vector<double>(dofs.size(), 0.0));

    parallel_chunks(mesh.num_cells(), workers, [&](int w, int begin, int end) {
        auto& trip = triplets[static_cast<std::size_t>(w)];
        auto& load = loads[static_cast<std::size_t>(w)];
        std::vector<double> values;
        std::vector<Vector> grads;
        Eigen::MatrixXd k_local;
        Eigen::VectorXd f_local;
        for (int c = begin; c < end; ++c) {
            const SerendipityElement& elem = disc.element(c);
            const int m = elem.num_basis();
            const QuadratureRule rule = element_rule(elem.polygon(), disc.kind(), options.degree);
            k_local.setZero(m, m);
            f_local.setZero(m);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const Point& x = rule.points[q];
                const double w_q = rule.weights[q];
                elem.eval_psi(x, values, grads);
                const double fx = source ? source(x) : 0.0;
                for (int p = 0; p < m; ++p) {
                    const auto up = static_cast<std::size_t>(p);
                    f_local(p) += w_q * fx * values[up];
                    for (int r = p; r < m; ++r) {
                        k_local(p, r) += w_q * grads[up].dot(grads[static_cast<std::size_t>(r)]);
                    }
                }
            }
            const auto& map = dofs.cell_dofs(c);
            for (int p = 0; p < m; ++p) {
                const std::size_t gp = map[static_cast<std::size_t>(p)];
                load[gp] += f_local(p);
                for (int r = 0; r < m; ++r) {
                    const double v = r >= p ? k_local(p, r) : k_local(r, p);
                    trip.push_back(Triplet{gp, map[static_cast<std::size_t>(r)], v});
                }
            }
        }
    });

    std::vector<Triplet> all;
    std::size_t total = 0;
    for (const auto& t : triplets) {
        total += t.size();
    }
    all.reserve(total);
    for (const auto& t : triplets) {
        all.insert(all.end(), t.begin(), t.end());
    }
    LinearSystem system;
    system.matrix = from_triplets(dofs.size(), all);
    system.rhs.assign(dofs.size(), 0.0);
    for (const auto& load : loads) {
        for (std::size_t i = 0; i < load.size(); ++i) {
            system.rhs[i] += load[i];
        }
    }
    return system;
}

DiscreteSolution::DiscreteSolution(std::shared_ptr<const Discretization> disc, std::vector<double> coefficients)
    : disc_(std::move(disc)), coefficients_(std::move(coefficients))
{
    if (!disc_) {
        throw InvalidInput("discrete solution needs a discretization");
    }
    if (coefficients_.size() != disc_->dofs().size()) {
        throw InvalidInput("coefficient vector size does not match the DOF count");
    }
}

double DiscreteSolution::value(int c, const Point& x) const
{
    std::vector<double> values;
    std::vector<Vector> grads;
    disc_->element(c).eval_psi(x, values, grads);
    const auto& map = disc_->dofs().cell_dofs(c);
    double u = 0.0;
    for (std::size_t p = 0; p < map.size(); ++p) {
        u += coefficients_[map[p]] * values[p];
    }
    return u;
}

Vector DiscreteSolution::gradient(int c, const Point& x) const
{
    std::vector<double> values;
    std::vector<Vector> grads;
    disc_->element(c).eval_psi(x, values, grads);
    const auto& map = disc_->dofs().cell_dofs(c);
    Vector g = Vector::Zero();
    for (std::size_t p = 0; p < map.size(); ++p) {
        g += coefficients_[map[p]] * grads[p];
    }
    return g;
}

double DiscreteSolution::boundary_value(int c, int edge, double t) const
{
    const SerendipityElement& elem = disc_->element(c);
    const SerendipityEval ev = eval_basis_boundary(elem.polygon(), elem.map(), edge, t);
    const auto& map = disc_->dofs().cell_dofs(c);
    double u = 0.0;
    for (std::size_t p = 0; p < map.size(); ++p) {
        u += coefficients_[map[p]] * ev.psi_values[p];
    }
    return u;
}

std::optional<double> DiscreteSolution::evaluate(const Point& x) const
{
    const PolyMesh& mesh = disc_->mesh();
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const Polygon& poly = mesh.cell_polygon(c);
        if (poly.interior_distance(x) > disc_->element(c).coordinates().boundary_eps()) {
            return value(c, x);
        }
    }
    return std::nullopt;
}

DirichletResult solve_dirichlet(std::shared_ptr<const Discretization> disc, const LinearSystem& system,
    const ScalarField& g, double tol)
{
    const DofMap& dofs = disc->dofs();
    if (system.matrix.dim() != dofs.size() || system.rhs.size() != dofs.size()) {
        throw InvalidInput("linear system does not match the discretization");
    }
    std::vector<double> u(dofs.size(), 0.0);
    for (std::size_t d : dofs.boundary_dofs()) {
        u[d] = g ? g(dofs.node(d)) : 0.0;
    }
    SolveReport report;
    report.converged = true;
    const auto& interior = dofs.interior_dofs();
    if (!interior.empty()) {
        // Move the known boundary values to the right-hand side.
        const std::vector<double> ku = system.matrix.multiply(u);
        std::vector<double> rhs(interior.size());
        for (std::size_t i = 0; i < interior.size(); ++i) {
            rhs[i] = system.rhs[interior[i]] - ku[interior[i]];
        }
        const SparseMatrix reduced = system.matrix.submatrix(interior);
        report = cg_solve(reduced, rhs, tol);
        for (std::size_t i = 0; i < interior.size(); ++i) {
            u[interior[i]] = report.solution[i];
        }
    }
    return DirichletResult{DiscreteSolution(std::move(disc), std::move(u)), std::move(report)};
}

DiscreteSolution interpolate(std::shared_ptr<const Discretization> disc, const ScalarField& u)
{
    const DofMap& dofs = disc->dofs();
    std::vector<double> coeffs(dofs.size());
    for (std::size_t d = 0; d < dofs.size(); ++d) {
        coeffs[d] = u(dofs.node(d));
    }
    return DiscreteSolution(std::move(disc), std::move(coeffs));
}

ErrorNorms error_norms(const DiscreteSolution& solution, const ScalarField& u, const VectorField& grad_u, int degree)
{
    const Discretization& disc = solution.discretization();
    const auto& coeffs = solution.coefficients();
    double l2 = 0.0;
    double h1 = 0.0;
    std::vector<double> values;
    std::vector<Vector> grads;
    for (int c = 0; c < disc.mesh().num_cells(); ++c) {
        const SerendipityElement& elem = disc.element(c);
        const auto& map = disc.dofs().cell_dofs(c);
        const QuadratureRule rule = element_rule(elem.polygon(), disc.kind(), degree);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Point& x = rule.points[q];
            elem.eval_psi(x, values, grads);
            double uh = 0.0;
            Vector guh = Vector::Zero();
            for (std::size_t p = 0; p < map.size(); ++p) {
                uh += coeffs[map[p]] * values[p];
                guh += coeffs[map[p]] * grads[p];
            }
            const double e = u(x) - uh;
            l2 += rule.weights[q] * e * e;
            h1 += rule.weights[q] * (grad_u(x) - guh).squaredNorm();
        }
    }
    return ErrorNorms{std::sqrt(l2), std::sqrt(h1)};
}

double max_interface_jump(const DiscreteSolution& solution, int samples)
{
    const PolyMesh& mesh = solution.discretization().mesh();
    double jump = 0.0;
    for (const MeshEdge& e : mesh.edges()) {
        if (e.is_boundary()) {
            continue;
        }
        for (int k = 1; k <= samples; ++k) {
            const double t = static_cast<double>(k) / (samples + 1);
            const double left = solution.boundary_value(e.cell0, e.local0, t);
            const double right = solution.boundary_value(e.cell1, e.local1, 1.0 - t);
            jump = std::max(jump, std::abs(left - right));
        }
    }
    return jump;
}

Problem sine_exp_problem()
{
    Problem p;
    p.u = [](const Point& x) { return std::sin(x.x()) * std::exp(x.y()); };
    p.grad_u = [](const Point& x) {
        const double ey = std::exp(x.y());
        return Vector(std::cos(x.x()) * ey, std::sin(x.x()) * ey);
    };
    p.f = [](const Point&) { return 0.0; };
    return p;
}

Problem quadratic_problem(int px, int py)
{
    if (px < 0 || py < 0 || px + py != 2) {
        throw InvalidInput("quadratic problem needs exponents with px + py = 2");
    }
    Problem p;
    p.u = [px, py](const Point& x) { return std::pow(x.x(), px) * std::pow(x.y(), py); };
    p.grad_u = [px, py](const Point& x) {
        const double gx = px == 0 ? 0.0 : px * std::pow(x.x(), px - 1) * std::pow(x.y(), py);
        const double gy = py == 0 ? 0.0 : py * std::pow(x.x(), px) * std::pow(x.y(), py - 1);
        return Vector(gx, gy);
    };
    const double lap = (px == 2 || py == 2) ? 2.0 : 0.0;
    p.f = [lap](const Point&) { return -lap; };
    return p;
}

std::vector<ConvergenceRow> convergence_study(const Problem& problem, const ConvergenceOptions& options)
{
    if (options.levels.empty()) {
        throw InvalidInput("convergence study needs at least one level");
    }
    for (std::size_t i = 0; i < options.levels.size(); ++i) {
        if (options.levels[i] < 1) {
            throw InvalidInput("levels must be positive");
        }
        if (i > 0 && options.levels[i] != 2 * options.levels[i - 1]) {
            throw InvalidInput("each level must double the previous one");
        }
    }
    std::vector<ConvergenceRow> rows;
    for (int n : options.levels) {
        auto disc = std::make_shared<const Discretization>(
            trapezoid_mesh(n, options.offset), options.kind, options.strategy, options.threads);
        const LinearSystem system = assemble(*disc, problem.f, AssemblyOptions{options.assembly_degree, options.threads});
        const DirichletResult result = solve_dirichlet(disc, system, problem.u);
        const ErrorNorms norms = error_norms(result.solution, problem.u, problem.grad_u, options.norm_degree);

        ConvergenceRow row;
        row.n = n;
        row.dofs = disc->dofs().size();
        row.l2_error = norms.l2_error;
        row.h1_error = norms.h1_semi_error;
        row.cg_iterations = result.report.iterations;
        if (!rows.empty()) {
            const ConvergenceRow& prev = rows.back();
            row.l2_rate = std::log2(prev.l2_error / row.l2_error);
            row.h1_rate = std::log2(prev.h1_error / row.h1_error);
        }
        rows.push_back(row);
    }
    return rows;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows)
{
    out << "n,dofs,l2_error,l2_rate,h1_error,h1_rate\n";
    const auto rate = [](const std::optional<double>& r) {
        std::ostringstream s;
        if (r) {
            s << std::fixed << std::setprecision(4) << *r;
        }
        return s.str();
    };
    for (const auto& row : rows) {
        std::ostringstream line;
        line << row.n << ',' << row.dofs << ',' << std::scientific << std::setprecision(6) << row.l2_error << ','
             << rate(row.l2_rate) << ',' << row.h1_error << ',' << rate(row.h1_rate) << '\n';
        out << line.str();
    }
}

std::string convergence_markdown(const std::vector<ConvergenceRow>& rows)
{
    std::ostringstream out;
    out << "| n | dofs | L2 error | rate | H1 error | rate |\n";
    out << "|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& row : rows) {
        const auto rate = [](const std::optional<double>& r) {
            std::ostringstream s;
            if (r) {
                s << std::fixed << std::setprecision(2) << *r;
            }
            return s.str();
        };
        out << "| " << row.n << " | " << row.dofs << " | " << std::scientific << std::setprecision(2) << row.l2_error
            << " | " << rate(row.l2_rate) << " | " << row.h1_error << " | " << rate(row.h1_rate) << " |\n";
    }
    return out.str();
}

} // namespace polyserendip
