#include "polyserendip/cli.hpp"

#include "polyserendip/corpus.hpp"
#include "polyserendip/fem.hpp"
#include "polyserendip/io.hpp"
#include "polyserendip/serendipity.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace polyserendip {

namespace {

struct VerifyConfig {
    std::string polygon_path;
    std::string kind = "meanvalue";
    std::string strategy = "auto";
    double tolerance = 1e-9;
    double lagrange_tolerance = 1e-10;
    int points = 50;
    std::uint64_t seed = 0;
    bool json = false;
    bool relaxed_g3 = false;
    std::string dump_a;
    std::string dump_b;
};

struct SampleConfig {
    std::string polygon_path;
    std::string kind = "meanvalue";
    std::string strategy = "auto";
    int resolution = 20;
    bool include_nodes = false;
    bool relaxed_g3 = false;
    std::string out_path;
};

struct ConvergenceConfig {
    std::vector<int> levels{2, 4, 8, 16, 32, 64};
    std::string kind = "meanvalue";
    std::string strategy = "auto";
    std::string solution = "sin-exp";
    double offset = 0.25;
    int assembly_degree = 10;
    int norm_degree = 14;
    int threads = 1;
    bool deep = false;
    std::string out_path;
};

struct MeshgenConfig {
    int n = 2;
    double offset = 0.25;
    std::string out_path;
};

void write_output(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_text_file(path, text);
    }
}

int cmd_verify(const VerifyConfig& cfg, std::ostream& out)
{
    const Polygon polygon = load_polygon(cfg.polygon_path, cfg.relaxed_g3 ? Convexity::AllowCollinear : Convexity::Strict);
    const CoordinateKind kind = parse_coordinate_kind(cfg.kind);
    const SerendipityElement element(polygon, kind, parse_strategy(cfg.strategy));
    const SerendipityMap& map = element.map();

    if (!cfg.dump_a.empty()) {
        std::ostringstream s;
        write_matrix_csv(s, map.A);
        write_text_file(cfg.dump_a, s.str());
    }
    if (!cfg.dump_b.empty()) {
        std::ostringstream s;
        write_matrix_csv(s, map.B);
        write_text_file(cfg.dump_b, s.str());
    }

    const ConstraintReport constraints = verify_constraints(polygon, map, cfg.tolerance);
    const Eigen::MatrixXd table = nodal_table(polygon, map);
    const double lagrange = (table - Eigen::MatrixXd::Identity(table.rows(), table.cols())).cwiseAbs().maxCoeff();

    Rng rng(cfg.seed);
    double xi_residual = 0.0;
    double psi_residual = 0.0;
    for (const Point& x : random_interior_points(polygon, cfg.points, rng)) {
        const SerendipityEval ev = element.eval(x);
        xi_residual = std::max(xi_residual, xi_precision_residual(polygon, ev));
        psi_residual = std::max(psi_residual, psi_reproduction_residual(polygon, ev));
    }
    // Precision residuals are relative to the polygon's own scale.
    const double scale = std::max(1.0, polygon.diameter() * polygon.diameter());
    const bool lagrange_ok = lagrange <= cfg.lagrange_tolerance;
    const bool precision_ok = xi_residual <= cfg.tolerance * scale && psi_residual <= cfg.tolerance * scale;
    const bool pass = constraints.pass && lagrange_ok && precision_ok;
    const IndexPair worst = constraints.columns.empty() ? IndexPair{} : constraints.columns[constraints.worst_column].pair;

    if (cfg.json) {
        nlohmann::json doc;
        doc["n"] = polygon.size();
        doc["kind"] = std::string(to_string(kind));
        doc["strategy"] = std::string(to_string(map.strategy));
        doc["constraints"] = {{"max_residual", constraints.max_residual},
            {"worst_column", {worst.a, worst.b}}, {"tolerance", constraints.tolerance}, {"pass", constraints.pass}};
        doc["lagrange"] = {{"max_deviation", lagrange}, {"tolerance", cfg.lagrange_tolerance}, {"pass", lagrange_ok}};
        doc["precision"] = {{"points", cfg.points}, {"seed", cfg.seed}, {"xi_max_residual", xi_residual},
            {"psi_max_residual", psi_residual}, {"pass", precision_ok}};
        doc["pass"] = pass;
        out << doc.dump(2) << '\n';
    } else {
        out << "polygon: " << polygon.size() << " vertices, area " << polygon.area() << ", diameter "
            << polygon.diameter() << '\n';
        out << "coordinates: " << to_string(kind) << ", strategy: " << to_string(map.strategy) << '\n';
        out << std::scientific << std::setprecision(3);
        out << "column constraints: max residual " << constraints.max_residual << " at {" << worst.a << ","
            << worst.b << "} " << (constraints.pass ? "PASS" : "FAIL") << '\n';
        out << "lagrange table: max deviation " << lagrange << ' ' << (lagrange_ok ? "PASS" : "FAIL") << '\n';
        out << "precision at " << cfg.points << " points: xi " << xi_residual << ", psi " << psi_residual << ' '
            << (precision_ok ? "PASS" : "FAIL") << '\n';
        out << (pass ? "PASS" : "FAIL") << '\n';
    }
    return pass ? kExitOk : kExitNumericalFailure;
}

int cmd_sample(const SampleConfig& cfg, std::ostream& out)
{
    if (cfg.resolution < 0) {
        throw InvalidInput("resolution must be nonnegative");
    }
    const Polygon polygon = load_polygon(cfg.polygon_path, cfg.relaxed_g3 ? Convexity::AllowCollinear : Convexity::Strict);
    const SerendipityElement element(polygon, parse_coordinate_kind(cfg.kind), parse_strategy(cfg.strategy));
    const int m = element.num_basis();

    std::ostringstream s;
    s << std::setprecision(std::numeric_limits<double>::max_digits10);
    s << "x,y";
    for (int p = 0; p < m; ++p) {
        s << ",psi_" << p;
    }
    s << '\n';
    const auto row = [&](const Point& x, const std::vector<double>& values) {
        s << x.x() << ',' << x.y();
        for (double v : values) {
            s << ',' << v;
        }
        s << '\n';
    };

    Point lo = polygon.vertex(0);
    Point hi = lo;
    for (const Point& p : polygon.vertices()) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double eps = element.coordinates().boundary_eps();
    std::vector<double> values;
    std::vector<Vector> grads;
    for (int j = 0; j < cfg.resolution; ++j) {
        for (int i = 0; i < cfg.resolution; ++i) {
            const Point x(lo.x() + (i + 0.5) / cfg.resolution * (hi.x() - lo.x()),
                lo.y() + (j + 0.5) / cfg.resolution * (hi.y() - lo.y()));
            if (polygon.interior_distance(x) <= eps) {
                continue;
            }
            element.eval_psi(x, values, grads);
            row(x, values);
        }
    }
    if (cfg.include_nodes) {
        const int n = polygon.size();
        for (int i = 0; i < n; ++i) {
            row(polygon.vertex(i), eval_basis_boundary(polygon, element.map(), i, 0.0).psi_values);
        }
        for (int i = 0; i < n; ++i) {
            row(polygon.midpoint(i, i + 1), eval_basis_boundary(polygon, element.map(), i, 0.5).psi_values);
        }
    }
    write_output(cfg.out_path, s.str(), out);
    return kExitOk;
}

Problem parse_solution(const std::string& name)
{
    if (name == "sin-exp") {
        return sine_exp_problem();
    }
    if (name == "x2") {
        return quadratic_problem(2, 0);
    }
    if (name == "xy") {
        return quadratic_problem(1, 1);
    }
    if (name == "y2") {
        return quadratic_problem(0, 2);
    }
    throw InvalidInput("unknown solution '" + name + "' (expected sin-exp, x2, xy or y2)");
}

int cmd_convergence(const ConvergenceConfig& cfg, std::ostream& out)
{
    ConvergenceOptions options;
    options.levels = cfg.levels;
    if (cfg.deep) {
        for (int extra = 0; extra < 2; ++extra) {
            options.levels.push_back(2 * options.levels.back());
        }
    }
    options.kind = parse_coordinate_kind(cfg.kind);
    options.strategy = parse_strategy(cfg.strategy);
    options.offset = cfg.offset;
    options.assembly_degree = cfg.assembly_degree;
    options.norm_degree = cfg.norm_degree;
    options.threads = cfg.threads;
    if (!std::isfinite(options.offset) || options.offset < 0.0 || options.offset >= 0.5) {
        throw InvalidInput("offset must lie in [0, 0.5)");
    }

    const auto rows = convergence_study(parse_solution(cfg.solution), options);
    if (!cfg.out_path.empty()) {
        std::ostringstream csv;
        write_convergence_csv(csv, rows);
        write_text_file(cfg.out_path, csv.str());
    }
    out << convergence_markdown(rows);
    return kExitOk;
}

int cmd_meshgen(const MeshgenConfig& cfg, std::ostream& out)
{
    const PolyMesh mesh = trapezoid_mesh(cfg.n, cfg.offset);
    const std::string text = mesh_to_json(mesh) + "\n";
    if (cfg.out_path.empty() || cfg.out_path == "-") {
        out << text;
    } else {
        write_text_file(cfg.out_path, text);
        out << "wrote " << cfg.out_path << ": " << mesh.num_vertices() << " vertices, " << mesh.num_cells()
            << " cells, " << mesh.num_edges() << " edges\n";
    }
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Quadratic serendipity elements on convex polygons"};
    app.name("polyserendip");
    app.require_subcommand(1);


    VerifyConfig verify;
    auto* v = app.add_subcommand("verify", "Check precision constraints and the Lagrange property of one element");
    v->add_option("polygon", verify.polygon_path, "Polygon JSON file")->required()->check(CLI::ExistingFile);
    v->add_option("-k,--kind", verify.kind, "Barycentric coordinates")->capture_default_str();
    v->add_option("-s,--strategy", verify.strategy, "Construction of A")->capture_default_str();
    v->add_option("--tol", verify.tolerance, "Tolerance for constraint and precision residuals")->capture_default_str();
    v->add_option("--points", verify.points, "Random interior points for the precision check")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    v->add_option("--seed", verify.seed, "Random seed")->capture_default_str();
    v->add_flag("--json", verify.json, "Machine-readable report");
    v->add_flag("--relaxed-g3", verify.relaxed_g3, "Accept vertices with a straight interior angle");
    v->add_option("--dump-A", verify.dump_a, "Write A as dense CSV");
    v->add_option("--dump-B", verify.dump_b, "Write B as dense CSV");

    SampleConfig sample;
    auto* s = app.add_subcommand("sample", "Sample the basis functions on a grid over the polygon");
    s->add_option("polygon", sample.polygon_path, "Polygon JSON file")->required()->check(CLI::ExistingFile);
    s->add_option("-k,--kind", sample.kind, "Barycentric coordinates")->capture_default_str();
    s->add_option("-s,--strategy", sample.strategy, "Construction of A")->capture_default_str();
    s->add_option("-r,--resolution", sample.resolution, "Grid cells per bounding-box side")->capture_default_str();
    s->add_flag("--include-nodes", sample.include_nodes, "Append rows for the vertices and edge midpoints");
    s->add_flag("--relaxed-g3", sample.relaxed_g3, "Accept vertices with a straight interior angle");
    s->add_option("-o,--out", sample.out_path, "Output CSV (default stdout)");

    ConvergenceConfig conv;
    auto* c = app.add_subcommand("convergence", "Poisson convergence study on trapezoid meshes");
    c->add_option("-l,--levels", conv.levels, "Mesh sizes n, each double the previous")
        ->delimiter(',')
        ->capture_default_str();
    c->add_option("-k,--kind", conv.kind, "Barycentric coordinates")->capture_default_str();
    c->add_option("-s,--strategy", conv.strategy, "Construction of A")->capture_default_str();
    c->add_option("--solution", conv.solution, "Exact solution: sin-exp, x2, xy, y2")->capture_default_str();
    c->add_option("--offset", conv.offset, "Trapezoid offset in [0, 0.5)")->capture_default_str();
    c->add_option("--assembly-degree", conv.assembly_degree, "Quadrature degree for assembly")
        ->check(CLI::Range(1, 20))
        ->capture_default_str();
    c->add_option("--norm-degree", conv.norm_degree, "Quadrature degree for error norms")
        ->check(CLI::Range(1, 20))
        ->capture_default_str();
    c->add_option("-j,--threads", conv.threads, "Assembly threads (0 = hardware)")->capture_default_str();
    c->add_flag("--deep", conv.deep, "Append two further refinement levels");
    c->add_option("-o,--out", conv.out_path, "Output CSV");

    MeshgenConfig mesh;
    auto* m = app.add_subcommand("meshgen", "Write an n x n trapezoid mesh as JSON");
    m->add_option("-n", mesh.n, "Cells per side")->required()->check(CLI::PositiveNumber);
    m->add_option("--offset", mesh.offset, "Trapezoid offset in [0, 0.5)")->capture_default_str();
    m->add_option("-o,--out", mesh.out_path, "Output JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (*v) {
            return cmd_verify(verify, out);
        }
        if (*s) {
            return cmd_sample(sample, out);
        }
        if (*c) {
            return cmd_convergence(conv, out);
        }
        return cmd_meshgen(mesh, out);
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolverFailure;
    } catch (const ConstructionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumericalFailure;
    } catch (const BoundaryEvaluationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumericalFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

} // namespace polyserendip
