#include "polyserendip/io.hpp"

#include "json.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace polyserendip {

namespace {

using nlohmann::json;

json parse(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

std::vector<Point> read_points(const json& doc)
{
    if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array()) {
        throw InvalidInput("JSON must be an object with a \"vertices\" array");
    }
    std::vector<Point> points;
    for (const auto& v : doc["vertices"]) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw InvalidInput("each vertex must be a [x, y] pair of numbers");
        }
        points.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    return points;
}

json write_points(std::span<const Point> points)
{
    json out = json::array();
    for (const Point& p : points) {
        out.push_back({p.x(), p.y()});
    }
    return out;
}

} // namespace

Polygon polygon_from_json(std::string_view text, Convexity mode)
{
    return Polygon(read_points(parse(text)), mode);
}

std::string polygon_to_json(const Polygon& polygon)
{
    json doc;
    doc["vertices"] = write_points(polygon.vertices());
    return doc.dump();
}

Polygon load_polygon(const std::filesystem::path& path, Convexity mode)
{
    return polygon_from_json(read_text_file(path), mode);
}

PolyMesh mesh_from_json(std::string_view text)
{
    const json doc = parse(text);
    std::vector<Point> points = read_points(doc);
    if (!doc.contains("cells") || !doc["cells"].is_array()) {
        throw InvalidInput("mesh JSON needs a \"cells\" array");
    }
    std::vector<std::vector<int>> cells;
    for (const auto& c : doc["cells"]) {
        if (!c.is_array()) {
            throw InvalidInput("each cell must be an array of vertex indices");
        }
        std::vector<int> cell;
        for (const auto& i : c) {
            if (!i.is_number_integer()) {
                throw InvalidInput("cell entries must be integers");
            }
            cell.push_back(i.get<int>());
        }
        cells.push_back(std::move(cell));
    }
    return PolyMesh(std::move(points), std::move(cells));
}

std::string mesh_to_json(const PolyMesh& mesh)
{
    json doc;
    doc["vertices"] = write_points(mesh.vertices());
    doc["cells"] = mesh.cells();
    return doc.dump();
}

PolyMesh load_mesh(const std::filesystem::path& path)
{
    return mesh_from_json(read_text_file(path));
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix)
{
    std::ostringstream s;
    s << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            s << (j > 0 ? "," : "") << matrix(i, j);
        }
        s << '\n';
    }
    out << s.str();
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot open " + path.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidInput("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw InvalidInput("failed writing " + path.string());
    }
}

} // namespace polyserendip
