#include "polyserendip/cli.hpp"
#include "polyserendip/fem.hpp"
#include "polyserendip/io.hpp"
#include "polyserendip/serendipity.hpp"

#include <gtest/gtest.h>
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

using namespace polyserendip;

namespace {

const std::filesystem::path data_dir{POLYSERENDIP_DATA_DIR};

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "polyserendip");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    CliRun r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string data(const char* name) { return (data_dir / name).string(); }

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("polyserendip_cli_" + name);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST(CliVerify, UnitSquareIsExact)
{
    const CliRun r = cli({"verify", data("unit_square.json"), "--json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_TRUE(doc.at("pass").get<bool>());
    EXPECT_EQ(doc.at("n").get<int>(), 4);
    EXPECT_LE(doc.at("constraints").at("max_residual").get<double>(), 1e-14);
    EXPECT_TRUE(doc.at("lagrange").at("pass").get<bool>());
    EXPECT_TRUE(doc.at("precision").at("pass").get<bool>());
}

TEST(CliVerify, HumanReportEndsWithVerdict)
{
    const CliRun r = cli({"verify", data("unit_square.json")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(CliVerify, NonConvexIsInputError)
{
    const CliRun r = cli({"verify", data("nonconvex.json")});
    EXPECT_EQ(r.code, kExitInputError);
    EXPECT_NE(r.err.find("polygon not convex"), std::string::npos) << r.err;
}

TEST(CliVerify, RegularTwelveGonGenericStrategy)
{
    for (const char* kind : {"meanvalue", "wachspress", "triangulation"}) {
        const CliRun r = cli({"verify", data("regular_12gon.json"), "-s", "generic", "-k", kind, "--json"});
        EXPECT_EQ(r.code, kExitOk) << kind << ": " << r.err;
        EXPECT_EQ(nlohmann::json::parse(r.out).at("strategy").get<std::string>(), "generic");
    }
}

TEST(CliVerify, DegeneratePentagonNeedsRelaxedFlag)
{
    EXPECT_EQ(cli({"verify", data("degenerate_pentagon.json")}).code, kExitInputError);
    const CliRun r = cli({"verify", data("degenerate_pentagon.json"), "--relaxed-g3"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST(CliVerify, DumpAMatchesLibrary)
{
    const auto path = temp_file("A.csv");
    const CliRun r = cli({"verify", data("unit_square.json"), "--dump-A", path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = parse_csv(read_text_file(path));
    std::filesystem::remove(path);
    const Eigen::MatrixXd a = build_map(load_polygon(data_dir / "unit_square.json")).A;
    ASSERT_EQ(rows.size(), static_cast<std::size_t>(a.rows()));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        ASSERT_EQ(rows[static_cast<std::size_t>(i)].size(), static_cast<std::size_t>(a.cols()));
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            EXPECT_EQ(std::stod(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]), a(i, j));
        }
    }
}

TEST(CliVerify, MissingFileIsInputError)
{
    EXPECT_EQ(cli({"verify", data("does_not_exist.json")}).code, kExitInputError);
    EXPECT_EQ(cli({"verify", data("unit_square.json"), "-k", "bogus"}).code, kExitInputError);
}

TEST(CliSample, UnitSquareCentreRow)
{
    const CliRun r = cli({"sample", data("unit_square.json"), "-r", "3"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_FALSE(rows.empty());
    ASSERT_EQ(rows[0].size(), 10U);
    EXPECT_EQ(rows[0][0], "x");
    EXPECT_EQ(rows[0][2], "psi_0");
    EXPECT_EQ(rows[0][9], "psi_7");
    EXPECT_EQ(rows.size(), 10U);
    bool found = false;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        double sum = 0.0;
        for (std::size_t c = 2; c < rows[k].size(); ++c) {
            sum += std::stod(rows[k][c]);
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
        if (std::stod(rows[k][0]) == 0.5 && std::stod(rows[k][1]) == 0.5) {
            found = true;
        }
    }
    EXPECT_TRUE(found);
}

TEST(CliSample, ZeroResolutionIsHeaderOnly)
{
    const CliRun r = cli({"sample", data("unit_square.json"), "-r", "0"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 1U);
    EXPECT_EQ(rows[0][0], "x");
}

TEST(CliSample, DegeneratePentagonNodesFormDeltaTable)
{
    const auto path = temp_file("pent.csv");
    const CliRun r = cli({"sample", data("degenerate_pentagon.json"), "--relaxed-g3", "--include-nodes", "-r", "4",
        "-o", path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = parse_csv(read_text_file(path));
    std::filesystem::remove(path);
    const Polygon p = load_polygon(data_dir / "degenerate_pentagon.json", Convexity::AllowCollinear);
    const int n = p.size();
    ASSERT_GE(rows.size(), static_cast<std::size_t>(2 * n + 1));
    const std::size_t first = rows.size() - static_cast<std::size_t>(2 * n);
    for (int k = 0; k < 2 * n; ++k) {
        const auto& row = rows[first + static_cast<std::size_t>(k)];
        const Point node = k < n ? p.vertex(k) : 0.5 * (p.vertex(k - n) + p.vertex(p.wrap(k - n + 1)));
        EXPECT_EQ(std::stod(row[0]), node.x());
        EXPECT_EQ(std::stod(row[1]), node.y());
        for (int j = 0; j < 2 * n; ++j) {
            EXPECT_NEAR(std::stod(row[static_cast<std::size_t>(2 + j)]), j == k ? 1.0 : 0.0, 1e-10)
                << "node " << k << " psi " << j;
        }
    }
}

TEST(CliConvergence, FourLevelsRateAtSixteen)
{
    const auto path = temp_file("conv.csv");
    const CliRun r = cli({"convergence", "-l", "2,4,8,16", "-j", "0", "-o", path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("| 16 |"), std::string::npos);
    const auto rows = parse_csv(read_text_file(path));
    std::filesystem::remove(path);
    ASSERT_EQ(rows.size(), 5U);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "dofs", "l2_error", "l2_rate", "h1_error", "h1_rate"}));
    EXPECT_EQ(rows[1][3], "");
    EXPECT_EQ(rows[1][5], "");
    const double l2_rate = std::stod(rows[4][3]);
    EXPECT_GE(l2_rate, 2.85);
    EXPECT_LE(l2_rate, 3.10);
}

TEST(CliConvergence, SingleLevelHasNoRates)
{
    const auto path = temp_file("single.csv");
    const CliRun r = cli({"convergence", "-l", "4", "-o", path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = parse_csv(read_text_file(path));
    std::filesystem::remove(path);
    ASSERT_EQ(rows.size(), 2U);
    EXPECT_EQ(rows[1][0], "4");
    EXPECT_EQ(rows[1][3], "");
    EXPECT_EQ(rows[1][5], "");
    EXPECT_GT(std::stod(rows[1][2]), 0.0);
}

TEST(CliConvergence, LargeOffsetCompletes)
{
    const CliRun r = cli({"convergence", "--offset", "0.45", "-l", "32", "-j", "0"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("| 32 |"), std::string::npos);
}

TEST(CliConvergence, BadInput)
{
    EXPECT_EQ(cli({"convergence", "-l", "2,3"}).code, kExitInputError);
    EXPECT_EQ(cli({"convergence", "--offset", "0.5", "-l", "2"}).code, kExitInputError);
    EXPECT_EQ(cli({"convergence", "--solution", "cubic", "-l", "2"}).code, kExitInputError);
}

TEST(CliMeshgen, TwoByTwoCounts)
{
    const CliRun r = cli({"meshgen", "-n", "2", "--offset", "0.25"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const PolyMesh m = mesh_from_json(r.out);
    EXPECT_EQ(m.num_vertices(), 9);
    EXPECT_EQ(m.num_cells(), 4);
    EXPECT_EQ(m.num_edges(), 12);
}

TEST(CliMeshgen, OneCellIsUnitSquare)
{
    const CliRun r = cli({"meshgen", "-n", "1", "--offset", "0.4"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const PolyMesh m = mesh_from_json(r.out);
    ASSERT_EQ(m.num_cells(), 1);
    std::vector<Point> pts;
    for (int v : m.cells()[0]) {
        pts.push_back(m.vertices()[static_cast<std::size_t>(v)]);
    }
    EXPECT_TRUE(is_unit_square(Polygon(pts)));
}

TEST(CliMeshgen, EightByEightWrittenToFileIsConforming)
{
    const auto path = temp_file("mesh8.json");
    const CliRun r = cli({"meshgen", "-n", "8", "-o", path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const PolyMesh m = load_mesh(path);
    std::filesystem::remove(path);
    EXPECT_EQ(m.num_cells(), 64);
    EXPECT_EQ(m.num_vertices(), 81);
    EXPECT_EQ(m.num_edges(), 144);
}

TEST(CliMeshgen, OffsetHalfRejected)
{
    EXPECT_EQ(cli({"meshgen", "-n", "2", "--offset", "0.5"}).code, kExitInputError);
    EXPECT_EQ(cli({"meshgen", "-n", "0"}).code, kExitInputError);
}

TEST(CliUsage, HelpAndMissingSubcommand)
{
    const CliRun help = cli({"--help"});
    EXPECT_EQ(help.code, kExitOk);
    EXPECT_NE((help.out + help.err).find("verify"), std::string::npos);
    EXPECT_EQ(cli({}).code, kExitInputError);
    EXPECT_EQ(cli({"frobnicate"}).code, kExitInputError);
}

TEST(CliUsage, Deterministic)
{
    const CliRun a = cli({"verify", data("regular_12gon.json"), "--json", "--seed", "7"});
    const CliRun b = cli({"verify", data("regular_12gon.json"), "--json", "--seed", "7"});
    EXPECT_EQ(a.out, b.out);
}
