#include "polyserendip/corpus.hpp"
#include "polyserendip/error.hpp"
#include "polyserendip/io.hpp"
#include "polyserendip/serendipity.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace polyserendip;

namespace {

const std::filesystem::path data_dir{POLYSERENDIP_DATA_DIR};

} // namespace

TEST(PolygonJson, RoundTripIsBitExact)
{
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Polygon p = random_convex_polygon(3 + trial % 8, rng);
        const Polygon q = polygon_from_json(polygon_to_json(p));
        ASSERT_EQ(p.size(), q.size());
        for (int i = 0; i < p.size(); ++i) {
            EXPECT_EQ(p.vertex(i), q.vertex(i));
        }
    }
}

TEST(PolygonJson, ParsesIntegersAndFloats)
{
    const Polygon p = polygon_from_json(R"({"vertices": [[0, 0], [1.5, 0], [1.5, 2e0], [0, 2]]})");
    EXPECT_EQ(p.size(), 4);
    EXPECT_EQ(p.vertex(2), Point(1.5, 2.0));
}

TEST(PolygonJson, RejectsMalformedInput)
{
    EXPECT_THROW(polygon_from_json("{"), InvalidInput);
    EXPECT_THROW(polygon_from_json("[]"), InvalidInput);
    EXPECT_THROW(polygon_from_json(R"({"points": [[0,0],[1,0],[0,1]]})"), InvalidInput);
    EXPECT_THROW(polygon_from_json(R"({"vertices": [[0,0],[1,0],[0]]})"), InvalidInput);
    EXPECT_THROW(polygon_from_json(R"({"vertices": [[0,0],[1,"a"],[0,1]]})"), InvalidInput);
    EXPECT_THROW(polygon_from_json(R"({"vertices": [[0,0],[1,0]]})"), InvalidInput);
}

TEST(PolygonJson, ValidationMessages)
{
    try {
        (void)load_polygon(data_dir / "nonconvex.json");
        FAIL() << "expected rejection";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("polygon not convex"), std::string::npos) << e.what();
    }
    EXPECT_THROW(load_polygon(data_dir / "degenerate_pentagon.json"), Error);
    const Polygon dp = load_polygon(data_dir / "degenerate_pentagon.json", Convexity::AllowCollinear);
    EXPECT_TRUE(dp.is_flat(0));
    EXPECT_THROW(load_polygon(data_dir / "does_not_exist.json"), InvalidInput);
}

TEST(PolygonJson, DataFiles)
{
    EXPECT_TRUE(is_unit_square(load_polygon(data_dir / "unit_square.json")));
    const Polygon twelve = load_polygon(data_dir / "regular_12gon.json");
    EXPECT_EQ(twelve.size(), 12);
    EXPECT_TRUE(is_regular(twelve));
    EXPECT_EQ(load_polygon(data_dir / "trapezoid.json").size(), 4);
}

TEST(MeshJson, RoundTrip)
{
    for (const PolyMesh& m : {trapezoid_mesh(3, 0.25), mixed_mesh()}) {
        const PolyMesh k = mesh_from_json(mesh_to_json(m));
        EXPECT_EQ(k.vertices(), m.vertices());
        EXPECT_EQ(k.cells(), m.cells());
        EXPECT_EQ(k.num_edges(), m.num_edges());
    }
}

TEST(MeshJson, RejectsMalformedInput)
{
    EXPECT_THROW(mesh_from_json(R"({"vertices": [[0,0],[1,0],[0,1]]})"), InvalidInput);
    EXPECT_THROW(mesh_from_json(R"({"vertices": [[0,0],[1,0],[0,1]], "cells": [[0, 1, 2.5]]})"), InvalidInput);
    EXPECT_THROW(mesh_from_json(R"({"vertices": [[0,0],[1,0],[0,1]], "cells": [0, 1, 2]})"), InvalidInput);
    EXPECT_THROW(mesh_from_json(R"({"vertices": [[0,0],[1,0],[0,1]], "cells": [[0, 1, 9]]})"), InvalidInput);
    EXPECT_NO_THROW(mesh_from_json(R"({"vertices": [[0,0],[1,0],[0,1]], "cells": [[0, 1, 2]]})"));
}

TEST(MatrixCsv, FullPrecision)
{
    Eigen::MatrixXd m(2, 3);
    m << 1.0 / 3.0, -2.0, 0.0, 1e-300, 4.5, -0.1;
    std::ostringstream out;
    write_matrix_csv(out, m);
    std::istringstream in(out.str());
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        std::string cell;
        int col = 0;
        while (std::getline(cells, cell, ',')) {
            EXPECT_EQ(std::stod(cell), m(row, col));
            ++col;
        }
        EXPECT_EQ(col, 3);
        ++row;
    }
    EXPECT_EQ(row, 2);
}

TEST(TextFiles, WriteThenRead)
{
    const auto path = std::filesystem::temp_directory_path() / "polyserendip_io_test.txt";
    write_text_file(path, "hello\nworld\n");
    EXPECT_EQ(read_text_file(path), "hello\nworld\n");
    std::filesystem::remove(path);
    EXPECT_THROW(write_text_file("/nonexistent-dir/x.txt", "x"), InvalidInput);
}
