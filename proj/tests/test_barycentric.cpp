#include "polyserendip/barycentric.hpp"
#include "polyserendip/corpus.hpp"
#include "polyserendip/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace polyserendip;

namespace {

const CoordinateKind all_kinds[] = {CoordinateKind::Wachspress, CoordinateKind::MeanValue, CoordinateKind::Triangulation};

std::string kind_name(const testing::TestParamInfo<CoordinateKind>& info)
{
    return std::string(to_string(info.param));
}

// Triangle barycentric coordinates by Cramer's rule.
std::array<double, 3> triangle_coords(const Polygon& t, const Point& x)
{
    const double area2 = cross(t.vertex(1) - t.vertex(0), t.vertex(2) - t.vertex(0));
    return {cross(t.vertex(1) - x, t.vertex(2) - x) / area2, cross(t.vertex(2) - x, t.vertex(0) - x) / area2,
        cross(t.vertex(0) - x, t.vertex(1) - x) / area2};
}

} // namespace

class CoordinateProperties : public testing::TestWithParam<CoordinateKind> {};

TEST_P(CoordinateProperties, PartitionLinearPrecisionAndPositivity)
{
    Rng rng(21);
    for (int n = 3; n <= 10; ++n) {
        const Polygon p = random_convex_polygon(n, rng);
        const BarycentricCoordinates bc(p, GetParam());
        const double scale = std::max(1.0, p.diameter() + p.centroid().norm());
        for (const Point& x : random_interior_points(p, 100, rng)) {
            const CoordEval ev = bc.eval(x);
            double sum = 0.0;
            Point lin = Point::Zero();
            Vector gsum = Vector::Zero();
            for (int i = 0; i < n; ++i) {
                EXPECT_GE(ev.values[i], -1e-12);
                sum += ev.values[i];
                lin += ev.values[i] * p.vertex(i);
                gsum += ev.gradients[i];
            }
            EXPECT_NEAR(sum, 1.0, 1e-12);
            EXPECT_LT((lin - x).norm(), 1e-10 * scale);
            EXPECT_LT(gsum.norm(), 1e-9 * std::max(1.0, 1.0 / p.diameter()));
        }
    }
}

TEST_P(CoordinateProperties, TrianglesGiveClassicalCoordinates)
{
    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const Polygon t = random_convex_polygon(3, rng);
        const BarycentricCoordinates bc(t, GetParam());
        for (const Point& x : random_interior_points(t, 20, rng)) {
            const CoordEval ev = bc.eval(x);
            const auto oracle = triangle_coords(t, x);
            for (int i = 0; i < 3; ++i) {
                EXPECT_NEAR(ev.values[i], oracle[static_cast<std::size_t>(i)], 1e-12);
            }
        }
    }
}

TEST_P(CoordinateProperties, SimilarityInvariance)
{
    Rng rng(8);
    const Eigen::Matrix2d rot = Eigen::Rotation2Dd(0.7).toRotationMatrix();
    const Point shift(3.0, -1.5);
    const double scale = 2.5;
    for (int n = 4; n <= 8; ++n) {
        const Polygon p = random_convex_polygon(n, rng);
        std::vector<Point> mapped;
        for (const Point& v : p.vertices()) {
            mapped.push_back(shift + scale * (rot * v));
        }
        const Polygon q(mapped);
        const BarycentricCoordinates bp(p, GetParam());
        const BarycentricCoordinates bq(q, GetParam());
        for (const Point& x : random_interior_points(p, 20, rng, 1e-2)) {
            const CoordEval a = bp.eval(x);
            const CoordEval b = bq.eval(shift + scale * (rot * x));
            for (int i = 0; i < n; ++i) {
                EXPECT_NEAR(a.values[i], b.values[i], 1e-12);
            }
        }
    }
}

TEST_P(CoordinateProperties, GradientsMatchCentralDifferences)
{
    Rng rng(12);
    for (int n = 3; n <= 9; ++n) {
        const Polygon p = random_convex_polygon(n, rng);
        const BarycentricCoordinates bc(p, GetParam());
        const double h = 1e-6 * p.diameter();
        for (const Point& x : random_interior_points(p, 20, rng, 1e-2)) {
            const CoordEval ev = bc.eval(x);
            if (GetParam() == CoordinateKind::Triangulation) {
                // Piecewise linear: skip points whose stencil crosses a fan edge.
                const Point stencil[] = {x + Point(h, 0), x - Point(h, 0), x + Point(0, h), x - Point(0, h)};
                bool smooth = true;
                for (const Point& s : stencil) {
                    const CoordEval e = bc.eval(s);
                    for (int i = 0; i < n; ++i) {
                        smooth = smooth && (e.gradients[i] - ev.gradients[i]).norm() == 0.0;
                    }
                }
                if (!smooth) {
                    continue;
                }
            }
            for (int i = 0; i < n; ++i) {
                const double dx = (bc.eval(x + Point(h, 0)).values[i] - bc.eval(x - Point(h, 0)).values[i]) / (2 * h);
                const double dy = (bc.eval(x + Point(0, h)).values[i] - bc.eval(x - Point(0, h)).values[i]) / (2 * h);
                const Vector fd(dx, dy);
                const double ref = std::max(ev.gradients[i].norm(), 1.0 / p.diameter());
                EXPECT_LT((fd - ev.gradients[i]).norm() / ref, 1e-5) << "n=" << n << " i=" << i;
            }
        }
    }
}

TEST_P(CoordinateProperties, RejectsBoundaryAndExteriorPoints)
{
    const Polygon sq = unit_square();
    const BarycentricCoordinates bc(sq, GetParam());
    EXPECT_THROW((void)bc.eval(Point(1.0, 0.5)), BoundaryEvaluationError);
    EXPECT_THROW((void)bc.eval(Point(2.0, 0.5)), BoundaryEvaluationError);
    EXPECT_THROW((void)bc.eval(Point(0.0, 0.0)), BoundaryEvaluationError);
}

TEST_P(CoordinateProperties, NearVertexInterpolation)
{
    const Polygon p = regular_polygon(6);
    const BarycentricCoordinates bc(p, GetParam());
    for (int i = 0; i < 6; ++i) {
        const Point x = p.vertex(i) + 1e-7 * (p.centroid() - p.vertex(i));
        const CoordEval ev = bc.eval(x);
        EXPECT_NEAR(ev.values[i], 1.0, 1e-6);
    }
}

INSTANTIATE_TEST_SUITE_P(AllKinds, CoordinateProperties, testing::ValuesIn(all_kinds), kind_name);

TEST(Wachspress, UnitSquareIsBilinear)
{
    const Polygon sq = unit_square();
    const BarycentricCoordinates bc(sq, CoordinateKind::Wachspress);
    Rng rng(1);
    for (const Point& p : random_interior_points(sq, 50, rng)) {
        const double x = p.x();
        const double y = p.y();
        const CoordEval ev = bc.eval(p);
        EXPECT_NEAR(ev.values[0], (1 - x) * (1 - y), 1e-12);
        EXPECT_NEAR(ev.values[1], x * (1 - y), 1e-12);
        EXPECT_NEAR(ev.values[2], x * y, 1e-12);
        EXPECT_NEAR(ev.values[3], (1 - x) * y, 1e-12);
        EXPECT_NEAR(ev.gradients[0].x(), -(1 - y), 1e-12);
        EXPECT_NEAR(ev.gradients[0].y(), -(1 - x), 1e-12);
    }
    const CoordEval c = bc.eval(Point(0.5, 0.5));
    for (double v : c.values) {
        EXPECT_NEAR(v, 0.25, 1e-15);
    }
}

TEST(Wachspress, RejectsFlatVertex)
{
    EXPECT_THROW(BarycentricCoordinates(degenerate_pentagon(), CoordinateKind::Wachspress), GeometryError);
}

TEST(MeanValue, RegularHexagonCentroid)
{
    const CoordEval ev = eval_coords(regular_polygon(6), CoordinateKind::MeanValue, Point(0, 0));
    for (double v : ev.values) {
        EXPECT_NEAR(v, 1.0 / 6.0, 1e-14);
    }
}

TEST(MeanValue, DegeneratePentagonIsSupported)
{
    const Polygon p = degenerate_pentagon();
    const CoordEval ev = eval_coords(p, CoordinateKind::MeanValue, Point(0.3, 0.4));
    double sum = 0.0;
    Point lin = Point::Zero();
    for (int i = 0; i < 5; ++i) {
        sum += ev.values[i];
        lin += ev.values[i] * p.vertex(i);
    }
    EXPECT_NEAR(sum, 1.0, 1e-13);
    EXPECT_NEAR(lin.x(), 0.3, 1e-13);
    EXPECT_NEAR(lin.y(), 0.4, 1e-13);
}

TEST(MeanValue, RegularPentagonGradientAtFixedPoint)
{
    const Polygon p = regular_polygon(5);
    const Point x(0.1, 0.2);
    const auto grads = eval_gradients(p, CoordinateKind::MeanValue, x);
    const double h = 1e-6 * p.diameter();
    for (int i = 0; i < 5; ++i) {
        const double dx = (eval_coords(p, CoordinateKind::MeanValue, x + Point(h, 0)).values[i]
                              - eval_coords(p, CoordinateKind::MeanValue, x - Point(h, 0)).values[i])
            / (2 * h);
        const double dy = (eval_coords(p, CoordinateKind::MeanValue, x + Point(0, h)).values[i]
                              - eval_coords(p, CoordinateKind::MeanValue, x - Point(0, h)).values[i])
            / (2 * h);
        EXPECT_LT((Vector(dx, dy) - grads[i]).norm() / grads[i].norm(), 1e-5);
    }
}

TEST(Triangulation, RejectsDegenerateFan)
{
    // Flat vertex at index 1 makes fan triangle (v0, v1, v2) degenerate.
    const Polygon p({{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}, Convexity::AllowCollinear);
    EXPECT_THROW(BarycentricCoordinates(p, CoordinateKind::Triangulation), GeometryError);
    EXPECT_NO_THROW(BarycentricCoordinates(degenerate_pentagon(), CoordinateKind::Triangulation));
}

TEST(Boundary, EdgeTraceIsPiecewiseLinear)
{
    const Polygon pent = regular_polygon(5);
    const CoordEval mid = eval_boundary(pent, 0, 0.5);
    EXPECT_DOUBLE_EQ(mid.values[0], 0.5);
    EXPECT_DOUBLE_EQ(mid.values[1], 0.5);
    EXPECT_TRUE(mid.gradients.empty());

    const CoordEval start = eval_boundary(pent, 3, 0.0);
    for (int i = 0; i < 5; ++i) {
        EXPECT_DOUBLE_EQ(start.values[i], i == 3 ? 1.0 : 0.0);
    }

    const CoordEval q = eval_boundary(pent, 2, 0.25);
    const double expected[] = {0.0, 0.0, 0.75, 0.25, 0.0};
    for (int i = 0; i < 5; ++i) {
        EXPECT_DOUBLE_EQ(q.values[i], expected[i]);
    }
    const CoordEval wrap = eval_boundary(pent, 4, 0.25);
    EXPECT_DOUBLE_EQ(wrap.values[4], 0.75);
    EXPECT_DOUBLE_EQ(wrap.values[0], 0.25);

    EXPECT_THROW(eval_boundary(pent, 5, 0.5), InvalidInput);
    EXPECT_THROW(eval_boundary(pent, 0, 1.5), InvalidInput);
}

TEST(Pairwise, UnitSquareCentre)
{
    const PairwiseEval mu = eval_pairwise(unit_square(), CoordinateKind::Wachspress, Point(0.5, 0.5));
    ASSERT_EQ(mu.values.size(), 10U);
    for (double v : mu.values) {
        EXPECT_NEAR(v, 1.0 / 16.0, 1e-15);
    }
}

TEST(Pairwise, UnitSquareDiagonalProducts)
{
    const IndexSets sets = index_sets(4);
    Rng rng(2);
    for (const Point& p : random_interior_points(unit_square(), 20, rng)) {
        const PairwiseEval mu = eval_pairwise(unit_square(), CoordinateKind::Wachspress, p);
        const double expected = (1 - p.x()) * p.x() * (1 - p.y()) * p.y();
        EXPECT_NEAR(mu.values[sets.column(0, 2)], expected, 1e-14);
        EXPECT_NEAR(mu.values[sets.column(1, 3)], expected, 1e-14);
    }
}

TEST(Pairwise, QuadraticPrecisionOnRandomHeptagon)
{
    Rng rng(17);
    const Polygon p = random_convex_polygon(7, rng);
    const IndexSets sets = index_sets(7);
    const auto pairs = sets.ordered();
    for (CoordinateKind kind : all_kinds) {
        for (const Point& x : random_interior_points(p, 100, rng)) {
            const PairwiseEval mu = eval_pairwise(p, kind, x);
            double q1 = 0.0;
            Point q2 = Point::Zero();
            Eigen::Matrix2d q3 = Eigen::Matrix2d::Zero();
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                const Point& va = p.vertex(pairs[k].a);
                const Point& vb = p.vertex(pairs[k].b);
                const double w = pairs[k].a == pairs[k].b ? 1.0 : 2.0;
                q1 += w * mu.values[k];
                q2 += w * mu.values[k] * 0.5 * (va + vb);
                const Eigen::Matrix2d outer = pairs[k].a == pairs[k].b
                    ? Eigen::Matrix2d(va * va.transpose())
                    : Eigen::Matrix2d(va * vb.transpose() + vb * va.transpose());
                q3 += mu.values[k] * outer;
            }
            const double scale = std::max(1.0, x.squaredNorm());
            EXPECT_NEAR(q1, 1.0, 1e-11);
            EXPECT_LT((q2 - x).norm(), 1e-10 * std::sqrt(scale));
            EXPECT_LT((q3 - x * x.transpose()).cwiseAbs().maxCoeff(), 1e-10 * scale);
        }
    }
}

TEST(Pairwise, GradientsByFiniteDifferences)
{
    Rng rng(31);
    const Polygon p = random_convex_polygon(6, rng);
    const double h = 1e-6 * p.diameter();
    for (CoordinateKind kind : {CoordinateKind::Wachspress, CoordinateKind::MeanValue}) {
        for (const Point& x : random_interior_points(p, 20, rng, 1e-2)) {
            const PairwiseEval mu = eval_pairwise(p, kind, x);
            const PairwiseEval px = eval_pairwise(p, kind, x + Point(h, 0));
            const PairwiseEval mx = eval_pairwise(p, kind, x - Point(h, 0));
            const PairwiseEval py = eval_pairwise(p, kind, x + Point(0, h));
            const PairwiseEval my = eval_pairwise(p, kind, x - Point(0, h));
            for (std::size_t k = 0; k < mu.values.size(); ++k) {
                const Vector fd((px.values[k] - mx.values[k]) / (2 * h), (py.values[k] - my.values[k]) / (2 * h));
                const double ref = std::max(mu.gradients[k].norm(), 1.0 / p.diameter());
                EXPECT_LT((fd - mu.gradients[k]).norm() / ref, 1e-5);
            }
        }
    }
}

TEST(CoordinateKindNames, ParseRoundTrip)
{
    for (CoordinateKind kind : all_kinds) {
        EXPECT_EQ(parse_coordinate_kind(to_string(kind)), kind);
    }
    EXPECT_EQ(parse_coordinate_kind("mean_value"), CoordinateKind::MeanValue);
    EXPECT_THROW(parse_coordinate_kind("harmonic"), InvalidInput);
}
