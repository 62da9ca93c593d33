#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "voronet/oracle.hpp"
#include "voronet/rng.hpp"

using namespace voronet;

namespace {

SampleSet random_samples(std::size_t d, std::size_t n, std::uint64_t seed,
                         double lo = 0.0, double hi = 1.0) {
    Rng rng(seed);
    std::vector<double> pts(n * d), vals(n);
    for (auto& v : pts) v = rng.uniform(lo, hi);
    for (auto& v : vals) v = rng.uniform(-5.0, 5.0);
    return SampleSet(d, std::move(pts), std::move(vals));
}

/// Midpoint generators (i + 1/2) / n on [0, 1].
SampleSet midpoints_1d(std::size_t n) {
    std::vector<double> pts(n), vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        vals[i] = static_cast<double>(i);
    }
    return SampleSet(1, std::move(pts), std::move(vals));
}

}  // namespace

TEST(Nearest, TwoPointLine) {
    const SampleSet s(1, {0.0, 1.0}, {10.0, 20.0});
    const auto a = nearest(s, std::vector<double>{0.3});
    EXPECT_EQ(a.index, 0u);
    EXPECT_FALSE(a.tied);
    EXPECT_DOUBLE_EQ(a.distance, 0.3);

    const auto b = nearest(s, std::vector<double>{0.5});
    EXPECT_EQ(b.index, 0u);  // lowest index wins exact ties
    EXPECT_TRUE(b.tied);
}

TEST(Nearest, TriangleHandComputed) {
    // Squared distances from (0.9, 0.8): 1.45, 0.65, 0.85.
    const SampleSet s(2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0}, {1.0, 2.0, 3.0});
    const auto r = nearest(s, std::vector<double>{0.9, 0.8});
    EXPECT_EQ(r.index, 1u);
    EXPECT_FALSE(r.tied);
    EXPECT_DOUBLE_EQ(r.distance * r.distance, 0.65);
}

TEST(Nearest, InvariantUnderAppendingFartherSample) {
    Rng rng(11);
    for (int it = 0; it < 50; ++it) {
        const auto s = random_samples(3, 10, 1000 + it);
        const std::vector<double> x{rng.uniform(), rng.uniform(), rng.uniform()};
        const auto before = nearest(s, x);

        std::vector<double> pts(s.points_flat().begin(), s.points_flat().end());
        std::vector<double> vals = s.values();
        // A point strictly farther from x than the current minimum.
        pts.insert(pts.end(), {x[0] + 2.0 * before.distance + 1.0, x[1], x[2]});
        vals.push_back(0.0);
        const SampleSet bigger(3, std::move(pts), std::move(vals));

        const auto after = nearest(bigger, x);
        EXPECT_EQ(after.index, before.index);
        EXPECT_EQ(after.distance, before.distance);
    }
}

TEST(Nearest, DimensionMismatch) {
    const SampleSet s(2, {0.0, 0.0, 1.0, 1.0}, {1.0, 2.0});
    EXPECT_THROW(nearest(s, std::vector<double>{0.5}), std::invalid_argument);
}

TEST(InCell, ClosedCells) {
    const SampleSet s(1, {0.0, 1.0}, {10.0, 20.0});
    EXPECT_TRUE(in_cell(s, 0, std::vector<double>{0.0}));
    EXPECT_TRUE(in_cell(s, 0, std::vector<double>{0.5}));
    EXPECT_TRUE(in_cell(s, 1, std::vector<double>{0.5}));
    EXPECT_FALSE(in_cell(s, 1, std::vector<double>{0.2}));
    EXPECT_THROW(in_cell(s, 2, std::vector<double>{0.2}), std::out_of_range);
}

TEST(InCell, EveryPointBelongsSomewhere) {
    const auto s = random_samples(2, 9, 17);
    Rng rng(18);
    for (int it = 0; it < 200; ++it) {
        const std::vector<double> x{rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5)};
        bool any = false;
        for (std::size_t i = 0; i < s.size() && !any; ++i) any = in_cell(s, i, x);
        EXPECT_TRUE(any);
    }
}

TEST(Equivalence, GridQueriesAvoidingBisector) {
    const SampleSet s(1, {0.0, 1.0}, {10.0, 20.0});
    const auto net = build_network(s);
    std::vector<double> queries(100);
    for (std::size_t i = 0; i < 100; ++i)
        queries[i] = (static_cast<double>(i) + 0.25) / 100.0;  // never 0.5
    const auto rep = check_equivalence(s, net, queries, 100);
    EXPECT_EQ(rep.total, 100u);
    EXPECT_EQ(rep.matched, 100u);
    EXPECT_EQ(rep.hard_mismatches, 0u);
    EXPECT_EQ(rep.ties, 0u);
}

TEST(Equivalence, QueryAtSamplePoint) {
    const auto s = random_samples(2, 8, 23);
    const auto net = build_network(s);
    const std::vector<double> q(s.point(3).begin(), s.point(3).end());
    const auto rep = check_equivalence(s, net, q, 1);
    EXPECT_EQ(rep.matched, 1u);
    EXPECT_FALSE(rep.queries[0].tied);
}

TEST(Equivalence, RandomHighDimensional) {
    const auto s = random_samples(3, 50, 31);
    const auto net = build_network(s);
    const auto queries = draw_uniform(AxisBox::cube(3, 0.0, 1.0), 10000, 32, kStreamQueries);
    const auto rep = check_equivalence(s, net, queries, 10000);
    EXPECT_EQ(rep.hard_mismatches, 0u);
    EXPECT_EQ(rep.matched, rep.total);
}

TEST(Equivalence, RequiresLowestIndexMode) {
    const auto s = random_samples(1, 4, 41);
    const auto paper = build_network(s, TieMode::PaperFaithful);
    const std::vector<double> q{0.5};
    EXPECT_THROW(check_equivalence(s, paper, q, 1), std::invalid_argument);
}

TEST(CellMoment, TwoPointAnalytic) {
    // Cells [0, 1/2] and [1/2, 1]; integral of squared distance to the
    // generator is 2 * (1/2)^3 / 3 = 1/12 over the unit box.
    const SampleSet s(1, {0.0, 1.0}, {10.0, 20.0});
    const auto est = estimate_cell_moment_detail(s, AxisBox::cube(1, 0.0, 1.0), 200000, 7);
    EXPECT_NEAR(est.mean, 1.0 / 12.0, 3.0 * est.std_error);
    EXPECT_GT(est.std_error, 0.0);
}

TEST(CellMoment, MidpointGridAnalytic) {
    // n cells of width h = 1/n, each contributing h^3/12.
    const auto s = midpoints_1d(10);
    const auto est = estimate_cell_moment_detail(s, AxisBox::cube(1, 0.0, 1.0), 200000, 8);
    EXPECT_NEAR(est.mean, 1.0 / (12.0 * 100.0), 3.0 * est.std_error);
}

TEST(CellMoment, SinglePointIsTheSampledDistance) {
    const SampleSet s(1, {0.0, 1.0}, {10.0, 20.0});
    const double got = estimate_cell_moment(s, AxisBox::cube(1, 0.0, 1.0), 1, 99);
    // Reproduce the single draw and its squared nearest distance.
    Rng rng(derive_seed(99, kStreamMoment, 0));
    const double x = rng.uniform(0.0, 1.0);
    const double expect = std::min(x * x, (x - 1.0) * (x - 1.0));
    EXPECT_EQ(got, expect);
}

TEST(CellMoment, DeterministicAndRefinementMonotone) {
    const AxisBox box = AxisBox::cube(2, 0.0, 1.0);
    const auto coarse = random_samples(2, 8, 51);
    EXPECT_EQ(estimate_cell_moment(coarse, box, 40000, 5),
              estimate_cell_moment(coarse, box, 40000, 5));

    // Same seed means the same MC points; adding generators can only
    // shrink each point's nearest distance.
    std::vector<double> pts(coarse.points_flat().begin(), coarse.points_flat().end());
    std::vector<double> vals = coarse.values();
    Rng rng(52);
    for (int extra = 0; extra < 8; ++extra) {
        pts.push_back(rng.uniform());
        pts.push_back(rng.uniform());
        vals.push_back(0.0);
    }
    const SampleSet fine(2, std::move(pts), std::move(vals));
    EXPECT_LE(estimate_cell_moment(fine, box, 40000, 5),
              estimate_cell_moment(coarse, box, 40000, 5));
}

TEST(CellMoment, RejectsBadInputs) {
    const SampleSet s(1, {0.0, 1.0}, {10.0, 20.0});
    EXPECT_THROW(estimate_cell_moment(s, AxisBox::cube(1, 0.0, 1.0), 0, 1), std::invalid_argument);
    EXPECT_THROW(AxisBox::cube(1, 1.0, 1.0), std::invalid_argument);  // degenerate box
    EXPECT_THROW(estimate_cell_moment(s, AxisBox::cube(2, 0.0, 1.0), 10, 1), std::invalid_argument);
}

TEST(MaxDiameter, TwoPointAnalytic) {
    // Cells are [0, 1/2] and [1/2, 1]: delta = 1/2. The estimate is a
    // lower bound converging from below.
    const SampleSet s(1, {0.0, 1.0}, {10.0, 20.0});
    const double est = estimate_max_diameter(s, AxisBox::cube(1, 0.0, 1.0), 200000, 13);
    EXPECT_LE(est, 0.5);
    EXPECT_NEAR(est, 0.5, 1e-3);
}

TEST(MaxDiameter, MidpointGridAnalytic) {
    const auto s = midpoints_1d(8);
    const double est = estimate_max_diameter(s, AxisBox::cube(1, 0.0, 1.0), 200000, 14);
    EXPECT_LE(est, 1.0 / 8.0 + 1e-12);
    EXPECT_NEAR(est, 1.0 / 8.0, 1e-3);
}

TEST(MaxDiameter, TwoSampledPointsDefinition) {
    const SampleSet s(1, {0.0, 1.0}, {10.0, 20.0});
    const double got = estimate_max_diameter(s, AxisBox::cube(1, 0.0, 1.0), 2, 77);
    Rng rng(derive_seed(77, kStreamDiameter, 0));
    const double a = rng.uniform(0.0, 1.0);
    const double b = rng.uniform(0.0, 1.0);
    const bool same_cell = (a < 0.5) == (b < 0.5);
    EXPECT_EQ(got, same_cell ? std::abs(a - b) : 0.0);
}
