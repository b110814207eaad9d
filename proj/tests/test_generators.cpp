#include "metdich/generators.hpp"
#include "metdich/io.hpp"
#include "metdich/tree_point.hpp"

#include <gtest/gtest.h>

using namespace metdich;

namespace {

void expect_metric(const MetricSpace& x) {
    EXPECT_NO_THROW(validate_metric(x.distances(), x.labels()));
}

}  // namespace

TEST(Generators, AllFamiliesAreMetrics) {
    for (int n = 1; n <= 6; ++n) {
        expect_metric(path(n));
        expect_metric(hamming_cube(n));
        expect_metric(binary_tree(n));
        expect_metric(ultrametric_host(n));
        expect_metric(snowflake_line(n, 0.5));
    }
    for (int n = 1; n <= 3; ++n)
        for (int m = 2; m <= 5; ++m) {
            expect_metric(linf_grid(n, m));
            expect_metric(torus(n, m));
        }
}

TEST(Generators, Sizes) {
    EXPECT_EQ(path(4).size(), 5);
    EXPECT_EQ(hamming_cube(3).size(), 8);
    EXPECT_EQ(linf_grid(2, 3).size(), 9);
    EXPECT_EQ(torus(2, 4).size(), 16);
    EXPECT_EQ(binary_tree(3).size(), 15);
    EXPECT_EQ(binary_tree(0).size(), 1);
    EXPECT_EQ(ultrametric_host(3).size(), 8);
}

TEST(Generators, PathDistances) {
    const auto p = path(4);
    EXPECT_DOUBLE_EQ(p(0, 4), 4.0);
    EXPECT_DOUBLE_EQ(p(3, 1), 2.0);
}

TEST(Generators, CubeIsHamming) {
    const auto c = hamming_cube(3);
    EXPECT_DOUBLE_EQ(c(0, 7), 3.0);
    EXPECT_DOUBLE_EQ(c(0b101, 0b110), 2.0);
    EXPECT_EQ(c.label(0b001), "100");
}

TEST(Generators, GridAndTorus) {
    const auto g = linf_grid(2, 4);
    EXPECT_DOUBLE_EQ(g(torus_index({0, 0}, 4), torus_index({3, 1}, 4)), 3.0);
    const auto t = torus(2, 4);
    EXPECT_DOUBLE_EQ(t(torus_index({0, 0}, 4), torus_index({3, 1}, 4)), 1.0);
    EXPECT_DOUBLE_EQ(t(torus_index({0, 0}, 4), torus_index({2, 2}, 4)), 2.0);
    EXPECT_EQ(torus_coordinates(torus_index({1, 3}, 4), 2, 4), (std::vector<int>{1, 3}));
    EXPECT_EQ(torus_index({-1, 4}, 4), torus_index({3, 0}, 4));
}

TEST(Generators, BinaryTreeOrderAndDistance) {
    const auto b = binary_tree(2);
    EXPECT_EQ(b.label(0), "e");
    EXPECT_EQ(b.label(1), "0");
    EXPECT_EQ(b.label(6), "11");
    EXPECT_DOUBLE_EQ(b(3, 6), 4.0);
    EXPECT_DOUBLE_EQ(b(0, 5), 2.0);
    for (const auto& p : tree_points(3)) EXPECT_EQ(tree_points(3)[bfs_index(p)], p);
}

TEST(Generators, UltrametricHost) {
    const auto u = ultrametric_host(3);
    EXPECT_DOUBLE_EQ(u(0b000, 0b100), 1.0);
    EXPECT_DOUBLE_EQ(u(0b000, 0b010), 0.5);
    EXPECT_DOUBLE_EQ(u(0b000, 0b001), 0.25);
    for (Index a = 0; a < u.size(); ++a)
        for (Index b = 0; b < u.size(); ++b)
            for (Index c = 0; c < u.size(); ++c) EXPECT_LE(u(a, c), std::max(u(a, b), u(b, c)));
}

TEST(Generators, SnowflakeLine) {
    const auto s = snowflake_line(8, 0.5);
    EXPECT_DOUBLE_EQ(s(0, 4), 2.0);
    EXPECT_DOUBLE_EQ(s(0, 8), std::sqrt(8.0));
}

TEST(Generators, RejectsBadParameters) {
    EXPECT_THROW(path(0), std::invalid_argument);
    EXPECT_THROW(hamming_cube(21), std::invalid_argument);
    EXPECT_THROW(hamming_cube(13), std::invalid_argument);  // past the dense cap
    EXPECT_THROW(torus(2, 1), std::invalid_argument);
    EXPECT_THROW(ultrametric_host(0), std::invalid_argument);
    EXPECT_THROW(family_kind_from_string("sphere"), std::invalid_argument);
}

TEST(Generators, FamilySpecRoundTrip) {
    FamilySpec s;
    s.kind = FamilyKind::snowflake_line;
    s.n = 6;
    s.alpha = 0.25;
    const auto back = FamilySpec::from_json(s.to_json());
    EXPECT_EQ(back.kind, s.kind);
    EXPECT_EQ(back.n, 6);
    EXPECT_DOUBLE_EQ(back.alpha, 0.25);
    EXPECT_EQ(digest(back.generate()), digest(snowflake_line(6, 0.25)));
    for (auto k : {FamilyKind::path, FamilyKind::cube, FamilyKind::linf_grid, FamilyKind::torus_index,
                   FamilyKind::binary_tree, FamilyKind::ultrametric_host, FamilyKind::snowflake_line})
        EXPECT_EQ(family_kind_from_string(to_string(k)), k);
}

TEST(Generators, Deterministic) {
    EXPECT_EQ(digest(torus(3, 4)), digest(torus(3, 4)));
    EXPECT_EQ(to_text(binary_tree(3)), to_text(binary_tree(3)));
}

TEST(Generators, SmallExamples) {
    const auto g = linf_grid(2, 2);
    for (Index a = 0; a < 4; ++a)
        for (Index b = 0; b < 4; ++b) EXPECT_EQ(g(a, b), a == b ? 0.0 : 1.0);
    const auto g3 = linf_grid(2, 3);
    EXPECT_EQ(g3(g3.find("1,1"), g3.find("3,2")), 2.0);
    EXPECT_EQ(linf_grid(1, 3).distances(), path(2).distances());
    const auto b3 = binary_tree(3);
    EXPECT_EQ(b3(b3.find("000"), b3.find("11")), 5.0);
    const auto u = ultrametric_host(2);
    EXPECT_EQ(u(u.find("00"), u.find("01")), 0.5);
    EXPECT_EQ(hamming_cube(1).distances(), path(1).distances());
    EXPECT_EQ(snowflake_line(4, 1.0).distances(), path(4).distances());
    // Strings differing only in the last coordinate pair up into unit edges.
    const auto c = hamming_cube(3);
    for (Index x = 0; x < 4; ++x) EXPECT_EQ(c(x, x | 4), 1.0);
}
