#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <optional>

using namespace ury;
using namespace ury::testing;

namespace {

FinSpace triangle(const Monoid& m, Distance ab, Distance bc, Distance ac)
{
    return FinSpace(m, {"a", "b", "c"}, {{0, ab, ac}, {ab, 0, bc}, {ac, bc, 0}});
}

// Shortest paths through the disjoint union with only the two given tables
// as edges. Cross pairs with no path stay empty (the bounded kind uses b).
std::vector<std::vector<std::optional<Distance>>> union_closure(const Monoid& m, const FinSpace& a, const FinSpace& b,
                                                                 const std::vector<std::string>& labels)
{
    std::size_t n = labels.size();
    std::vector<std::vector<std::optional<Distance>>> t(n, std::vector<std::optional<Distance>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) t[i][j] = Distance();
            for (const FinSpace* s : {&a, &b})
                if (s->has(labels[i]) && s->has(labels[j])) t[i][j] = s->d(labels[i], labels[j]);
        }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (t[i][k] && t[k][j]) {
                    Distance via = oplus(m, *t[i][k], *t[k][j]);
                    if (!t[i][j] || less(m, via, *t[i][j])) t[i][j] = via;
                }
    return t;
}

} // namespace

TEST(FinSpace, ValidateReportsTheTriangleViolation)
{
    auto s = triangle(Monoid::rational(), 1, 1, 3);
    auto vs = validate(s);
    ASSERT_EQ(vs.size(), 1u);
    EXPECT_EQ(vs[0].kind, Violation::Kind::triangle);
    EXPECT_EQ(vs[0].x + vs[0].y + vs[0].z, "abc");
}

TEST(FinSpace, ValidateFindsZeroAndAsymmetry)
{
    auto m = Monoid::rational();
    FinSpace zero(m, {"a", "b"}, {{0, 0}, {0, 0}});
    EXPECT_EQ(validate(zero).at(0).kind, Violation::Kind::zero_distance);
    FinSpace asym(m, {"a", "b"}, {{0, 1}, {2, 0}});
    EXPECT_EQ(validate(asym).at(0).kind, Violation::Kind::asymmetric);
    EXPECT_TRUE(is_valid(triangle(m, 1, 1, 2)));
}

TEST(FinSpace, TruncatedTriangleUsesClampedSum)
{
    auto m = Monoid::truncated(2);
    // 2 <= min(1 + 1, 2) holds; in the unbounded kind 3 would fail.
    EXPECT_TRUE(is_valid(triangle(m, 1, 1, 2)));
}

TEST(FinSpace, AmalgamDistanceIsTheMinOverTheCommonPart)
{
    auto m = Monoid::rational();
    FinSpace a(m, {"p", "q"}, {{0, 2}, {2, 0}});
    FinSpace b(m, {"p", "r"}, {{0, Distance(Rational(3, 2))}, {Distance(Rational(3, 2)), 0}});
    auto am = amalgamate(a, b, PartialMap::identity({"p"}));
    EXPECT_EQ(am.space.d("q", "r"), Distance(Rational(7, 2)));
    EXPECT_TRUE(is_valid(am.space));
}

TEST(FinSpace, AmalgamRejectsBadGlue)
{
    auto m = Monoid::rational();
    FinSpace a(m, {"p", "q"}, {{0, 2}, {2, 0}});
    FinSpace b(m, {"p", "q"}, {{0, 1}, {1, 0}});
    PartialMap glue;
    glue.add("p", "p");
    glue.add("q", "q");
    EXPECT_THROW(amalgamate(a, b, glue), std::invalid_argument);
    EXPECT_THROW(amalgamate(a, b, PartialMap{}), std::invalid_argument);
}

TEST(FinSpace, AmalgamRelabelsClashes)
{
    auto m = Monoid::rational();
    FinSpace a(m, {"p", "x"}, {{0, 1}, {1, 0}});
    FinSpace b(m, {"p", "x"}, {{0, 1}, {1, 0}});
    auto am = amalgamate(a, b, PartialMap::identity({"p"}));
    ASSERT_EQ(am.space.size(), 3u);
    EXPECT_NE(am.b_map.at("x"), "x");
    EXPECT_EQ(am.space.d("x", am.b_map.at("x")), Distance(2));
}

TEST(FinSpace, KatetovChecksAndExtension)
{
    auto m = Monoid::rational();
    FinSpace s(m, {"a", "b"}, {{0, 2}, {2, 0}});
    EXPECT_TRUE(katetov_valid(s, {{"a", "b"}, {1, 1}}).empty());
    EXPECT_FALSE(katetov_valid(s, {{"a", "b"}, {1, 4}}).empty());
    auto t = extend_one_point(s, {{"a", "b"}, {1, 1}}, "m");
    EXPECT_TRUE(is_valid(t));
    EXPECT_EQ(t.d("m", "a"), Distance(1));
}

TEST(FinSpace, IndependentCopyIsIsometricOverTheFixedSet)
{
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        Monoid m = monoid_of(i);
        auto s = random_space(m, 5, rng);
        auto cp = independent_copy(s, {"x0", "x1"}, {"x2", "x3"});
        EXPECT_TRUE(is_valid(cp.space));
        auto x = std::vector<std::string>{"x0", "x1", "x2", "x3"};
        auto y = map_tuple(cp.map, {"x0", "x1"});
        y.push_back("x2");
        y.push_back("x3");
        EXPECT_TRUE(tuples_isometric(cp.space, x, y));
        EXPECT_TRUE(is_free_independent(cp.space, {"x0", "x1"}, map_tuple(cp.map, {"x0", "x1"}), {"x2", "x3"}));
    }
}

// Property: amalgams of random overlapping pieces validate, agree with the
// shortest-path oracle, restrict back to both inputs and are free.
TEST(FinSpaceProperty, AmalgamationValidity)
{
    Rng rng(17);
    for (int i = 0; i < 10000; ++i) {
        Monoid m = monoid_of(i);
        std::size_t n = 2 + rng() % 6;
        auto u = random_space(m, n, rng);
        std::vector<std::string> a_pts, b_pts, common;
        for (const auto& l : u.labels()) {
            int r = static_cast<int>(rng() % 3);
            if (r != 1) a_pts.push_back(l);
            if (r != 0) b_pts.push_back(l);
            if (r == 2) common.push_back(l);
        }
        if (common.empty()) {
            common.push_back(u.label(0));
            if (std::find(a_pts.begin(), a_pts.end(), u.label(0)) == a_pts.end()) a_pts.push_back(u.label(0));
            if (std::find(b_pts.begin(), b_pts.end(), u.label(0)) == b_pts.end()) b_pts.push_back(u.label(0));
        }
        FinSpace a = u.restrict_to(a_pts), b = u.restrict_to(b_pts);
        auto am = amalgamate(a, b, PartialMap::identity(common));
        ASSERT_TRUE(is_valid(am.space));
        ASSERT_EQ(am.space.restrict_to(a_pts), a);
        std::vector<std::string> b_img;
        for (const auto& l : b_pts) b_img.push_back(am.b_map.at(l));
        FinSpace back = am.space.restrict_to(b_img);
        for (std::size_t x = 0; x < b_pts.size(); ++x)
            for (std::size_t y = 0; y < b_pts.size(); ++y) ASSERT_EQ(back.d(x, y), b.d(x, y));
        auto t = union_closure(m, a, b, am.space.labels());
        for (std::size_t x = 0; x < am.space.size(); ++x)
            for (std::size_t y = 0; y < am.space.size(); ++y) ASSERT_EQ(am.space.d(x, y), *t[x][y]);
        ASSERT_TRUE(is_free_independent(am.space, a_pts, b_img, common));

        // Swapping the roles gives the same space up to relabelling.
        auto am2 = amalgamate(b, a, PartialMap::identity(common));
        for (const auto& p : a_pts)
            for (const auto& q : b_pts) {
                std::string p2 = std::find(common.begin(), common.end(), p) != common.end() ? p : am2.b_map.at(p);
                ASSERT_EQ(am.space.d(p, am.b_map.at(q)), am2.space.d(p2, q));
            }
    }
}

TEST(FinSpaceProperty, FreeIndependenceImpliesMinFormula)
{
    Rng rng(23);
    for (int i = 0; i < 2000; ++i) {
        Monoid m = monoid_of(i);
        auto s = random_space(m, 5, rng);
        std::vector<std::string> a{"x0", "x1"}, b{"x2", "x3"}, c{"x4"};
        if (!is_free_independent(s, a, b, c)) continue;
        for (const auto& x : a)
            for (const auto& y : b) EXPECT_EQ(s.d(x, y), oplus(m, s.d(x, "x4"), s.d("x4", y)));
    }
}
