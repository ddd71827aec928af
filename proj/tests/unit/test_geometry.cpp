#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace ury;
using namespace ury::testing;

namespace {

Distance q(long n, long d = 1) { return Distance(Rational(n, d)); }

FinSpace line3(const Monoid& m, Distance ab, Distance bc, Distance ac)
{
    return FinSpace(m, {"a", "b", "c"}, {{0, ab, ac}, {ab, 0, bc}, {ac, bc, 0}});
}

std::vector<Monoid> no_gap_kinds() { return {Monoid::rational(), Monoid::truncated(Rational(5, 2)), Monoid::lex_pair()}; }

// Strong flexibility by brute force over a grid of perturbations r' in
// [r - eps, r], instead of the single boundary value.
bool strong_grid(const Monoid& m, const Distance (&r)[3], const Distance& eps)
{
    if (!is_flexible(m, r[0], r[1], r[2], eps)) return false;
    std::size_t i = 0;
    for (std::size_t k = 1; k < 3; ++k)
        if (less(m, r[i], r[k])) i = k;
    const Distance& rj = r[(i + 1) % 3];
    const Distance& rk = r[(i + 2) % 3];
    for (int step = 0; step <= 8; ++step) {
        Distance cut = Distance(eps.x * Rational(step, 8), eps.y * Rational(step, 8));
        for (const Distance* base : {&rj, &rk}) {
            Distance pert = monus(m, *base, cut);
            const Distance& other = base == &rj ? rk : rj;
            if (less(m, oplus(m, pert, other), r[i])) return false;
        }
    }
    return true;
}

// A and C freely amalgamated over B, carved out of one random space.
struct Triple {
    FinSpace space;
    Points a, b, c;
};

// Points on a line: lots of aligned triples.
FinSpace line_space(const Monoid& m, std::size_t n, Rng& rng)
{
    std::vector<Distance> pos;
    while (pos.size() < n) {
        Distance p = random_positive(m, rng);
        if (m.bounded()) p = Distance(p.x * 2);
        if (std::find(pos.begin(), pos.end(), p) == pos.end()) pos.push_back(p);
    }
    std::vector<std::vector<Distance>> t(n, std::vector<Distance>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Distance v(pos[i].x - pos[j].x, pos[i].y - pos[j].y);
            if (v.x < 0 || (v.x == 0 && v.y < 0)) v = Distance(-v.x, -v.y);
            if (m.bounded() && v.x > m.bound) v = Distance(m.bound);
            t[i][j] = v;
        }
    return FinSpace(m, make_labels(n), t);
}

Triple independent_triple(const Monoid& m, std::size_t na, std::size_t nb, std::size_t nc, Rng& rng)
{
    auto s = rng() % 2 ? random_space(m, na + nb + nc, rng) : line_space(m, na + nb + nc, rng);
    const auto& l = s.labels();
    Points a(l.begin(), l.begin() + static_cast<long>(na));
    Points b(l.begin() + static_cast<long>(na), l.begin() + static_cast<long>(na + nb));
    Points c(l.begin() + static_cast<long>(na + nb), l.end());
    Points ab = a, bc = b;
    ab.insert(ab.end(), b.begin(), b.end());
    bc.insert(bc.end(), c.begin(), c.end());
    auto am = amalgamate(s.restrict_to(ab), s.restrict_to(bc), PartialMap::identity(b));
    return {am.space, a, b, map_tuple(am.b_map, c)};
}

} // namespace

TEST(Geometry, FlexibilityExamples)
{
    auto m = Monoid::rational();
    EXPECT_TRUE(is_flexible(m, q(1), q(1), q(1), q(1)));
    EXPECT_FALSE(is_flexible(m, q(2), q(1), q(1), q(1, 2)));
    EXPECT_TRUE(is_flexible(m, q(2), q(2), q(1), q(1)));
    EXPECT_TRUE(is_strongly_flexible(m, q(1), q(1), q(1), q(1, 2)));
    EXPECT_FALSE(is_strongly_flexible(m, q(2), q(1), q(1), q(1, 2)));
    EXPECT_EQ(is_strongly_flexible(m, q(2), q(1), q(1), q(0)), is_triangular(m, q(2), q(1), q(1)));
    EXPECT_EQ(is_strongly_flexible(m, q(3), q(1), q(1), q(0)), is_triangular(m, q(3), q(1), q(1)));
    EXPECT_THROW(is_strongly_flexible(Monoid::integer(), q(1), q(1), q(1), q(0)), std::invalid_argument);
}

TEST(Geometry, StrongFlexibilityMatchesPerturbationGrid)
{
    Rng rng(11);
    for (const auto& m : no_gap_kinds())
        for (int i = 0; i < 2000; ++i) {
            const Distance r[3] = {random_positive(m, rng), random_positive(m, rng), random_positive(m, rng)};
            Distance e = random_value(m, rng);
            ASSERT_EQ(is_strongly_flexible(m, r[0], r[1], r[2], e), strong_grid(m, r, e))
                << format(m, r[0]) << " " << format(m, r[1]) << " " << format(m, r[2]) << " eps " << format(m, e);
        }
}

TEST(Geometry, FlagsAreConsistentAndPermutationInvariant)
{
    Rng rng(12);
    for (const auto& m : all_kinds())
        for (int i = 0; i < 2000; ++i) {
            Distance r[3] = {random_positive(m, rng), random_positive(m, rng), random_positive(m, rng)};
            Distance e = random_value(m, rng);
            bool f = is_flexible(m, r[0], r[1], r[2], e);
            if (f) {
                ASSERT_TRUE(is_triangular(m, r[0], r[1], r[2]));
            }
            if (m.standard() && is_strongly_flexible(m, r[0], r[1], r[2], e)) {
                ASSERT_TRUE(f);
            }
            int p[3] = {0, 1, 2};
            do {
                ASSERT_EQ(is_flexible(m, r[p[0]], r[p[1]], r[p[2]], e), f);
                if (m.standard()) {
                    ASSERT_EQ(is_strongly_flexible(m, r[p[0]], r[p[1]], r[p[2]], e),
                              is_strongly_flexible(m, r[0], r[1], r[2], e));
                }
            } while (std::next_permutation(p, p + 3));
        }
}

TEST(Geometry, Alignment)
{
    auto m = Monoid::rational();
    auto s = line3(m, q(1), q(2), q(3));
    EXPECT_TRUE(is_aligned(s, "a", "b", "c"));
    EXPECT_FALSE(is_aligned(s, "a", "c", "b"));
    EXPECT_EQ(interval(s, "a", "c"), (Points{"a", "b", "c"}));
    EXPECT_FALSE(is_aligned(line3(m, q(1), q(1), q(1)), "a", "b", "c"));
    auto t = line3(Monoid::truncated(1), q(7, 10), q(6, 10), q(1));
    EXPECT_TRUE(is_aligned(t, "a", "b", "c"));
    auto rep = triple_report(s, "a", "c", "b", q(0));
    ASSERT_TRUE(rep.aligned_order.has_value());
    EXPECT_EQ(*rep.aligned_order, (std::vector<int>{1, 3, 2}));
}

TEST(Geometry, CutsExamples)
{
    auto m = Monoid::rational();
    // b is the midpoint of a segment of length 2.
    FinSpace mid(m, {"a", "a2", "b"}, {{0, 2, 1}, {2, 0, 1}, {1, 1, 0}});
    EXPECT_TRUE(cuts(mid, {"b"}, {"a", "a2"}, q(2)));
    EXPECT_FALSE(cuts(mid, {"b"}, {"a", "a2"}, q(3, 2)));
    FinSpace apex(m, {"a", "a2", "b"}, {{0, 2, 2}, {2, 0, 2}, {2, 2, 0}});
    EXPECT_FALSE(cuts(apex, {"b"}, {"a", "a2"}, q(2)));
    EXPECT_FALSE(cuts(apex, {"b"}, {"a", "a2"}, std::nullopt));
}

TEST(Geometry, EqualDistanceCopy)
{
    auto m = Monoid::rational();
    FinSpace s(m, {"a", "b"}, {{0, 2}, {2, 0}});
    auto w = equal_distance_copy(s, {"a"}, {"b"}, q(2));
    const auto& ap = w.map.at("a");
    EXPECT_EQ(w.space.d("a", ap), q(2));
    EXPECT_EQ(w.space.d(ap, "b"), q(2));
    for (const auto& [k, v] : w.checks) EXPECT_TRUE(v) << k;

    FinSpace s2(m, {"a1", "a2", "b"}, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    auto w2 = equal_distance_copy(s2, {"a1", "a2"}, {"b"}, q(2));
    for (const auto& [k, v] : w2.checks) EXPECT_TRUE(v) << k;
    EXPECT_THROW(equal_distance_copy(s2, {"a1", "a2"}, {"b"}, q(1, 2)), std::invalid_argument);
}

TEST(Geometry, DistancingChainBound)
{
    auto m = Monoid::rational();
    FinSpace s(m, {"a", "b", "c"}, {{0, 1, 1}, {1, 0, 2}, {1, 2, 0}});
    auto r = distancing_chain(s, {"a"}, {"b"}, {"c"}, 1);
    EXPECT_TRUE(leq(m, q(3), r.measured));
    for (const auto& [k, v] : r.checks) EXPECT_TRUE(v) << k;
    auto r0 = distancing_chain(s, {"a"}, {"b"}, {"c"}, 0);
    EXPECT_TRUE(leq(m, q(1), r0.measured));

    Rng rng(13);
    for (int i = 0; i < 50; ++i) {
        auto sp = random_space(m, 7, rng);
        const auto& l = sp.labels();
        auto res = distancing_chain(sp, {l[0], l[1], l[2]}, {l[3], l[4]}, {l[5], l[6]}, 3);
        for (const auto& [k, v] : res.checks) ASSERT_TRUE(v) << k;
        ASSERT_EQ(res.bound, nmul(m, 7, set_distance(sp, {l[0], l[1], l[2]}, {l[3], l[4]})));
    }
}

TEST(Geometry, SeparationCopy)
{
    auto m = Monoid::rational();
    Rng rng(14);
    for (int i = 0; i < 100; ++i) {
        auto s = random_space(m, 6, rng);
        const auto& l = s.labels();
        std::vector<std::pair<Points, Points>> pairs = {{{l[0]}, {l[1], l[2]}}, {{l[3]}, {l[4], l[5]}}};
        Distance r = dmin(m, set_distance(s, {l[0]}, {l[1], l[2]}), set_distance(s, {l[3]}, {l[4], l[5]}));
        auto res = separation_copy(s, pairs, r);
        for (const auto& [k, v] : res.checks) ASSERT_TRUE(v) << k;
    }
    FinSpace one(m, {"a", "b"}, {{0, 1}, {1, 0}});
    auto k1 = separation_copy(one, {{{"a"}, {"b"}}}, q(1));
    EXPECT_EQ(k1.c, (Points{"b"}));
    EXPECT_THROW(separation_copy(one, {{{"a"}, {"b"}}}, q(2)), std::invalid_argument);
}

TEST(Geometry, NotTightExamples)
{
    auto m = Monoid::rational();
    const Distance r[3] = {q(2), q(2), q(2)};
    const Distance e[3] = {q(1), q(1), q(0)};
    auto rep = check_not_tight(m, r, e, q(1));
    EXPECT_TRUE(rep.hypotheses);
    EXPECT_TRUE(rep.conclusion);
    EXPECT_TRUE(is_strongly_flexible(m, q(3), q(3), q(2), q(1)));
    const Distance big[3] = {q(3, 2), q(0), q(0)};
    EXPECT_FALSE(check_not_tight(m, r, big, q(0)).hypotheses);
    const Distance z[3] = {q(0), q(0), q(0)};
    EXPECT_TRUE(check_not_tight(m, r, z, q(0)).hypotheses);
}

TEST(Geometry, NotTightConclusionOnGrid)
{
    auto m = Monoid::rational();
    std::vector<Distance> rs, es;
    for (int k = 2; k <= 12; ++k) rs.push_back(q(k, 4));
    for (int k = 0; k <= 4; ++k) es.push_back(q(k, 4));
    int hits = 0;
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = i; j < rs.size(); ++j)
            for (std::size_t k = j; k < rs.size(); ++k)
                for (const auto& e1 : es)
                    for (const auto& e2 : es)
                        for (const auto& e3 : es)
                            for (const auto& d : es) {
                                const Distance r[3] = {rs[i], rs[j], rs[k]};
                                const Distance e[3] = {e1, e2, e3};
                                auto rep = check_not_tight(m, r, e, d);
                                if (!rep.hypotheses) continue;
                                ++hits;
                                ASSERT_TRUE(rep.conclusion);
                            }
    EXPECT_GT(hits, 1000);
}

TEST(Geometry, GeneralPositionCopy)
{
    auto m = Monoid::rational();
    FinSpace s(m, {"a1", "a2", "b"}, {{0, 1, 5}, {1, 0, 5}, {5, 5, 0}});
    auto w = general_position_copy(s, {"a1", "a2"}, {"b"});
    for (const auto& [k, v] : w.checks) EXPECT_TRUE(v) << k;
    auto w1 = general_position_copy(s, {"a1"}, {"b"});
    EXPECT_TRUE(w1.checks.at("valid"));

    FinSpace cut(m, {"a1", "a2", "b"}, {{0, 2, 1}, {2, 0, 1}, {1, 1, 0}});
    EXPECT_THROW(general_position_copy(cut, {"a1", "a2"}, {"b"}), std::invalid_argument);

    Rng rng(15);
    int built = 0;
    for (const auto& mk : no_gap_kinds())
        for (int i = 0; i < 120; ++i) {
            auto sp = random_space(mk, 5, rng);
            const auto& l = sp.labels();
            Points a = {l[0], l[1], l[2]}, b = {l[3], l[4]};
            if (cuts(sp, b, a, std::nullopt)) continue;
            auto res = general_position_copy(sp, a, b);
            for (const auto& [k, v] : res.checks) ASSERT_TRUE(v) << k;
            ++built;
        }
    EXPECT_GT(built, 50);
}

TEST(Geometry, NonCuttingCopy)
{
    Rng rng(16);
    int built = 0;
    for (const auto& m : no_gap_kinds())
        for (int i = 0; i < 400; ++i) {
            auto sp = random_space(m, 5, rng);
            const auto& l = sp.labels();
            Points a = {l[0], l[1], l[2]}, b = {l[3], l[4]};
            Distance r = random_positive(m, rng);
            // At the truncation bound every clamped sum is "aligned"; see
            // TruncatedBoundBreaksCutting.
            if (m.bounded() && !less(m, oplus(m, r, r), Distance(m.bound))) continue;
            if (cuts(sp, b, a, r)) {
                EXPECT_THROW(non_cutting_copy(sp, a, b, r), std::invalid_argument);
                continue;
            }
            auto res = non_cutting_copy(sp, a, b, r);
            for (const auto& [k, v] : res.checks) ASSERT_TRUE(v) << k;
            ++built;
        }
    EXPECT_GT(built, 100);
}

TEST(Geometry, IndependenceCuttingProperty)
{
    Rng rng(17);
    int cutting = 0;
    for (const auto& m : no_gap_kinds())
        for (int i = 0; i < 1000; ++i) {
            auto t = independent_triple(m, 2, 3, 2, rng);
            ASSERT_TRUE(is_valid(t.space));
            ASSERT_TRUE(is_free_independent(t.space, t.a, t.c, t.b));
            // The pair distance inside C half the time, so cuts are common.
            Distance r = rng() % 2 ? t.space.d(t.c[0], t.c[1]) : random_positive(m, rng);
            if (m.bounded() && !less(m, r, Distance(m.bound))) continue;
            if (!cuts(t.space, t.a, t.c, r)) continue;
            ++cutting;
            for (int mask = 0; mask < 8; ++mask) {
                Points b1, b2;
                for (std::size_t k = 0; k < t.b.size(); ++k) (mask >> k & 1 ? b1 : b2).push_back(t.b[k]);
                ASSERT_TRUE(cuts(t.space, b1, t.c, r) || cuts(t.space, t.a, b2, r));
            }
        }
    EXPECT_GT(cutting, 50);
}

// With the clamped sum, a point at distance b from both ends of a pair at
// distance b lies in their interval, so cuts at scale b are not controlled.
TEST(Geometry, TruncatedBoundBreaksCutting)
{
    auto m = Monoid::truncated(Rational(5, 2));
    FinSpace s(m, {"a1", "a2", "b"}, {{0, q(5, 2), q(5, 4)}, {q(5, 2), 0, q(5, 4)}, {q(5, 4), q(5, 4), 0}});
    auto w = non_cutting_copy(s, {"a1", "a2"}, {"b"}, q(1));
    EXPECT_FALSE(cuts(s, {"b"}, {"a1", "a2"}, q(1)));
    EXPECT_TRUE(w.checks.at("valid"));
    EXPECT_TRUE(w.checks.at("copy_over_B"));
    // r + r = 2 stays below the bound here, so the conclusion survives.
    EXPECT_TRUE(w.checks.at("not_2r_cut"));

    FinSpace c(m, {"x", "y", "z"}, {{0, q(5, 2), q(3, 2)}, {q(5, 2), 0, q(5, 2)}, {q(3, 2), q(5, 2), 0}});
    EXPECT_TRUE(is_aligned(c, "x", "z", "y"));
    EXPECT_TRUE(is_aligned(c, "y", "x", "z"));
}

// A together with a perturbed copy A' (conjugates within eps), and B seeing
// A' exactly as it sees A. Only the A u A' part is sampled.
TEST(Geometry, SmallDisturbanceProperty)
{
    Rng rng(18);
    int checked = 0;
    for (const auto& m : no_gap_kinds())
        for (int i = 0; i < 3000; ++i) {
            auto s = random_space(m, 5, rng);
            const auto& l = s.labels();
            Points a = {l[0], l[1], l[2]}, b = {l[3], l[4]};
            Distance eps = random_positive(m, rng);
            for (int h = rng() % 4; h > 0; --h) eps = half(m, eps);
            if (!in_general_position(s, b, a, eps)) continue;
            // Conjugate pairs need eps <= 2 d(A,B); general position over
            // distinct pairs alone does not give it.
            Distance dab = set_distance(s, a, b);
            if (less(m, oplus(m, dab, dab), eps)) continue;

            Points labels = a;
            for (const auto& p : a) labels.push_back(p + "'");
            labels.insert(labels.end(), b.begin(), b.end());
            std::size_t n = labels.size();
            std::vector<std::vector<Distance>> t(n, std::vector<Distance>(n));
            auto orig = [&](std::size_t k) { return k < 3 ? a[k] : k < 6 ? a[k - 3] : b[k - 6]; };
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y) t[x][y] = s.d(orig(x), orig(y));
            for (std::size_t x = 0; x < 3; ++x)
                for (std::size_t y = 0; y < 3; ++y) {
                    // d(a_x, a_y') somewhere in [d - eps, d + eps], eps on the diagonal.
                    Distance v = x == y ? eps : s.d(a[x], a[y]);
                    if (x != y) {
                        int pick = static_cast<int>(rng() % 3);
                        if (pick == 1) v = oplus(m, v, eps);
                        if (pick == 2) v = monus(m, v, half(m, eps));
                    }
                    t[x][y + 3] = t[y + 3][x] = v;
                }
            FinSpace two(m, Points(labels.begin(), labels.begin() + 6),
                         [&] {
                             std::vector<std::vector<Distance>> u(6, std::vector<Distance>(6));
                             for (std::size_t x = 0; x < 6; ++x)
                                 for (std::size_t y = 0; y < 6; ++y) u[x][y] = t[x][y];
                             return u;
                         }());
            if (!is_valid(two)) continue;
            ++checked;
            FinSpace full(m, labels, t);
            ASSERT_TRUE(is_valid(full)) << "eps " << format(m, eps);
        }
    EXPECT_GT(checked, 50);
}

TEST(Geometry, LambdaHelpers)
{
    auto m = Monoid::rational();
    Rng rng(19);
    for (int i = 0; i < 200; ++i) {
        auto s = random_space(m, 4, rng);
        const auto& l = s.labels();
        PartialMap id = PartialMap::identity(l);
        EXPECT_EQ(lambda(s, l[0], l[1], l[2], id), oplus(m, s.d(l[0], l[1]), s.d(l[1], l[2])));
        PartialMap g;
        g.add(l[3], l[2]);
        EXPECT_EQ(lambda(s, l[0], l[0], l[2], g), s.d(l[0], l[3]));
        EXPECT_EQ(lambda(s, l[0], l[1], l[2], g), oplus(m, s.d(l[0], l[1]), s.d(l[1], l[3])));
        EXPECT_TRUE(lambda_bounds_distance(s, l[0], l[1], l[2], g));
        EXPECT_TRUE(lambda_neighbourhood_implication(s, l[0], l[1], l[2], g));
    }
    FinSpace s(m, {"x", "z"}, {{0, 1}, {1, 0}});
    EXPECT_THROW(lambda(s, "x", "x", "z", PartialMap()), std::invalid_argument);
}
