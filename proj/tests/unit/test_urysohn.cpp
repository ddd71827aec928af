#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace ury;
using namespace ury::testing;

namespace {

Distance q(long n, long d = 1) { return Distance(Rational(n, d)); }

bool map_is_isometry(const UrysohnSession& s, const PointMap& f)
{
    return s.tuples_iso(f.domain(), f.range());
}

// A seeded session with a random space embedded in it.
UrysohnSession seeded(const Monoid& m, std::uint64_t seed, std::size_t n)
{
    UrysohnSession s(m, seed);
    Rng rng(seed);
    s.embed(random_space(m, n, rng));
    return s;
}

} // namespace

TEST(Urysohn, NewSessionIsEmpty)
{
    for (const auto& m : all_kinds()) {
        auto s = new_session(m, 3);
        EXPECT_EQ(s.size(), 0u);
        EXPECT_TRUE(s.transcript().empty());
    }
}

TEST(Urysohn, RealizeChecksTheVector)
{
    auto s = new_session(Monoid::rational(), 1);
    PointId a = s.realize({}, {});
    PointId b = s.realize({a}, {q(2)});
    PointId c = s.realize({a, b}, {q(1), q(1)});
    EXPECT_EQ(s.d(a, c), q(1));
    EXPECT_EQ(s.d(b, c), q(1));
    EXPECT_THROW(s.realize({a, b}, {q(1), q(4)}), std::invalid_argument);
    EXPECT_THROW(s.realize({a}, {q(0)}), std::invalid_argument);
    // An exact match is reused, a near miss is not.
    EXPECT_EQ(s.realize({a, b}, {q(1), q(1)}), c);
    EXPECT_NE(s.realize({a, b}, {q(3, 2), q(1)}), c);
    EXPECT_TRUE(is_valid(s.space()));
}

TEST(Urysohn, GrowthPreservesEarlierDistances)
{
    Rng rng(2);
    for (const auto& m : all_kinds()) {
        UrysohnSession s(m, 5);
        s.embed(random_space(m, 4, rng));
        for (int round = 0; round < 8; ++round) {
            FinSpace before = s.space();
            auto g = generic_automorphism(s, 100 + round);
            g.advance(3);
            s.embed(random_space(m, 3, rng));
            ASSERT_TRUE(is_valid(s.space()));
            for (std::size_t i = 0; i < before.size(); ++i)
                for (std::size_t j = 0; j < before.size(); ++j) ASSERT_EQ(s.d(i, j), before.d(i, j));
        }
    }
}

TEST(Urysohn, EveryRandomSpaceEmbeds)
{
    Rng rng(3);
    for (const auto& m : all_kinds()) {
        UrysohnSession s(m, 7);
        for (int i = 0; i < 100; ++i) {
            auto x = random_space(m, 1 + rng() % 6, rng);
            auto img = s.embed(x);
            for (std::size_t a = 0; a < x.size(); ++a)
                for (std::size_t b = 0; b < x.size(); ++b) ASSERT_EQ(s.d(img[a], img[b]), x.d(a, b));
        }
        EXPECT_TRUE(is_valid(s.space()));
    }
}

TEST(Urysohn, ExtendIsometryExamples)
{
    auto s = new_session(Monoid::rational(), 1);
    s.embed(FinSpace(Monoid::rational(), {"b1", "b2", "x"}, {{0, 1, 1}, {1, 0, 2}, {1, 2, 0}}));
    EXPECT_EQ(s.extend_isometry(PointMap(), 2).at(2), 2u);
    auto p = s.extend_isometry(PointMap::identity(Tuple{0, 1}), 2);
    EXPECT_EQ(s.d(p.at(2), 0), q(1));
    EXPECT_EQ(s.d(p.at(2), 1), q(2));
    auto back = s.extend_isometry_back(PointMap::identity(Tuple{0, 1}), 2);
    EXPECT_EQ(back.preimage(2), std::optional<PointId>(2));
}

// Partial isometries between small subsets extend over the whole session,
// forwards and backwards.
TEST(Urysohn, SmallPartialIsometriesExtend)
{
    Rng rng(4);
    for (const auto& m : all_kinds())
        for (int i = 0; i < 40; ++i) {
            auto s = seeded(m, 10 + i, 5);
            auto g = generic_automorphism(s, 20 + i);
            Tuple x;
            for (PointId p = 0; p < 5; ++p)
                if (x.size() < 4 && rng() % 2) x.push_back(p);
            PointMap f;
            for (PointId p : x) f.add(p, g.apply(p));
            ASSERT_TRUE(map_is_isometry(s, f));
            std::size_t n = s.size();
            for (PointId p = 0; p < n; ++p) {
                f = s.extend_isometry(f, p);
                ASSERT_TRUE(map_is_isometry(s, f));
                f = s.extend_isometry_back(f, p);
                ASSERT_TRUE(map_is_isometry(s, f));
            }
            for (PointId p = 0; p < n; ++p) {
                ASSERT_TRUE(f.in_domain(p));
                ASSERT_TRUE(f.in_range(p));
            }
            ASSERT_TRUE(is_valid(s.space()));
        }
}

TEST(Urysohn, GenericAutomorphismPolicies)
{
    auto s = seeded(Monoid::rational(), 1, 4);
    auto id = generic_automorphism(s, 1, Policy::identity);
    for (PointId p = 0; p < 4; ++p) EXPECT_EQ(id.apply(p, 4), p);

    auto g = generic_automorphism(s, 2);
    PointId y = g.apply(0);
    EXPECT_NE(y, 0u);
    EXPECT_TRUE(map_is_isometry(s, g.map()));

    // Earlier answers survive deeper queries.
    std::vector<PointId> first;
    for (PointId p = 0; p < 4; ++p) first.push_back(g.apply(p, 2));
    for (PointId p = 0; p < 4; ++p) EXPECT_EQ(g.apply(p, 8), first[p]);
    for (PointId p = 0; p < 4; ++p) EXPECT_EQ(g.apply_inverse(first[p]), p);
    EXPECT_TRUE(map_is_isometry(s, g.map()));
}

TEST(Urysohn, CompositionOfLazyIsometries)
{
    for (const auto& m : all_kinds())
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto s = seeded(m, seed, 4);
            auto g = generic_automorphism(s, seed + 1);
            auto h = generic_automorphism(s, seed + 2);
            Tuple x = {0, 1, 2, 3};
            Tuple gh, hg;
            for (PointId p : x) gh.push_back(g.apply(h.apply(p)));
            for (PointId p : x) hg.push_back(h.apply(g.apply(p)));
            ASSERT_TRUE(s.tuples_iso(x, gh));
            ASSERT_TRUE(s.tuples_iso(x, hg));
            for (std::size_t i = 0; i < x.size(); ++i) ASSERT_EQ(h.apply_inverse(g.apply_inverse(gh[i])), x[i]);
        }
}

TEST(Urysohn, SameSeedSameTranscript)
{
    auto run = [](std::uint64_t seed) {
        auto s = seeded(Monoid::lex_pair(), seed, 5);
        auto g = generic_automorphism(s, seed);
        g.advance(6);
        return s;
    };
    auto a = run(9), b = run(9);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) ASSERT_EQ(a.d(i, j), b.d(i, j));
    ASSERT_EQ(a.transcript().size(), b.transcript().size());
}

TEST(Urysohn, ReplayReproducesAndDetectsTampering)
{
    for (const auto& m : all_kinds()) {
        auto s = seeded(m, 6, 5);
        auto g = generic_automorphism(s, 6);
        g.advance(5);
        auto r = UrysohnSession::replay(m, 6, s.transcript());
        ASSERT_EQ(r.size(), s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < s.size(); ++j) ASSERT_EQ(r.d(i, j), s.d(i, j));

        auto events = s.transcript();
        for (auto& e : events)
            if (e.op == SessionEvent::Op::realize && e.base.size() >= 2) {
                e.result += 1;
                break;
            }
        EXPECT_THROW(UrysohnSession::replay(m, 6, events), std::runtime_error);
    }
}
