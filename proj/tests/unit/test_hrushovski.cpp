#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <bit>

using namespace ury;
using namespace ury::testing;

namespace {

using Mask = std::uint32_t;

// delta for every subset of the points, counted straight from the tuples.
std::vector<Rational> delta_table(const RelStructure& h, const Rational& eta)
{
    const auto& pts = h.points();
    std::size_t n = pts.size();
    std::set<Mask> edges;
    for (const auto& t : h.tuples("R")) {
        Mask e = 0;
        for (const auto& p : t) e |= Mask{1} << (std::find(pts.begin(), pts.end(), p) - pts.begin());
        edges.insert(e);
    }
    std::vector<Rational> out(std::size_t{1} << n);
    for (Mask x = 0; x < out.size(); ++x) {
        long k = 0;
        for (Mask e : edges) k += (e & x) == e;
        out[x] = Rational(std::popcount(x)) - eta * Rational(k);
    }
    return out;
}

bool strong_oracle(const std::vector<Rational>& d, Mask a, Mask b)
{
    for (Mask y = b;; y = (y - 1) & b) {
        if ((y & a) == a && d[y] < d[a]) return false;
        if (y == 0) break;
    }
    return true;
}

std::vector<std::string> unmask(const RelStructure& h, Mask x)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (x >> i & 1u) out.push_back(h.points()[i]);
    return out;
}

RelStructure triangle()
{
    RelStructure g({{"R", 2}});
    for (auto p : {"u", "v", "w"}) g.add_point(p);
    for (auto [a, b] : {std::pair{"u", "v"}, {"v", "w"}, {"u", "w"}}) {
        g.add_tuple("R", {a, b});
        g.add_tuple("R", {b, a});
    }
    return g;
}

const Rational etas[] = {Rational(1), Rational(1, 2), Rational(2, 3)};

} // namespace

TEST(Hrushovski, PredimensionExamples)
{
    auto t = triangle();
    EXPECT_EQ(predimension(t, 1), 0);
    EXPECT_EQ(predimension(t, 1, {"u"}), 1);
    EXPECT_EQ(predimension(t, Rational(1, 2), {"u", "v"}), Rational(3, 2));
    EXPECT_EQ(predimension(t, 1, {}), 0);
}

TEST(Hrushovski, StrongExamples)
{
    auto t = triangle();
    auto all = t.points();
    EXPECT_TRUE(is_strong(t, {}, all, 1));
    EXPECT_FALSE(is_strong(t, {"u"}, all, 1));
    EXPECT_TRUE(is_strong(t, all, all, 1));
    EXPECT_EQ(strong_closure(t, {"u"}, all, 1), all);
    EXPECT_THROW(is_strong(t, {}, all, 1, 2), std::invalid_argument);
}

TEST(Hrushovski, BoundCheckExamples)
{
    auto t = triangle();
    std::map<std::size_t, Rational> zero = {{1, 0}, {2, 0}, {3, 0}};
    EXPECT_TRUE(good_bound_check(t, 1, zero).ok);
    EXPECT_EQ(good_bound_check(t, 1, zero).ok, is_member(ClassDescriptor::hypergraph(2, 1), t));
    auto pos = zero;
    pos[3] = Rational(1, 2);
    auto r = good_bound_check(t, 1, pos);
    EXPECT_FALSE(r.ok);
    ASSERT_TRUE(r.witness);
    EXPECT_EQ(r.witness->size(), 3u);

    RelStructure one({{"R", 2}});
    one.add_point("v");
    EXPECT_TRUE(good_bound_check(one, 1, {{1, Rational(1, 2)}}).ok);
    EXPECT_THROW(good_bound_check(t, 1, {{1, 0}}), std::invalid_argument);
}

TEST(Hrushovski, PredimensionMatchesOracle)
{
    Rng rng(31);
    for (int i = 0; i < 500; ++i) {
        int s = 2 + static_cast<int>(rng() % 2);
        auto h = random_hypergraph(3 + rng() % 4, s, 0.4, rng);
        const auto& eta = etas[rng() % 3];
        auto d = delta_table(h, eta);
        for (Mask x = 0; x < d.size(); ++x) ASSERT_EQ(predimension(h, eta, unmask(h, x)), d[x]);
    }
}

TEST(Hrushovski, Submodularity)
{
    Rng rng(32);
    for (int i = 0; i < 10000; ++i) {
        int s = 2 + static_cast<int>(rng() % 2);
        auto h = random_hypergraph(4 + rng() % 4, s, 0.3, rng);
        const auto& eta = etas[rng() % 3];
        auto a = random_subset(h.points(), rng), b = random_subset(h.points(), rng);
        std::vector<std::string> un, in;
        for (const auto& p : h.points()) {
            bool ia = std::find(a.begin(), a.end(), p) != a.end();
            bool ib = std::find(b.begin(), b.end(), p) != b.end();
            if (ia || ib) un.push_back(p);
            if (ia && ib) in.push_back(p);
        }
        ASSERT_LE(predimension(h, eta, un),
                  predimension(h, eta, a) + predimension(h, eta, b) - predimension(h, eta, in));
    }
}

// A <= B and X within B give A n X <= X, over every A and X; the library's
// is_strong is compared with the oracle on the way.
TEST(Hrushovski, StrongIntersectsDownExhaustive)
{
    Rng rng(33);
    int pairs = 0;
    for (std::size_t n = 3; n <= 8; ++n)
        for (int rep = 0; rep < 3; ++rep) {
            int s = 2 + static_cast<int>(rng() % 2);
            auto h = random_hypergraph(n, s, 0.35, rng);
            const auto& eta = etas[rng() % 3];
            auto d = delta_table(h, eta);
            Mask full = static_cast<Mask>(d.size() - 1);
            for (Mask a = 0; a <= full; ++a) {
                bool sa = strong_oracle(d, a, full);
                if (n <= 6) {
                    ASSERT_EQ(is_strong(h, unmask(h, a), h.points(), eta), sa);
                }
                if (!sa) continue;
                for (Mask x = 0; x <= full; ++x) {
                    ++pairs;
                    ASSERT_TRUE(strong_oracle(d, a & x, x));
                    if (n <= 5) {
                        ASSERT_TRUE(is_strong(h, unmask(h, a & x), unmask(h, x), eta));
                    }
                }
            }
        }
    EXPECT_GT(pairs, 1000);
}

TEST(Hrushovski, StrongIsTransitiveExhaustive)
{
    Rng rng(34);
    for (std::size_t n = 3; n <= 8; ++n)
        for (int rep = 0; rep < 3; ++rep) {
            auto h = random_hypergraph(n, 2 + static_cast<int>(rng() % 2), 0.35, rng);
            const auto& eta = etas[rng() % 3];
            auto d = delta_table(h, eta);
            Mask full = static_cast<Mask>(d.size() - 1);
            for (Mask b = 0; b <= full; ++b) {
                if (!strong_oracle(d, b, full)) continue;
                for (Mask a = b;; a = (a - 1) & b) {
                    if (strong_oracle(d, a, b)) {
                        ASSERT_TRUE(strong_oracle(d, a, full));
                    }
                    if (n <= 5 && strong_oracle(d, a, b)) {
                        ASSERT_TRUE(is_strong(h, unmask(h, a), h.points(), eta));
                    }
                    if (a == 0) break;
                }
            }
        }
}

TEST(Hrushovski, ClosureIsTheLeastStrongSuperset)
{
    Rng rng(35);
    for (int i = 0; i < 200; ++i) {
        auto h = random_hypergraph(3 + rng() % 5, 2 + static_cast<int>(rng() % 2), 0.4, rng);
        const auto& eta = etas[rng() % 3];
        auto d = delta_table(h, eta);
        Mask full = static_cast<Mask>(d.size() - 1);
        Mask a = static_cast<Mask>(rng() % (full + 1));
        auto cl = strong_closure(h, unmask(h, a), h.points(), eta);
        Mask c = 0;
        for (const auto& p : cl) c |= Mask{1} << (std::find(h.points().begin(), h.points().end(), p) - h.points().begin());
        ASSERT_EQ(c & a, a);
        ASSERT_TRUE(strong_oracle(d, c, full));
        for (Mask y = 0; y <= full; ++y)
            if ((y & a) == a && strong_oracle(d, y, full)) {
                ASSERT_EQ(y & c, c);
            }
    }
}
