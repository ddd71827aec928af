#pragma once

// Seeded generators shared by the unit, property and acceptance tests.

#include "ury/ury.hpp"

#include <random>
#include <string>
#include <vector>

namespace ury::testing {

using Rng = std::mt19937_64;

inline Monoid monoid_of(int i)
{
    switch (i % 5) {
    case 0: return Monoid::rational();
    case 1: return Monoid::truncated(Rational(5, 2));
    case 2: return Monoid::integer();
    case 3: return Monoid::lex_pair();
    default: return Monoid::quad_ext(2);
    }
}

inline std::vector<Monoid> all_kinds()
{
    std::vector<Monoid> out;
    for (int i = 0; i < 5; ++i) out.push_back(monoid_of(i));
    return out;
}

inline Distance random_positive(const Monoid& m, Rng& rng)
{
    auto q = [&](long lo, long hi, long den) { return Rational(lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)), den); };
    switch (m.kind) {
    case Kind::rational: return Distance(q(1, 12, 4));
    case Kind::rational_truncated: {
        Rational v = q(1, 12, 4);
        return Distance(v > m.bound ? m.bound : v);
    }
    case Kind::integer: return Distance(q(1, 6, 1));
    case Kind::lex_pair:
        if (rng() % 3 == 0) return Distance(Rational(0), q(1, 6, 2));
        return Distance(q(1, 4, 2), q(-4, 4, 2));
    case Kind::quad_ext:
        if (rng() % 2) return Distance(q(0, 4, 2), q(1, 3, 2));
        return Distance(q(1, 6, 2), Rational(0));
    }
    return Distance(1);
}

// Any element, zero included with small probability.
inline Distance random_value(const Monoid& m, Rng& rng)
{
    if (rng() % 8 == 0) return Distance();
    return random_positive(m, rng);
}

inline std::vector<std::string> make_labels(std::size_t n, const std::string& prefix = "x")
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// Shortest-path closure of random positive edge weights: always a metric.
inline FinSpace random_space(const Monoid& m, std::size_t n, Rng& rng, const std::string& prefix = "x")
{
    std::vector<std::vector<Distance>> t(n, std::vector<Distance>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) t[i][j] = t[j][i] = random_positive(m, rng);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                Distance via = oplus(m, t[i][k], t[k][j]);
                if (less(m, via, t[i][j])) t[i][j] = via;
            }
    return FinSpace(m, make_labels(n, prefix), t);
}

// A random s-uniform hypergraph on n points, edges stored symmetrized.
inline RelStructure random_hypergraph(std::size_t n, int s, double p, Rng& rng)
{
    RelStructure h({{"R", s}});
    auto pts = make_labels(n, "v");
    for (const auto& x : pts) h.add_point(x);
    std::vector<std::size_t> idx(static_cast<std::size_t>(s));
    std::uniform_real_distribution<double> u(0, 1);
    auto rec = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
        if (depth == idx.size()) {
            if (u(rng) < p) {
                RelTuple t;
                for (auto i : idx) t.push_back(pts[i]);
                h.add_tuple("R", t);
            }
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            idx[depth] = i;
            self(self, i + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
    h.symmetrize("R");
    return h;
}

inline RelStructure random_graph(std::size_t n, double p, Rng& rng, const std::string& prefix = "v")
{
    RelStructure g = graph_structure();
    auto pts = make_labels(n, prefix);
    for (const auto& x : pts) g.add_point(x);
    std::uniform_real_distribution<double> u(0, 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (u(rng) < p) g.add_tuple("E", {pts[i], pts[j]});
    g.symmetrize("E");
    return g;
}

// A random word with `len` letters over x and the given parameter names.
inline GroupWord random_word(std::size_t len, const std::vector<std::string>& params, Rng& rng)
{
    std::vector<Letter> letters;
    for (std::size_t i = 0; i < len; ++i) {
        int e = rng() % 2 ? 1 : -1;
        std::size_t k = rng() % (params.size() + 1);
        if (k == params.size())
            letters.push_back({true, e, {}});
        else
            letters.push_back({false, 1, {{params[k], e}}});
    }
    return from_letters(letters);
}

// Random subset of labels as a sorted vector.
inline std::vector<std::string> random_subset(const std::vector<std::string>& pts, Rng& rng)
{
    std::vector<std::string> out;
    for (const auto& p : pts)
        if (rng() % 2) out.push_back(p);
    return out;
}

} // namespace ury::testing
