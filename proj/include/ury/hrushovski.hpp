#pragma once

// Predimension arithmetic on finite hypergraphs: delta(X) = |X| - eta e(X),
// strong subsets and closures. Subset scans are exhaustive, so structures are
// capped (20 points by default).

#include "monoid.hpp"
#include "rel_structure.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ury {

namespace detail {

// Hypergraph restricted to a point set, with subsets as bitmasks over it.
struct HyperView {
    std::vector<std::string> pts;
    std::vector<std::uint32_t> edges;
    std::int64_t p = 1, q = 1;     // eta = p/q

    std::uint32_t mask(const std::vector<std::string>& xs) const
    {
        std::uint32_t m = 0;
        for (const auto& x : xs) {
            auto it = std::find(pts.begin(), pts.end(), x);
            if (it == pts.end()) throw std::invalid_argument("point " + x + " outside the ambient set");
            m |= 1u << (it - pts.begin());
        }
        return m;
    }

    std::vector<std::string> unmask(std::uint32_t m) const
    {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (m >> i & 1u) out.push_back(pts[i]);
        return out;
    }

    // q * delta(X).
    std::int64_t scaled(std::uint32_t x) const
    {
        std::int64_t e = 0;
        for (auto em : edges) e += (em & x) == em;
        return q * std::popcount(x) - p * e;
    }

    // q * delta(X) for every subset X.
    std::vector<std::int64_t> all_scaled() const
    {
        std::size_t n = pts.size();
        std::vector<std::int64_t> cnt(std::size_t{1} << n, 0);
        for (auto em : edges) ++cnt[em];
        for (std::size_t i = 0; i < n; ++i)
            for (std::uint32_t x = 0; x < cnt.size(); ++x)
                if (x >> i & 1u) cnt[x] += cnt[x ^ (1u << i)];
        for (std::uint32_t x = 0; x < cnt.size(); ++x) cnt[x] = q * std::popcount(x) - p * cnt[x];
        return cnt;
    }
};

inline std::int64_t to_i64(const Integer& v)
{
    if (v > std::numeric_limits<std::int32_t>::max() || v < std::numeric_limits<std::int32_t>::min())
        throw std::invalid_argument("eta has too large a numerator or denominator");
    return v.convert_to<std::int64_t>();
}

inline HyperView make_view(const RelStructure& h, const std::vector<std::string>& ambient, const Rational& eta,
                           std::size_t cap)
{
    if (eta <= 0) throw std::invalid_argument("eta must be positive");
    if (ambient.size() > cap || ambient.size() > 30)
        throw std::invalid_argument("structure exceeds the exhaustive-scan cap of " + std::to_string(cap));
    HyperView v;
    v.pts = ambient;
    v.p = to_i64(boost::multiprecision::numerator(eta));
    v.q = to_i64(boost::multiprecision::denominator(eta));
    for (const auto& e : hyperedges(h)) {
        std::uint32_t m = 0;
        bool inside = true;
        for (auto i : e) {
            auto it = std::find(ambient.begin(), ambient.end(), h.points()[i]);
            if (it == ambient.end()) {
                inside = false;
                break;
            }
            m |= 1u << (it - ambient.begin());
        }
        if (inside) v.edges.push_back(m);
    }
    return v;
}

} // namespace detail

inline Rational predimension(const RelStructure& h, const Rational& eta, const std::vector<std::string>& x)
{
    std::set<std::size_t> in;
    for (const auto& p : x) in.insert(h.index(p));
    long long e = 0;
    for (const auto& edge : hyperedges(h))
        e += std::all_of(edge.begin(), edge.end(), [&](std::size_t i) { return in.count(i) != 0; });
    return Rational(static_cast<long long>(in.size())) - eta * Rational(e);
}

inline Rational predimension(const RelStructure& h, const Rational& eta) { return predimension(h, eta, h.points()); }

// A <= B: delta(A) <= delta(B') for every A within B' within B.
inline bool is_strong(const RelStructure& h, const std::vector<std::string>& a, const std::vector<std::string>& b,
                      const Rational& eta, std::size_t cap = 20)
{
    auto v = detail::make_view(h, b, eta, cap);
    std::uint32_t am = v.mask(a);
    std::uint32_t full = static_cast<std::uint32_t>((std::uint64_t{1} << b.size()) - 1);
    std::uint32_t free = full & ~am;
    std::int64_t base = v.scaled(am);
    // Enumerate subsets of the complement.
    for (std::uint32_t s = free;; s = (s - 1) & free) {
        if (v.scaled(am | s) < base) return false;
        if (s == 0) break;
    }
    return true;
}

// Smallest strong superset of A within B: the intersection of all of them.
inline std::vector<std::string> strong_closure(const RelStructure& h, const std::vector<std::string>& a,
                                               const std::vector<std::string>& b, const Rational& eta,
                                               std::size_t cap = 20)
{
    auto v = detail::make_view(h, b, eta, cap);
    std::uint32_t am = v.mask(a);
    auto delta = v.all_scaled();
    // up[X] = min delta over supersets of X.
    auto up = delta;
    std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::uint32_t x = 0; x < up.size(); ++x)
            if (!(x >> i & 1u)) up[x] = std::min(up[x], up[x | (1u << i)]);
    std::uint32_t closure = static_cast<std::uint32_t>(up.size() - 1);
    for (std::uint32_t x = 0; x < up.size(); ++x)
        if ((x & am) == am && delta[x] == up[x]) closure &= x;
    return v.unmask(closure);
}

struct BoundCheck {
    bool ok = true;
    std::optional<std::vector<std::string>> witness;   // a subset with delta(X) < f(|X|)
};

// delta(X) >= f(|X|) for every nonempty X within h. f must cover 1..|h|.
inline BoundCheck good_bound_check(const RelStructure& h, const Rational& eta, const std::map<std::size_t, Rational>& f,
                                   std::size_t cap = 20)
{
    for (std::size_t k = 1; k <= h.size(); ++k)
        if (!f.count(k)) throw std::invalid_argument("bound table misses size " + std::to_string(k));
    auto v = detail::make_view(h, h.points(), eta, cap);
    auto delta = v.all_scaled();
    BoundCheck out;
    for (std::uint32_t x = 1; x < delta.size(); ++x) {
        Rational d = Rational(delta[x]) / Rational(v.q);
        if (d < f.at(static_cast<std::size_t>(std::popcount(x)))) {
            out.ok = false;
            out.witness = v.unmask(x);
            return out;
        }
    }
    return out;
}

// Membership condition for the class of eta-hypergraphs: delta(X) >= 0 throughout.
inline std::vector<std::string> hypergraph_violations(const RelStructure& h, const Rational& eta, std::size_t cap)
{
    std::map<std::size_t, Rational> zero;
    for (std::size_t k = 1; k <= h.size(); ++k) zero[k] = 0;
    auto r = good_bound_check(h, eta, zero, cap);
    if (r.ok) return {};
    std::string w;
    for (const auto& p : *r.witness) w += (w.empty() ? "" : ",") + p;
    return {"negative predimension on {" + w + "}"};
}

} // namespace ury
