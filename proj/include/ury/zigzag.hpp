#pragma once

// Turning a zigzag chain into a product of stabilizer elements, and a bounded
// search for chains.

#include "chain.hpp"
#include "lazy.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ury {

struct Factor {
    char fixes = 'A';   // 'A' or 'B': the tuple this partial isometry fixes pointwise
    PointMap map;
};

namespace detail {

inline Tuple cat(const Tuple& x, const Tuple& y)
{
    Tuple out = x;
    out.insert(out.end(), y.begin(), y.end());
    return out;
}

inline Tuple apply_map(const PointMap& f, const Tuple& x)
{
    Tuple out;
    for (PointId p : x) out.push_back(f.at(p));
    return out;
}

inline Tuple chain_points(const ZigzagChain<PointId>& c)
{
    Tuple out;
    auto push = [&](const Tuple& t) {
        for (PointId p : t)
            if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    };
    for (const auto& a : c.as) push(a);
    for (const auto& b : c.bs) push(b);
    push(c.base_b);
    return out;
}

inline ZigzagChain<PointId> map_chain(const PointMap& f, const ZigzagChain<PointId>& c)
{
    ZigzagChain<PointId> out;
    for (const auto& a : c.as) out.as.push_back(apply_map(f, a));
    for (const auto& b : c.bs) out.bs.push_back(apply_map(f, b));
    out.base_b = c.base_b;
    return out;
}

// src[i] -> dst[i] on top of fixed pointwise.
inline PointMap seed_map(const Tuple& fixed, const Tuple& src, const Tuple& dst)
{
    PointMap f;
    for (PointId p : fixed) f.add(p, p);
    for (std::size_t i = 0; i < src.size(); ++i) f.add(src[i], dst[i]);
    return f;
}

inline bool fixes_all(const PointMap& f, const Tuple& x)
{
    for (PointId p : x) {
        auto y = f.image(p);
        if (!y || *y != p) return false;
    }
    return true;
}

} // namespace detail

// Applies the product f_1 f_2 ... f_k to x, rightmost factor first.
inline std::optional<PointId> apply_factors(const std::vector<Factor>& fs, PointId x)
{
    for (auto it = fs.rbegin(); it != fs.rend(); ++it) {
        auto y = it->map.image(x);
        if (!y) return std::nullopt;
        x = *y;
    }
    return x;
}

// Factors with g = f_1 f_2 ... f_k on A_0, alternating between the
// stabilizers of A = A_0 and B = base_b and ending in an A-fixing factor.
// g is given by its values on A_0.
template <class S>
std::vector<Factor> zigzag_factor(S& s, const ZigzagChain<PointId>& chain, const PointMap& g)
{
    auto iso = [&](const Tuple& x, const Tuple& y) { return s.tuples_iso(x, y); };
    if (!chain_invariant(chain, iso)) throw std::invalid_argument("zigzag chain invariant violated");
    const Tuple& a = chain.as.front();
    const Tuple& b = chain.base_b;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto y = g.image(a[i]);
        if (!y || *y != chain.as.back()[i]) throw std::invalid_argument("g does not send A_0 to A_n");
    }

    std::vector<Factor> raw;
    ZigzagChain<PointId> cur = chain;
    while (cur.length() > 0) {
        // Move B_0 onto B while fixing A.
        PointMap h = detail::seed_map(a, cur.bs.front(), b);
        h = extend_over(s, std::move(h), detail::chain_points(cur));
        cur = detail::map_chain(h, cur);
        raw.push_back({'A', h.inverse()});
        // Move A_1 onto A while fixing B, which shortens the chain by one.
        PointMap h2 = detail::seed_map(b, cur.as[1], a);
        h2 = extend_over(s, std::move(h2), detail::chain_points(cur));
        cur = detail::map_chain(h2, cur);
        raw.push_back({'B', h2.inverse()});
        cur.as.erase(cur.as.begin());
        cur.bs.erase(cur.bs.begin());
    }
    raw.push_back({'A', PointMap::identity(a)});

    std::vector<Factor> out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        bool last = i + 1 == raw.size();
        if (!last && raw[i].map.is_identity()) continue;
        if (!out.empty() && out.back().fixes == raw[i].fixes) {
            out.back().map = compose(out.back().map, raw[i].map);
            continue;
        }
        out.push_back(raw[i]);
    }

    for (const auto& f : out) {
        const Tuple& fixed = f.fixes == 'A' ? a : b;
        if (!detail::fixes_all(f.map, fixed)) throw std::logic_error("factor does not fix its tuple");
        Tuple dom = f.map.domain(), img = f.map.range();
        if (!s.tuples_iso(dom, img)) throw std::logic_error("factor is not a partial isometry");
    }
    for (PointId p : a)
        if (apply_factors(out, p) != g.image(p)) throw std::logic_error("factor product disagrees with g on A");
    return out;
}

struct ZigzagSearch {
    std::optional<ZigzagChain<PointId>> chain;
    std::string route;                 // which construction produced the chain
    std::vector<std::string> tried;
};

struct ZigzagBounds {
    std::size_t max_n = 3;
    std::size_t cap = 10;              // points in A u B u A'
};

// Bounded search for an (n,B)-zigzag path from A to A2 with n <= max_n.
// Tries, in order: A2 = A, A2 ~_B A, the far-set chain (metric sessions),
// and the two-step free construction. Every candidate is re-verified.
template <class S>
ZigzagSearch has_zigzag(S& s, const Tuple& a, const Tuple& b, const Tuple& a2, ZigzagBounds bounds = {})
{
    if (a.size() != a2.size()) throw std::invalid_argument("A and A' have different sizes");
    Tuple c;
    for (PointId p : a)
        if (std::find(b.begin(), b.end(), p) != b.end()) c.push_back(p);
    Tuple frag = detail::cat(detail::cat(a, b), a2);
    std::sort(frag.begin(), frag.end());
    frag.erase(std::unique(frag.begin(), frag.end()), frag.end());
    if (frag.size() > bounds.cap) throw std::invalid_argument("fragment exceeds the point cap");
    if (!s.tuples_iso(detail::cat(a, c), detail::cat(a2, c)))
        throw std::invalid_argument("A' is not isomorphic to A over A n B");
    for (PointId p : c)
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] == p && a2[i] != p) throw std::invalid_argument("A' moves a point of A n B");

    auto iso = [&](const Tuple& x, const Tuple& y) { return s.tuples_iso(x, y); };
    ZigzagSearch out;
    auto accept = [&](ZigzagChain<PointId> ch, const char* route) {
        out.tried.push_back(route);
        if (ch.length() > bounds.max_n || !chain_invariant(ch, iso) || ch.as.back() != a2) return false;
        out.chain = std::move(ch);
        out.route = route;
        return true;
    };

    if (a == a2) {
        ZigzagChain<PointId> ch;
        ch.as = {a};
        ch.base_b = b;
        if (accept(ch, "identity")) return out;
    }
    if (bounds.max_n >= 1 && s.tuples_iso(detail::cat(a, b), detail::cat(a2, b))) {
        ZigzagChain<PointId> ch;
        ch.as = {a, a2};
        ch.bs = {b};
        ch.base_b = b;
        if (accept(ch, "one-step")) return out;
    }
    if constexpr (requires { s.try_far_set(a, a2, b); }) {
        if (bounds.max_n >= 2)
            if (auto ch = s.try_far_set(a, a2, b))
                if (accept(*ch, "far-set")) return out;
    }
    if (bounds.max_n >= 2) {
        Tuple a1 = s.copy_free(a, b);
        Tuple a3 = s.copy_free(a1, a);
        PointMap k = extend_over(s, detail::seed_map(a, a1, a3), b);
        Tuple kb = detail::apply_map(k, b);
        if (s.tuples_iso(detail::cat(a3, a), detail::cat(a3, a2))) {
            PointMap j = extend_over(s, detail::seed_map(a3, a, a2), kb);
            ZigzagChain<PointId> ch;
            ch.as = {a, a3, a2};
            ch.bs = {kb, detail::apply_map(j, kb)};
            ch.base_b = b;
            if (accept(ch, "free-two-step")) return out;
        } else {
            out.tried.push_back("free-two-step");
        }
    }
    return out;
}

} // namespace ury
