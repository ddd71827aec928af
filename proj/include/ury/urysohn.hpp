#pragma once

// A lazily grown countable Urysohn space over a distance monoid. Points are
// indices; the space only ever gains points, and every mutation is kept in a
// replayable transcript.

#include "chain.hpp"
#include "fin_space.hpp"
#include "lazy.hpp"

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ury {

struct SessionEvent {
    enum class Op { realize, realize_free, extend };
    Op op = Op::realize;
    std::vector<PointId> base;     // realize*
    std::vector<Distance> dists;   // realize*
    std::vector<std::pair<PointId, PointId>> map;    // extend
    PointId x = 0;                 // extend
    bool inverse = false;          // extend
    PointId result = 0;
};

class UrysohnSession;
inline std::optional<ZigzagChain<PointId>> try_far_set_chain(UrysohnSession& s, const Tuple& a, const Tuple& a2,
                                                             const Tuple& b);

class UrysohnSession {
public:
    using Point = PointId;

    UrysohnSession(Monoid m, std::uint64_t seed) : space_(m), seed_(seed), rng_(seed) {}

    const Monoid& monoid() const { return space_.monoid(); }
    const FinSpace& space() const { return space_; }
    std::size_t size() const { return space_.size(); }
    const Distance& d(PointId a, PointId b) const { return space_.d(a, b); }
    std::uint64_t seed() const { return seed_; }
    std::mt19937_64& rng() { return rng_; }
    const std::string& label(PointId p) const { return space_.label(p); }
    const std::vector<SessionEvent>& transcript() const { return events_; }

    std::optional<ZigzagChain<PointId>> try_far_set(const Tuple& a, const Tuple& a2, const Tuple& b)
    {
        return try_far_set_chain(*this, a, a2, b);
    }

    // Throws on a zero entry or a violated Katetov inequality.
    void check_vector(const std::vector<PointId>& base, const std::vector<Distance>& dists) const
    {
        const auto& m = monoid();
        if (base.size() != dists.size()) throw std::invalid_argument("vector size mismatch");
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (base[i] >= size()) throw std::invalid_argument("vector names a point outside the session");
            check_value(m, dists[i]);
            if (dists[i] == Distance()) throw std::invalid_argument("zero entry in Katetov vector");
        }
        for (std::size_t i = 0; i < base.size(); ++i)
            for (std::size_t j = 0; j < base.size(); ++j) {
                if (i == j) continue;
                const Distance& dij = d(base[i], base[j]);
                if (less(m, oplus(m, dists[j], dij), dists[i]) ||
                    (i < j && less(m, oplus(m, dists[i], dists[j]), dij)))
                    throw std::invalid_argument("Katetov vector violates the triangle inequality");
            }
    }

    // A point at the prescribed distances from base. An existing point is
    // reused only when it matches exactly; an empty base returns point 0.
    PointId realize(const std::vector<PointId>& base, const std::vector<Distance>& dists)
    {
        check_vector(base, dists);
        PointId out;
        if (auto hit = find_exact(base, dists))
            out = *hit;
        else if (base.empty() && size() > 0)
            out = 0;
        else
            out = add_fresh(base, dists);
        record_realize(SessionEvent::Op::realize, base, dists, out);
        return out;
    }

    // Always a new point, freely amalgamated over base.
    PointId realize_free(const std::vector<PointId>& base, const std::vector<Distance>& dists)
    {
        check_vector(base, dists);
        PointId out = add_fresh(base, dists);
        record_realize(SessionEvent::Op::realize_free, base, dists, out);
        return out;
    }

    PointMap extend_isometry(const PointMap& p, PointId x) { return extend_forward(*this, p, x); }
    PointMap extend_isometry_back(const PointMap& p, PointId y) { return extend_backward(*this, p, y); }

    // Engine hooks.
    std::vector<PointId> matches(const PointMap& p, PointId x, bool inverse) const
    {
        std::vector<PointId> out;
        for (PointId y = 0; y < size(); ++y) {
            if (inverse ? p.in_domain(y) : p.in_range(y)) continue;
            bool ok = true;
            for (const auto& [a, b] : p.pairs()) {
                PointId src = inverse ? b : a, dst = inverse ? a : b;
                if (!(d(y, dst) == d(x, src))) {
                    ok = false;
                    break;
                }
            }
            if (ok) out.push_back(y);
        }
        return out;
    }

    PointId realize_transported(const PointMap& p, PointId x, bool inverse)
    {
        std::vector<PointId> base;
        std::vector<Distance> dists;
        for (const auto& [a, b] : p.pairs()) {
            base.push_back(inverse ? a : b);
            dists.push_back(d(x, inverse ? b : a));
        }
        return add_fresh(base, dists);
    }

    template <class Rng>
    PointId fresh_near(PointId x, Rng& rng)
    {
        return realize_free({x}, {sample_positive(monoid(), rng)});
    }

    void note_extend(const PointMap& p, PointId x, bool inverse, PointId y)
    {
        SessionEvent e;
        e.op = SessionEvent::Op::extend;
        e.map = p.pairs();
        e.x = x;
        e.inverse = inverse;
        e.result = y;
        events_.push_back(std::move(e));
    }

    bool tuples_iso(const Tuple& x, const Tuple& y) const
    {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = i + 1; j < x.size(); ++j)
                if (!(d(x[i], x[j]) == d(y[i], y[j]))) return false;
        return true;
    }

    // X' isometric to X over fixed, free over fixed; fixed points of X stay.
    Tuple copy_free(const Tuple& x, const Tuple& fixed)
    {
        Tuple out;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (std::find(fixed.begin(), fixed.end(), x[i]) != fixed.end()) {
                out.push_back(x[i]);
                continue;
            }
            std::vector<PointId> base;
            std::vector<Distance> dists;
            for (PointId f : fixed) {
                base.push_back(f);
                dists.push_back(d(x[i], f));
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (std::find(base.begin(), base.end(), out[j]) != base.end()) continue;
                if (x[j] == x[i]) continue;
                base.push_back(out[j]);
                dists.push_back(d(x[i], x[j]));
            }
            auto dup = std::find(x.begin(), x.begin() + static_cast<long>(i), x[i]);
            if (dup != x.begin() + static_cast<long>(i)) {
                out.push_back(out[static_cast<std::size_t>(dup - x.begin())]);
                continue;
            }
            out.push_back(realize_free(base, dists));
        }
        return out;
    }

    // Iterated realization of a finite space; returns the image of each point.
    Tuple embed(const FinSpace& x)
    {
        if (!(x.monoid() == monoid())) throw std::invalid_argument("space and session use different monoids");
        if (!is_valid(x)) throw std::invalid_argument("cannot embed an invalid space");
        Tuple img;
        for (std::size_t i = 0; i < x.size(); ++i) {
            std::vector<Distance> dists;
            for (std::size_t j = 0; j < i; ++j) dists.push_back(x.d(i, j));
            img.push_back(realize(img, dists));
        }
        return img;
    }

    // Re-executes a transcript; throws if any step disagrees.
    static UrysohnSession replay(const Monoid& m, std::uint64_t seed, const std::vector<SessionEvent>& events)
    {
        UrysohnSession s(m, seed);
        for (const auto& e : events) {
            PointId got = 0;
            switch (e.op) {
            case SessionEvent::Op::realize: got = s.realize(e.base, e.dists); break;
            case SessionEvent::Op::realize_free: got = s.realize_free(e.base, e.dists); break;
            case SessionEvent::Op::extend: {
                PointMap p(e.map);
                if (e.result < s.size()) {
                    auto c = s.matches(p, e.x, e.inverse);
                    if (std::find(c.begin(), c.end(), e.result) == c.end())
                        throw std::runtime_error("transcript extend step does not match the replayed space");
                    got = e.result;
                } else {
                    got = s.realize_transported(p, e.x, e.inverse);
                }
                s.note_extend(p, e.x, e.inverse, got);
                break;
            }
            }
            if (got != e.result) throw std::runtime_error("transcript diverged at a realization step");
        }
        return s;
    }

private:
    std::optional<PointId> find_exact(const std::vector<PointId>& base, const std::vector<Distance>& dists) const
    {
        if (base.empty()) return std::nullopt;
        for (PointId y = 0; y < size(); ++y) {
            bool ok = true;
            for (std::size_t k = 0; k < base.size() && ok; ++k) ok = d(y, base[k]) == dists[k];
            if (ok) return y;
        }
        return std::nullopt;
    }

    PointId add_fresh(const std::vector<PointId>& base, const std::vector<Distance>& dists)
    {
        KatetovVector v;
        for (PointId b : base) v.points.push_back(space_.label(b));
        v.entries = dists;
        auto row = katetov_row(space_, v);
        return space_.add_point("p" + std::to_string(size()), row);
    }

    void record_realize(SessionEvent::Op op, const std::vector<PointId>& base, const std::vector<Distance>& dists,
                        PointId out)
    {
        SessionEvent e;
        e.op = op;
        e.base = base;
        e.dists = dists;
        e.result = out;
        events_.push_back(std::move(e));
    }

    FinSpace space_;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
    std::vector<SessionEvent> events_;
};

inline UrysohnSession new_session(const Monoid& m, std::uint64_t seed) { return UrysohnSession(m, seed); }

inline LazyAutomorphism<UrysohnSession> generic_automorphism(UrysohnSession& s, std::uint64_t seed,
                                                             Policy policy = Policy::generic)
{
    return LazyAutomorphism<UrysohnSession>(s, policy, seed);
}

namespace detail {

inline Tuple unique_union(const Tuple& a, const Tuple& b)
{
    Tuple out;
    for (const auto* t : {&a, &b})
        for (PointId p : *t)
            if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    return out;
}

inline Distance session_diam(const UrysohnSession& s, const Tuple& a)
{
    Distance best;
    for (PointId p : a)
        for (PointId q : a) best = dmax(s.monoid(), best, s.d(p, q));
    return best;
}

inline Distance session_set_distance(const UrysohnSession& s, const Tuple& a, const Tuple& b)
{
    std::optional<Distance> best;
    for (PointId p : a)
        for (PointId q : b)
            if (!best || less(s.monoid(), s.d(p, q), *best)) best = s.d(p, q);
    if (!best) throw std::invalid_argument("distance to an empty set");
    return *best;
}

} // namespace detail

// The chain A, B, A', B', g(A): A' is isometric to A over B at distance
// r = d(E,B) from E = A u g(A), and B' is the image of B under the map fixing
// A' and sending A to g(A).
inline ZigzagChain<PointId> factor_through_far_set(UrysohnSession& s, const Tuple& a, const Tuple& ga,
                                                   const Tuple& b)
{
    const auto& m = s.monoid();
    if (a.empty() || b.empty() || a.size() != ga.size()) throw std::invalid_argument("factor_through_far_set: bad tuples");
    Tuple e = detail::unique_union(a, ga);
    Distance r = detail::session_set_distance(s, e, b);
    if (less(m, r, detail::session_diam(s, e)) || r == Distance())
        throw std::invalid_argument("B is too close to A u g(A)");

    Tuple ap;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::vector<PointId> base;
        std::vector<Distance> dists;
        for (PointId q : b) {
            base.push_back(q);
            dists.push_back(s.d(a[i], q));
        }
        for (PointId q : e) {
            base.push_back(q);
            dists.push_back(r);
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (a[j] == a[i]) continue;
            base.push_back(ap[j]);
            dists.push_back(s.d(a[i], a[j]));
        }
        auto dup = std::find(a.begin(), a.begin() + static_cast<long>(i), a[i]);
        if (dup != a.begin() + static_cast<long>(i))
            ap.push_back(ap[static_cast<std::size_t>(dup - a.begin())]);
        else
            ap.push_back(s.realize(base, dists));
    }

    PointMap mm;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mm.try_add(ap[i], ap[i]);
        mm.try_add(a[i], ga[i]);
    }
    Tuple bp;
    for (PointId q : b) {
        mm = s.extend_isometry(mm, q);
        bp.push_back(mm.at(q));
    }
    ZigzagChain<PointId> c;
    c.as = {a, ap, ga};
    c.bs = {b, bp};
    c.base_b = b;
    return c;
}

// Far-set route for has_zigzag: the chain of factor_through_far_set when B
// is far enough from A u A', nothing otherwise.
inline std::optional<ZigzagChain<PointId>> try_far_set_chain(UrysohnSession& s, const Tuple& a, const Tuple& a2,
                                                             const Tuple& b)
{
    if (a.empty() || b.empty()) return std::nullopt;
    Tuple e = detail::unique_union(a, a2);
    Distance r = detail::session_set_distance(s, e, b);
    if (r == Distance() || less(s.monoid(), r, detail::session_diam(s, e))) return std::nullopt;
    return factor_through_far_set(s, a, a2, b);
}

} // namespace ury
