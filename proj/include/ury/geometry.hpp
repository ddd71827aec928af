#pragma once

// Flexibility, alignment and cutting predicates, and the witness
// constructions behind the distancing, separation and misalignment lemmas.
// Every construction re-validates its output and re-checks its conclusion.

#include "chain.hpp"
#include "fin_space.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ury {

using Points = std::vector<std::string>;

namespace detail {

inline std::size_t max_index(const Monoid& m, const Distance (&r)[3])
{
    std::size_t i = 0;
    for (std::size_t k = 1; k < 3; ++k)
        if (less(m, r[i], r[k])) i = k;
    return i;
}

inline void require_standard(const Monoid& m, const char* what)
{
    if (!m.standard()) throw std::invalid_argument(std::string(what) + " needs a standard monoid kind");
}

inline bool contains(const Points& s, const std::string& p) { return std::find(s.begin(), s.end(), p) != s.end(); }

} // namespace detail

inline bool is_flexible(const Monoid& m, const Distance& r1, const Distance& r2, const Distance& r3, const Distance& eps)
{
    const Distance r[3] = {r1, r2, r3};
    std::size_t i = detail::max_index(m, r);
    return leq(m, oplus(m, r[i], eps), oplus(m, r[(i + 1) % 3], r[(i + 2) % 3]));
}

inline bool is_triangular(const Monoid& m, const Distance& r1, const Distance& r2, const Distance& r3)
{
    return is_flexible(m, r1, r2, r3, Distance());
}

// The perturbed bound only needs the smallest admissible r', max(r - eps, 0).
inline bool is_strongly_flexible(const Monoid& m, const Distance& r1, const Distance& r2, const Distance& r3,
                                 const Distance& eps)
{
    detail::require_standard(m, "strong flexibility");
    if (!is_flexible(m, r1, r2, r3, eps)) return false;
    const Distance r[3] = {r1, r2, r3};
    std::size_t i = detail::max_index(m, r);
    const Distance& rj = r[(i + 1) % 3];
    const Distance& rk = r[(i + 2) % 3];
    return leq(m, r[i], oplus(m, monus(m, rj, eps), rk)) && leq(m, r[i], oplus(m, rj, monus(m, rk, eps)));
}

struct TripleReport {
    Distance r[3];
    bool triangular = false;
    bool flexible = false;
    bool strongly_flexible = false;
    std::optional<std::vector<int>> aligned_order;    // permutation (i,j,k) with (u_i,u_j,u_k) aligned
};

inline bool is_aligned(const FinSpace& s, const std::string& u1, const std::string& u2, const std::string& u3)
{
    const auto& m = s.monoid();
    const Distance& d13 = s.d(u1, u3);
    const Distance& d12 = s.d(u1, u2);
    const Distance& d23 = s.d(u2, u3);
    if (less(m, d13, d12) || less(m, d13, d23)) return false;
    return d13 == oplus(m, d12, d23);
}

inline Points interval(const FinSpace& s, const std::string& u, const std::string& v)
{
    Points out;
    for (const auto& x : s.labels())
        if (is_aligned(s, u, x, v)) out.push_back(x);
    return out;
}

inline TripleReport triple_report(const FinSpace& s, const std::string& u1, const std::string& u2,
                                  const std::string& u3, const Distance& eps)
{
    const auto& m = s.monoid();
    TripleReport t;
    t.r[0] = s.d(u1, u2);
    t.r[1] = s.d(u2, u3);
    t.r[2] = s.d(u1, u3);
    t.triangular = is_triangular(m, t.r[0], t.r[1], t.r[2]);
    t.flexible = is_flexible(m, t.r[0], t.r[1], t.r[2], eps);
    t.strongly_flexible = m.standard() && is_strongly_flexible(m, t.r[0], t.r[1], t.r[2], eps);
    const std::string* u[3] = {&u1, &u2, &u3};
    std::vector<int> perm = {0, 1, 2};
    do {
        if (is_aligned(s, *u[perm[0]], *u[perm[1]], *u[perm[2]])) {
            t.aligned_order = std::vector<int>{perm[0] + 1, perm[1] + 1, perm[2] + 1};
            break;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return t;
}

// B r-cuts A: some a, a' in A with d(a,a') <= r have a point of B in [a,a'].
// r = nullopt means "for some r", i.e. no bound on d(a,a').
inline bool cuts(const FinSpace& s, const Points& b, const Points& a, const std::optional<Distance>& r)
{
    const auto& m = s.monoid();
    for (const auto& x : a)
        for (const auto& y : a) {
            if (r && less(m, *r, s.d(x, y))) continue;
            for (const auto& p : b)
                if (is_aligned(s, x, p, y)) return true;
        }
    return false;
}

inline bool in_general_position(const FinSpace& s, const Points& b, const Points& a, const Distance& eps)
{
    const auto& m = s.monoid();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            for (const auto& p : b) {
                if (p == a[i] || p == a[j]) return false;
                if (!is_strongly_flexible(m, s.d(a[i], a[j]), s.d(a[j], p), s.d(a[i], p), eps)) return false;
            }
    return true;
}

// Largest eps among halved pairwise differences (and their halvings) that
// puts b in general position relative to a; nullopt when none works.
inline std::optional<Distance> general_position_epsilon(const FinSpace& s, const Points& b, const Points& a)
{
    const auto& m = s.monoid();
    Points all = a;
    all.insert(all.end(), b.begin(), b.end());
    std::set<std::pair<Rational, Rational>> seen;
    std::vector<Distance> cands;
    for (const auto& p : all)
        for (const auto& q : all)
            for (const auto& x : all)
                for (const auto& y : all) {
                    const Distance& u = s.d(p, q);
                    const Distance& v = s.d(x, y);
                    if (!less(m, v, u)) continue;
                    Distance h = half(m, monus(m, u, v));
                    for (int k = 0; k < 4; ++k) {
                        if (seen.insert({h.x, h.y}).second) cands.push_back(h);
                        h = half(m, h);
                    }
                }
    std::sort(cands.begin(), cands.end(), [&](const Distance& x, const Distance& y) { return less(m, y, x); });
    for (const auto& e : cands)
        if (in_general_position(s, b, a, e)) return e;
    return std::nullopt;
}

struct WitnessResult {
    FinSpace space;
    PartialMap map;
    std::map<std::string, bool> checks;
    std::map<std::string, Distance> measures;
};

inline void require_valid(const FinSpace& s, const char* what)
{
    if (!is_valid(s)) throw std::logic_error(std::string(what) + " produced an invalid space");
}

// A' isometric to A over B with d(a,a') = r for all a in A, a' in A'.
inline WitnessResult equal_distance_copy(const FinSpace& s, const Points& a, const Points& b, const Distance& r)
{
    const auto& m = s.monoid();
    if (a.empty() || b.empty()) throw std::invalid_argument("equal_distance_copy needs nonempty A and B");
    for (const auto& p : a)
        if (detail::contains(b, p)) throw std::invalid_argument("A and B must be disjoint");
    if (r == Distance()) throw std::invalid_argument("r must be positive");
    if (less(m, r, diam(s, a))) throw std::invalid_argument("r is below diam(A)");
    Distance dab = set_distance(s, a, b);
    if (less(m, oplus(m, dab, dab), r)) throw std::invalid_argument("r exceeds 2 d(A,B)");

    // Piece on B, A and A''.
    Points labels = b;
    labels.insert(labels.end(), a.begin(), a.end());
    FinSpace probe = s;
    Points copies;
    for (const auto& p : a) {
        std::string l = probe.fresh_label(p + "'");
        probe.add_point(l, std::vector<Distance>(probe.size()));
        copies.push_back(l);
    }
    Points src = labels;
    labels.insert(labels.end(), copies.begin(), copies.end());
    std::size_t nb = b.size(), na = a.size(), n = labels.size();
    auto orig = [&](std::size_t i) { return i < nb + na ? src[i] : a[i - nb - na]; };
    std::vector<std::vector<Distance>> t(n, std::vector<Distance>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            bool ci = i >= nb + na, cj = j >= nb + na;
            bool ai = i >= nb && !ci, aj = j >= nb && !cj;
            if ((ci && aj) || (ai && cj))
                t[i][j] = r;
            else
                t[i][j] = s.d(orig(i), orig(j));
        }
    FinSpace piece(m, labels, t);
    require_valid(piece, "equal_distance_copy");
    Points glue_pts = b;
    glue_pts.insert(glue_pts.end(), a.begin(), a.end());
    auto am = amalgamate(s, piece, PartialMap::identity(glue_pts));

    WitnessResult w{std::move(am.space), {}, {}, {}};
    for (std::size_t i = 0; i < na; ++i) w.map.add(a[i], am.b_map.at(copies[i]));
    Points ap = map_tuple(w.map, a);
    bool all_r = true;
    for (const auto& p : a)
        for (const auto& q : ap) all_r = all_r && w.space.d(p, q) == r;
    Points ab = a, apb = ap;
    ab.insert(ab.end(), b.begin(), b.end());
    apb.insert(apb.end(), b.begin(), b.end());
    w.checks["valid"] = is_valid(w.space);
    w.checks["copy_over_B"] = tuples_isometric(w.space, ab, apb);
    w.checks["cross_distances_equal_r"] = all_r;
    return w;
}

struct DistancingResult {
    FinSpace space;
    ZigzagChain<std::string> chain;
    Distance bound;       // (2n+1) d(A,B)
    Distance measured;    // d(C, final copy)
    std::map<std::string, bool> checks;
};

// Alternating independent copies pushing A away from C; the last tuple of the
// chain is g(A) with g in G_B (G_A G_B)^n.
inline DistancingResult distancing_chain(const FinSpace& s, const Points& a, const Points& b, const Points& c,
                                         std::size_t n)
{
    const auto& m = s.monoid();
    if (a.empty() || b.empty()) throw std::invalid_argument("distancing_chain needs nonempty A and B");
    Distance dab = set_distance(s, a, b);
    if (dab == Distance()) throw std::invalid_argument("distancing_chain needs d(A,B) > 0");

    FinSpace cur = s;
    auto step = independent_copy(cur, a, b, "'");
    cur = step.space;
    Points ai = map_tuple(step.map, a);
    Points bi = b;
    ZigzagChain<std::string> chain;
    chain.base_b = b;
    chain.as = {a, ai};
    chain.bs = {b};
    for (std::size_t i = 0; i < n; ++i) {
        auto sb = independent_copy(cur, bi, ai, "'");
        cur = sb.space;
        Points bnext = map_tuple(sb.map, bi);
        auto sa = independent_copy(cur, ai, bnext, "'");
        cur = sa.space;
        Points anext = map_tuple(sa.map, ai);
        chain.bs.push_back(bnext);
        chain.as.push_back(anext);
        ai = anext;
        bi = bnext;
    }

    DistancingResult out{cur, chain, nmul(m, 2 * n + 1, dab), {}, {}};
    out.measured = c.empty() ? Distance() : set_distance(cur, c, ai);
    out.checks["valid"] = is_valid(cur);
    out.checks["chain_invariant"] =
        chain_invariant(chain, [&](const Points& x, const Points& y) { return tuples_isometric(cur, x, y); });
    out.checks["distance_bound"] = c.empty() || leq(m, out.bound, out.measured);
    return out;
}

struct SeparationStep {
    Points fixed;
    PartialMap map;    // C_{j-1} -> C_j
};

struct SeparationResult {
    FinSpace space;
    Points c;
    std::vector<SeparationStep> steps;
    std::map<std::string, bool> checks;
    Distance measured;
};

// C is the translate of B_1 by an element of G_{B_2} ... G_{B_k}, far from
// every A_i.
inline SeparationResult separation_copy(const FinSpace& s, const std::vector<std::pair<Points, Points>>& pairs,
                                        const Distance& r)
{
    const auto& m = s.monoid();
    if (pairs.empty()) throw std::invalid_argument("separation_copy needs at least one pair");
    for (const auto& [ai, bi] : pairs) {
        if (ai.empty() || bi.empty()) throw std::invalid_argument("separation_copy needs nonempty sets");
        if (less(m, set_distance(s, ai, bi), r)) throw std::invalid_argument("some d(A_i, B_i) is below r");
    }
    FinSpace cur = s;
    Points c = pairs[0].second;
    Points a_before = pairs[0].first;
    std::vector<SeparationStep> steps;
    for (std::size_t j = 1; j < pairs.size(); ++j) {
        Points fixed = a_before;
        for (const auto& p : pairs[j].second)
            if (!detail::contains(fixed, p)) fixed.push_back(p);
        auto cp = independent_copy(cur, c, fixed, "'");
        cur = cp.space;
        steps.push_back({fixed, cp.map});
        c = map_tuple(cp.map, c);
        for (const auto& p : pairs[j].first)
            if (!detail::contains(a_before, p)) a_before.push_back(p);
    }
    SeparationResult out{cur, c, steps, {}, {}};
    out.measured = set_distance(cur, a_before, c);
    out.checks["valid"] = is_valid(cur);
    out.checks["distance_bound"] = leq(m, r, out.measured);
    bool steps_ok = true;
    for (const auto& st : steps) {
        PartialMap f = st.map;
        for (const auto& p : st.fixed) steps_ok = steps_ok && f.try_add(p, p);
        steps_ok = steps_ok && is_isometry(cur, f);
    }
    out.checks["steps_fix_their_sets"] = steps_ok;
    return out;
}

struct NotTightReport {
    bool hypotheses = false;
    bool conclusion = false;
};

// Hypotheses of the not-tight lemma, and strong delta-flexibility of
// (r_i + eps_i) when they hold.
inline NotTightReport check_not_tight(const Monoid& m, const Distance (&r)[3], const Distance (&e)[3],
                                      const Distance& delta)
{
    detail::require_standard(m, "check_not_tight");
    NotTightReport rep;
    bool sorted = leq(m, r[0], r[1]) && leq(m, r[1], r[2]);
    bool nonzero = !(r[0] == Distance());
    if (!sorted || !nonzero || !is_triangular(m, r[0], r[1], r[2])) return rep;
    const Distance& emax = dmax(m, e[0], e[1]);
    bool h = leq(m, e[2], emax);
    for (const auto& ei : e) h = h && leq(m, oplus(m, ei, ei), r[0]);
    Distance slack;
    h = h && difference(m, emax, e[2], slack) && leq(m, delta, slack);
    rep.hypotheses = h;
    if (h)
        rep.conclusion =
            is_strongly_flexible(m, oplus(m, r[0], e[0]), oplus(m, r[1], e[1]), oplus(m, r[2], e[2]), delta);
    return rep;
}

// A' isometric to A over B and in general position relative to A, via the
// two-copy table d(a1, a2') = d(a1, a2) + f(a1, a2).
inline WitnessResult general_position_copy(const FinSpace& s, const Points& a, const Points& b)
{
    const auto& m = s.monoid();
    detail::require_standard(m, "general_position_copy");
    if (a.empty()) throw std::invalid_argument("general_position_copy needs nonempty A");
    if (cuts(s, b, a, std::nullopt)) throw std::invalid_argument("B cuts A");

    // eps: non-cutting slack over a, a' (equal allowed) and b, capped by the
    // smallest distance inside A.
    std::optional<Distance> least;
    auto take = [&](const Distance& v) {
        if (!least || less(m, v, *least)) least = v;
    };
    for (const auto& x : a)
        for (const auto& y : a)
            for (const auto& p : b) take(monus(m, oplus(m, s.d(x, p), s.d(p, y)), s.d(x, y)));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) take(s.d(a[i], a[j]));
    Distance e = least ? *least : Distance(1);

    // f decreasing in d(a1,a2): rank pairs by increasing distance, then label.
    std::vector<std::pair<std::size_t, std::size_t>> prs;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) prs.emplace_back(i, j);
    std::stable_sort(prs.begin(), prs.end(), [&](auto p, auto q) {
        auto c = compare(m, s.d(a[p.first], a[p.second]), s.d(a[q.first], a[q.second]));
        if (c != 0) return c < 0;
        return std::tie(a[p.first], a[p.second]) < std::tie(a[q.first], a[q.second]);
    });
    std::vector<std::vector<Distance>> f(a.size(), std::vector<Distance>(a.size()));
    Distance w = e;
    for (std::size_t k = 0; k < prs.size(); ++k) {
        w = half(m, w);
        f[prs[k].first][prs[k].second] = f[prs[k].second][prs[k].first] = w;
    }
    for (std::size_t i = 0; i < a.size(); ++i) f[i][i] = e;

    Points labels = b;
    labels.insert(labels.end(), a.begin(), a.end());
    FinSpace probe = s;
    Points copies;
    for (const auto& p : a) {
        std::string l = probe.fresh_label(p + "'");
        probe.add_point(l, std::vector<Distance>(probe.size()));
        copies.push_back(l);
    }
    labels.insert(labels.end(), copies.begin(), copies.end());
    std::size_t nb = b.size(), na = a.size(), n = labels.size();
    auto orig = [&](std::size_t i) { return i < nb ? b[i] : a[(i - nb) % na]; };
    std::vector<std::vector<Distance>> t(n, std::vector<Distance>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            bool ci = i >= nb + na, cj = j >= nb + na;
            bool ai = i >= nb, aj = j >= nb;
            if (ai && aj && ci != cj)
                t[i][j] = oplus(m, s.d(orig(i), orig(j)), f[(i - nb) % na][(j - nb) % na]);
            else
                t[i][j] = s.d(orig(i), orig(j));
        }
    FinSpace piece(m, labels, t);
    require_valid(piece, "general_position_copy");
    Points glue_pts = b;
    glue_pts.insert(glue_pts.end(), a.begin(), a.end());
    FinSpace out;
    PartialMap bmap;
    if (glue_pts.empty()) {
        out = piece;
        bmap = PartialMap::identity(labels);
    } else {
        auto am = amalgamate(s, piece, PartialMap::identity(glue_pts));
        out = std::move(am.space);
        bmap = std::move(am.b_map);
    }
    WitnessResult res{std::move(out), {}, {}, {}};
    for (std::size_t i = 0; i < na; ++i) res.map.add(a[i], bmap.at(copies[i]));
    Points ap = map_tuple(res.map, a);
    Points ab = a, apb = ap;
    ab.insert(ab.end(), b.begin(), b.end());
    apb.insert(apb.end(), b.begin(), b.end());
    res.checks["valid"] = is_valid(res.space);
    res.checks["copy_over_B"] = tuples_isometric(res.space, ab, apb);
    auto gp = general_position_epsilon(res.space, ap, a);
    res.checks["general_position"] = a.size() < 2 || gp.has_value();
    if (gp) res.measures["general_position_epsilon"] = *gp;
    res.measures["epsilon"] = e;
    return res;
}

// A' isometric to A over B, independent from A over B. When B does not r-cut
// A, A' does not (r+r)-cut A.
inline WitnessResult non_cutting_copy(const FinSpace& s, const Points& a, const Points& b, const Distance& r)
{
    const auto& m = s.monoid();
    detail::require_standard(m, "non_cutting_copy");
    if (a.empty() || b.empty()) throw std::invalid_argument("non_cutting_copy needs nonempty A and B");
    if (cuts(s, b, a, r)) throw std::invalid_argument("B r-cuts A");
    auto cp = independent_copy(s, a, b, "'");
    WitnessResult w{cp.space, cp.map, {}, {}};
    Points ap = map_tuple(cp.map, a);
    Points ab = a, apb = ap;
    ab.insert(ab.end(), b.begin(), b.end());
    apb.insert(apb.end(), b.begin(), b.end());
    w.checks["valid"] = is_valid(w.space);
    w.checks["copy_over_B"] = tuples_isometric(w.space, ab, apb);
    w.checks["not_2r_cut"] = !cuts(w.space, ap, a, oplus(m, r, r));
    return w;
}

// lambda^x_{y,z}(g) = d(x,y) + d(y, g^-1 z), in the ambient group.
inline Distance lambda(const FinSpace& s, const std::string& x, const std::string& y, const std::string& z,
                       const PartialMap& g)
{
    detail::require_standard(s.monoid(), "lambda");
    auto w = g.preimage(z);
    if (!w) throw std::invalid_argument("z is not in the range of g");
    return add_unclamped(s.d(x, y), s.d(y, *w));
}

// d(x, g^-1 z) <= lambda.
inline bool lambda_bounds_distance(const FinSpace& s, const std::string& x, const std::string& y,
                                   const std::string& z, const PartialMap& g)
{
    Distance l = lambda(s, x, y, z, g);
    return leq(s.monoid(), s.d(x, *g.preimage(z)), l);
}

// g in N^sp_{x,z}: d(gx, z) <= d(x,z), read as d(x, g^-1 z) <= d(x, z).
inline bool in_nsp(const FinSpace& s, const std::string& x, const std::string& z, const PartialMap& g)
{
    auto w = g.preimage(z);
    if (!w) throw std::invalid_argument("z is not in the range of g");
    return leq(s.monoid(), s.d(x, *w), s.d(x, z));
}

// lambda <= d(x,z) forces g into N^sp_{x,z}. Returns false only on a
// counterexample.
inline bool lambda_neighbourhood_implication(const FinSpace& s, const std::string& x, const std::string& y,
                                             const std::string& z, const PartialMap& g)
{
    Distance l = lambda(s, x, y, z, g);
    if (!leq(s.monoid(), l, s.d(x, z))) return true;
    return in_nsp(s, x, z, g);
}

} // namespace ury
