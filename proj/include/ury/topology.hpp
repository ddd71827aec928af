#pragma once

// Moduli of continuity f: R -> R*, ladders of idempotents, comparison of the
// induced topologies and the basic-neighbourhood containment test.

#include "end_segment.hpp"
#include "fin_space.hpp"

#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace ury {

// (s,t) in T(r): r <= s+t, s <= r+t, t <= r+s.
inline bool in_T(const Monoid& m, const Distance& r, const Distance& s, const Distance& t)
{
    return leq(m, r, oplus(m, s, t)) && leq(m, s, oplus(m, r, t)) && leq(m, t, oplus(m, r, s));
}

struct Ladder {
    Monoid monoid;
    std::vector<EndSegment> values;   // indexed by archimedean class, {0} first

    const EndSegment& at(const Distance& r) const { return values.at(static_cast<std::size_t>(arch_class(monoid, r))); }
    bool operator==(const Ladder&) const = default;
};

inline std::string format(const Ladder& g)
{
    std::string out = "(";
    for (std::size_t i = 0; i < g.values.size(); ++i) out += (i ? "," : "") + format(g.monoid, g.values[i]);
    return out + ")";
}

struct LadderVerdict {
    bool ok = true;
    std::string condition;   // "idempotent", "ii", "iii", "iv" or "shape"
    std::string detail;
};

inline LadderVerdict ladder_check(const Ladder& g)
{
    const Monoid& m = g.monoid;
    auto fail = [](std::string c, std::string d) { return LadderVerdict{false, std::move(c), std::move(d)}; };
    if (static_cast<int>(g.values.size()) != m.num_classes())
        return fail("shape", "expected " + std::to_string(m.num_classes()) + " values");
    for (std::size_t k = 0; k < g.values.size(); ++k) {
        if (!valid_segment(m, g.values[k])) return fail("shape", "value " + std::to_string(k) + " is not a segment");
        if (!is_idempotent(m, g.values[k]))
            return fail("idempotent", format(m, g.values[k]) + " is not idempotent");
    }
    for (std::size_t k = 0; k + 1 < g.values.size(); ++k)
        if (seg_less(m, g.values[k], g.values[k + 1]))
            return fail("ii", "value increases from class " + std::to_string(k) + " to " + std::to_string(k + 1));
    // If [r] < [s] and g(s) < g(r), every s of that class lies in g(r).
    for (std::size_t k = 0; k < g.values.size(); ++k)
        for (std::size_t l = k + 1; l < g.values.size(); ++l)
            if (seg_less(m, g.values[l], g.values[k]) &&
                !seg_leq(m, g.values[k], class_closure(m, static_cast<int>(l))))
                return fail("iii", "class " + std::to_string(l) + " is not contained in " + format(m, g.values[k]));
    if (!m.dense()) return fail("iv", "1 is not a sum of two elements of its class");
    return {};
}

struct Modulus {
    Monoid monoid;
    std::string name;
    std::function<EndSegment(const Distance&)> rule;
    std::optional<Ladder> ladder;     // set for ladder-derived rules

    EndSegment operator()(const Distance& d) const { return rule(d); }
};

// r -> r (+)* g([r]).
inline Modulus ladder_to_modulus(const Ladder& g)
{
    auto v = ladder_check(g);
    if (!v.ok) throw std::invalid_argument("not a ladder: condition " + v.condition + ": " + v.detail);
    Monoid m = g.monoid;
    return {m, "ladder" + format(g),
            [g, m](const Distance& r) { return seg_oplus(m, seg_closed(m, r), g.at(r)); }, g};
}

inline Modulus constant_modulus(const Monoid& m, const EndSegment& c)
{
    if (!valid_segment(m, c)) throw std::invalid_argument("constant is not a segment of the monoid");
    return {m, "constant " + format(m, c), [c](const Distance&) { return c; }, std::nullopt};
}

// On x + y*a: closed at irrational values (y != 0), open at rational ones.
inline Modulus quad_example_modulus(const Monoid& m)
{
    if (m.kind != Kind::quad_ext) throw std::invalid_argument("the example rule lives on quad_ext");
    return {m, "quad example",
            [m](const Distance& r) { return r.y != 0 ? seg_closed(m, r) : seg_open(m, r); }, std::nullopt};
}

// Seeded values of several shapes per kind, 0 included.
inline std::vector<Distance> sample_values(const Monoid& m, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    auto small = [&](long den) { return Rational(static_cast<long>(rng() % (4 * den)), den); };
    std::vector<Distance> out{Distance()};
    while (out.size() < count) {
        Distance d;
        switch (m.kind) {
        case Kind::rational: d = Distance(small(1 + static_cast<long>(rng() % 6))); break;
        case Kind::rational_truncated: d = Distance(m.bound * Rational(static_cast<long>(rng() % 9), 8)); break;
        case Kind::integer: d = Distance(static_cast<int>(rng() % 8)); break;
        case Kind::lex_pair: {
            Rational x = rng() % 2 ? Rational(0) : small(2);
            Rational y = small(2) - (x > 0 ? Rational(2) : Rational(0));
            d = Distance(x, y);
            break;
        }
        case Kind::quad_ext: {
            Rational x = small(1 + static_cast<long>(rng() % 4));
            Rational y = rng() % 3 == 0 ? Rational(0) : small(1 + static_cast<long>(rng() % 4));
            d = Distance(x, y);
            break;
        }
        }
        if (m.kind == Kind::rational_truncated && d.x > m.bound) d.x = m.bound;
        if (valid_value(m, d)) out.push_back(d);
    }
    return out;
}

struct ConditionReport {
    bool pass = true;
    std::size_t checked = 0;
    std::optional<Distance> counterexample;
    std::string detail;
};

struct ModulusReport {
    ConditionReport a, b, c;
    bool all() const { return a.pass && b.pass && c.pass; }
};

struct ModulusCheckOptions {
    std::size_t pool = 8;          // seeded values paired among themselves for T(d)
    std::uint64_t seed = 0;
};

namespace detail {

inline EndSegment seg_min(const Monoid& m, const std::optional<EndSegment>& a, const EndSegment& b)
{
    return a && seg_leq(m, *a, b) ? *a : b;
}

} // namespace detail

// The pairs of T(d) over which (b) and (c) take their minimum: (d,0), (0,d),
// (d/2,d/2), (s, d-s), (s, d+s), (d+s, s) for pooled s, and pool x pool.
inline std::vector<std::pair<Distance, Distance>> t_pairs(const Monoid& m, const Distance& d,
                                                          const std::vector<Distance>& pool)
{
    std::vector<std::pair<Distance, Distance>> out{{d, Distance()}, {Distance(), d}};
    if (m.dense()) out.emplace_back(half(m, d), half(m, d));
    for (const auto& s : pool) {
        Distance rest;
        if (leq(m, s, d) && difference(m, d, s, rest)) out.emplace_back(s, rest);
        out.emplace_back(s, oplus(m, d, s));
        out.emplace_back(oplus(m, d, s), s);
    }
    for (const auto& s : pool)
        for (const auto& t : pool)
            if (in_T(m, d, s, t)) out.emplace_back(s, t);
    return out;
}

inline ModulusReport modulus_check(const Modulus& f, const std::vector<Distance>& samples,
                                   ModulusCheckOptions opt = {})
{
    const Monoid& m = f.monoid;
    auto pool = sample_values(m, opt.pool + 1, opt.seed ^ 0x9e3779b97f4a7c15ull);
    pool.erase(pool.begin());
    ModulusReport rep;
    auto fail = [&](ConditionReport& c, const Distance& d, std::string why) {
        if (!c.pass) return;
        c.pass = false;
        c.counterexample = d;
        c.detail = std::move(why);
    };
    for (const auto& d : samples) {
        check_value(m, d);
        EndSegment fd = f(d);
        ++rep.a.checked;
        if (!seg_leq(m, seg_closed(m, d), fd))
            fail(rep.a, d, "f(" + format(m, d) + ") = " + format(m, fd) + " is below " + format(m, d));

        std::optional<EndSegment> inf_b, inf_c;
        for (const auto& [s, t] : t_pairs(m, d, pool)) {
            EndSegment ft = f(t);
            inf_b = detail::seg_min(m, inf_b, seg_oplus(m, f(s), ft));
            inf_c = detail::seg_min(m, inf_c, seg_oplus(m, seg_closed(m, s), ft));
        }
        ++rep.b.checked;
        ++rep.c.checked;
        if (!seg_leq(m, *inf_b, fd))
            fail(rep.b, d, "f(" + format(m, d) + ") = " + format(m, fd) + " is below min f(s)+f(t) = " +
                               format(m, *inf_b));
        if (!seg_leq(m, fd, *inf_c))
            fail(rep.c, d, "f(" + format(m, d) + ") = " + format(m, fd) + " exceeds min s+f(t) = " +
                               format(m, *inf_c));
    }
    return rep;
}

enum class Comparison { finer, coarser, equal, incomparable };

inline std::string comparison_name(Comparison c)
{
    switch (c) {
    case Comparison::finer: return "finer";
    case Comparison::coarser: return "coarser";
    case Comparison::equal: return "equal";
    case Comparison::incomparable: return "incomparable";
    }
    return "?";
}

struct ModulusComparison {
    Comparison relation = Comparison::equal;   // of tau_f relative to tau_g
    bool exact = false;
    // Points where the values differ: (r, f(r), g(r)).
    std::vector<std::tuple<Distance, EndSegment, EndSegment>> witnesses;
};

// tau_f is finer than tau_g iff f <= g pointwise. Exact for two ladder rules
// (one representative per class); sampled otherwise.
inline ModulusComparison compare_moduli(const Modulus& f, const Modulus& g, const std::vector<Distance>& samples = {})
{
    if (!(f.monoid == g.monoid)) throw std::invalid_argument("moduli over different monoids");
    const Monoid& m = f.monoid;
    ModulusComparison out;
    std::vector<Distance> points;
    if (f.ladder && g.ladder) {
        out.exact = true;
        for (int k = 0; k < m.num_classes(); ++k) points.push_back(class_representative(m, k));
    } else {
        points = samples.empty() ? sample_values(m, 200, 1) : samples;
    }
    bool f_below = false, g_below = false;
    for (const auto& r : points) {
        EndSegment fr = f(r), gr = g(r);
        auto c = seg_compare(m, fr, gr);
        if (c == 0) continue;
        (c < 0 ? f_below : g_below) = true;
        out.witnesses.emplace_back(r, fr, gr);
    }
    out.relation = f_below && g_below ? Comparison::incomparable
                   : f_below          ? Comparison::finer
                   : g_below          ? Comparison::coarser
                                      : Comparison::equal;
    return out;
}

struct IdealDescription {
    enum class Shape { zero, up_to_class, all };
    Shape shape = Shape::zero;
    int max_class = 0;       // up_to_class: classes 0..max_class
    bool exact = true;
    std::string text;

    bool contains(const Monoid& m, const Distance& r) const
    {
        switch (shape) {
        case Shape::zero: return r == Distance();
        case Shape::up_to_class: return arch_class(m, r) <= max_class;
        case Shape::all: return true;
        }
        return false;
    }
};

// mu_f = { r : s + r <= f(s) for all s }.
inline IdealDescription ideal_mu(const Modulus& f, const std::vector<Distance>& samples = {})
{
    const Monoid& m = f.monoid;
    IdealDescription out;
    if (f.ladder) {
        // Each class k contributes {r : s + r <= s + g_k}; the intersection is
        // decided by the smallest value of g.
        const EndSegment& low = f.ladder->values.back();
        if (low.tag == SegTag::empty || (m.bounded() && low == seg_top(m))) {
            out.shape = IdealDescription::Shape::all;
            out.text = "R";
        } else if (low.tag == SegTag::class_boundary) {
            out.shape = IdealDescription::Shape::up_to_class;
            out.max_class = low.class_index - 1;
            out.text = "{0} u small class";
        } else {
            out.shape = IdealDescription::Shape::zero;
            out.text = "{0}";
        }
        return out;
    }
    // Sampled: keep the candidates that pass every sampled s.
    out.exact = false;
    auto pts = samples.empty() ? sample_values(m, 200, 2) : samples;
    std::vector<Distance> members;
    for (const auto& r : pts) {
        bool in = true;
        for (const auto& s : pts)
            if (!seg_leq(m, seg_closed(m, oplus(m, s, r)), f(s))) {
                in = false;
                break;
            }
        if (in) members.push_back(r);
    }
    bool only_zero = std::all_of(members.begin(), members.end(), [](const Distance& r) { return r == Distance(); });
    if (only_zero) {
        out.shape = IdealDescription::Shape::zero;
        out.text = "{0} (sampled)";
    } else if (members.size() == pts.size()) {
        out.shape = IdealDescription::Shape::all;
        out.text = "R (sampled)";
    } else {
        int top = 0;
        for (const auto& r : members) top = std::max(top, arch_class(m, r));
        out.shape = IdealDescription::Shape::up_to_class;
        out.max_class = top;
        out.text = "classes up to " + std::to_string(top) + " (sampled)";
    }
    return out;
}

struct LadderEnumeration {
    std::vector<Ladder> ladders;
    std::vector<std::pair<Ladder, LadderVerdict>> rejected;
};

// Every idempotent-valued sequence passing ladder_check, optionally only
// those whose minimal value is in filter_min. Ordered by the reversed
// sequence, so the finest topology comes first.
inline LadderEnumeration enumerate_ladders(const Monoid& m, const std::optional<std::vector<EndSegment>>& filter_min = {})
{
    auto ids = idempotents(m);
    int n = m.num_classes();
    LadderEnumeration out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        Ladder g{m, {}};
        for (auto i : idx) g.values.push_back(ids[i]);
        bool keep = !filter_min || std::any_of(filter_min->begin(), filter_min->end(),
                                               [&](const EndSegment& s) { return s == g.values.back(); });
        if (keep) {
            auto v = ladder_check(g);
            if (v.ok)
                out.ladders.push_back(g);
            else
                out.rejected.emplace_back(g, v);
        }
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == ids.size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    auto rev_less = [&](const Ladder& a, const Ladder& b) {
        for (std::size_t i = a.values.size(); i-- > 0;) {
            auto c = seg_compare(m, a.values[i], b.values[i]);
            if (c != 0) return c < 0;
        }
        return false;
    };
    std::sort(out.ladders.begin(), out.ladders.end(), rev_less);
    return out;
}

// Label-based form of a constraint or target: g must satisfy d(g u, u') <= s.
struct Constraint {
    std::string u, u2;
    Distance s;
};

struct ContainmentWitness {
    FinSpace space;
    PartialMap map;                          // copy 1 -> copy 2
    Distance target_distance;                // d(map(v), w) in the witness, > r
    std::vector<std::string> problems;       // empty when every check passes
};

struct ContainmentResult {
    bool contained = false;
    std::optional<std::size_t> proof;         // index of the constraint giving the bound
    std::optional<Distance> proof_value;      // d(v,u) + s + d(u',w)
    bool r_is_max = false;                    // contained because r is the top of R
    std::optional<ContainmentWitness> witness;
};

// Is the intersection of N_{u,u'}(s) over the constraints inside N_{v,w}(r)?
inline ContainmentResult contains_basic(const FinSpace& y, const std::vector<Constraint>& xs, const Constraint& target)
{
    const Monoid& m = y.monoid();
    if (!is_valid(y)) throw std::invalid_argument("space is not a valid metric space");
    for (const auto& c : xs) {
        check_value(m, c.s);
        if (less(m, c.s, y.d(c.u, c.u2)))
            throw std::invalid_argument("constraint " + c.u + "," + c.u2 + " has radius below d(u,u')");
    }
    check_value(m, target.s);
    const std::string &v = target.u, &w = target.u2;
    const Distance& r = target.s;
    (void)y.index(v);
    (void)y.index(w);

    ContainmentResult out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Distance bound = oplus(m, oplus(m, y.d(v, xs[i].u), xs[i].s), y.d(xs[i].u2, w));
        if (leq(m, bound, r)) {
            out.contained = true;
            out.proof = i;
            out.proof_value = bound;
            return out;
        }
    }
    if (m.bounded() && r.x == m.bound) {
        out.contained = true;
        out.r_is_max = true;
        return out;
    }

    // Two copies of the involved points; copy 2 is the image side.
    std::vector<std::string> pts;
    auto push = [&](const std::string& p) {
        if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    };
    push(v);
    push(w);
    for (const auto& c : xs) {
        push(c.u);
        push(c.u2);
    }
    std::vector<Constraint> cs = xs;
    if (cs.empty()) {
        // A single loose constraint keeps the two copies at finite distance.
        Distance big = m.bounded() ? Distance(m.bound) : oplus(m, r, nmul(m, 2, far_value(m, {})));
        cs.push_back({v, v, big});
    }
    std::size_t q = pts.size();
    // cross[j][k] = d(u2_j, u1_k).
    std::vector<std::vector<Distance>> cross(q, std::vector<Distance>(q));
    for (std::size_t j = 0; j < q; ++j)
        for (std::size_t k = 0; k < q; ++k) {
            std::optional<Distance> best;
            for (const auto& c : cs) {
                Distance val = oplus(m, oplus(m, y.d(pts[j], c.u), c.s), y.d(c.u2, pts[k]));
                if (!best || less(m, val, *best)) best = val;
            }
            cross[j][k] = *best;
        }

    FinSpace z(m);
    std::vector<std::string> one(q), two(q);
    for (std::size_t j = 0; j < q; ++j) {
        std::vector<Distance> row;
        for (std::size_t k = 0; k < j; ++k) row.push_back(y.d(pts[j], pts[k]));
        one[j] = pts[j];
        z.add_point(one[j], row);
    }
    for (std::size_t j = 0; j < q; ++j) {
        if (cross[j][j] == Distance()) {
            two[j] = one[j];
            continue;
        }
        std::vector<Distance> row(z.size());
        for (std::size_t k = 0; k < q; ++k) row[z.index(one[k])] = cross[j][k];
        for (std::size_t k = 0; k < j; ++k)
            if (two[k] != one[k]) row[z.index(two[k])] = y.d(pts[j], pts[k]);
        two[j] = z.fresh_label(pts[j] + "'");
        z.add_point(two[j], row);
    }

    std::size_t iw = static_cast<std::size_t>(std::find(pts.begin(), pts.end(), w) - pts.begin());
    ContainmentWitness wit{z, {}, z.d(two[0], one[iw]), {}};
    for (std::size_t j = 0; j < q; ++j) wit.map.add(one[j], two[j]);
    auto viol = validate(z);
    if (!viol.empty()) wit.problems.push_back("witness space violates " + violation_name(viol.front().kind));
    if (!is_isometry(z, wit.map)) wit.problems.push_back("copy map is not an isometry");
    for (const auto& c : xs) {
        auto at = [&](const std::string& p) { return std::find(pts.begin(), pts.end(), p) - pts.begin(); };
        if (less(m, c.s, z.d(two[static_cast<std::size_t>(at(c.u))], one[static_cast<std::size_t>(at(c.u2))])))
            wit.problems.push_back("constraint " + c.u + "," + c.u2 + " not met");
    }
    if (!less(m, r, wit.target_distance)) wit.problems.push_back("target is not violated");
    out.witness = std::move(wit);
    return out;
}

} // namespace ury
