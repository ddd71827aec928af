#pragma once

// Finite relational structures, free amalgamation, lazily built limits of
// graphs and tournaments, ND one-point extensions and product classes.

#include "fin_space.hpp"
#include "hrushovski.hpp"
#include "lazy.hpp"
#include "rel_structure.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ury {

struct ClassDescriptor {
    enum class Kind { graphs, tournaments, metric, hypergraph };
    Kind kind = Kind::graphs;
    int s = 2;                  // hypergraph edge size
    Rational eta = 1;           // hypergraph weight, in (0,1]

    static ClassDescriptor graphs() { return {Kind::graphs, 2, 1}; }
    static ClassDescriptor tournaments() { return {Kind::tournaments, 2, 1}; }
    static ClassDescriptor metric() { return {Kind::metric, 2, 1}; }
    static ClassDescriptor hypergraph(int s, Rational eta)
    {
        if (s < 2) throw std::invalid_argument("hyperedges need at least two points");
        if (eta <= 0 || eta > 1) throw std::invalid_argument("eta must lie in (0,1]");
        return {Kind::hypergraph, s, std::move(eta)};
    }
};

inline std::string class_kind_name(ClassDescriptor::Kind k)
{
    switch (k) {
    case ClassDescriptor::Kind::graphs: return "graphs";
    case ClassDescriptor::Kind::tournaments: return "tournaments";
    case ClassDescriptor::Kind::metric: return "metric";
    case ClassDescriptor::Kind::hypergraph: return "hypergraph";
    }
    return "?";
}

inline ClassDescriptor::Kind parse_class_kind(const std::string& s)
{
    if (s == "graphs" || s == "graph") return ClassDescriptor::Kind::graphs;
    if (s == "tournaments" || s == "tournament") return ClassDescriptor::Kind::tournaments;
    if (s == "metric") return ClassDescriptor::Kind::metric;
    if (s == "hypergraph") return ClassDescriptor::Kind::hypergraph;
    throw std::invalid_argument("unknown class kind " + s);
}


// Reasons h is not in the class; empty when it is.
inline std::vector<std::string> class_violations(const ClassDescriptor& cls, const RelStructure& h,
                                                 std::size_t cap = 20)
{
    using K = ClassDescriptor::Kind;
    std::vector<std::string> out;
    if (cls.kind == K::metric) throw std::invalid_argument("metric class members are FinSpaces");
    if (h.signature().size() != 1) {
        out.push_back("expected exactly one relation");
        return out;
    }
    const auto& [name, arity] = h.signature()[0];
    int want = cls.kind == K::hypergraph ? cls.s : 2;
    if (arity != want) {
        out.push_back("relation " + name + " has arity " + std::to_string(arity));
        return out;
    }
    for (const auto& t : h.tuples(name)) {
        std::set<std::string> distinct(t.begin(), t.end());
        if (distinct.size() != t.size()) out.push_back("reflexive tuple in " + name);
    }
    if (cls.kind == K::graphs) {
        for (const auto& t : h.tuples(name))
            if (!h.holds(name, {t[1], t[0]})) out.push_back("edge " + t[0] + "-" + t[1] + " not symmetric");
    } else if (cls.kind == K::tournaments) {
        const auto& pts = h.points();
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                int n = h.holds(name, {pts[i], pts[j]}) + h.holds(name, {pts[j], pts[i]});
                if (n != 1) out.push_back("pair " + pts[i] + "," + pts[j] + " has " + std::to_string(n) + " arcs");
            }
    } else {
        for (const auto& t : h.tuples(name)) {
            RelTuple u = t;
            std::sort(u.begin(), u.end());
            do
                if (!h.holds(name, u)) {
                    out.push_back("hyperedge not permutation invariant");
                    break;
                }
            while (std::next_permutation(u.begin(), u.end()));
        }
        if (out.empty()) {
            auto more = hypergraph_violations(h, cls.eta, cap);
            out.insert(out.end(), more.begin(), more.end());
        }
    }
    return out;
}

inline bool is_member(const ClassDescriptor& cls, const RelStructure& h) { return class_violations(cls, h).empty(); }

struct FreeAmalgam {
    RelStructure structure;
    std::map<std::string, std::string> c_map;   // points of c -> points of the amalgam
    std::vector<std::string> violations;        // class membership of the result
    bool member() const { return violations.empty(); }
};

// b and c glued along glue (points of c -> points of b); a relation holds
// exactly when it held in b or in c.
inline FreeAmalgam free_amalgam(const RelStructure& b, const RelStructure& c, const Bijection<std::string>& glue,
                                const ClassDescriptor& cls)
{
    if (b.signature() != c.signature()) throw std::invalid_argument("structures have different signatures");
    for (const auto& [x, y] : glue.pairs())
        if (!c.has_point(x) || !b.has_point(y)) throw std::invalid_argument("glue names unknown points");
    auto cdom = glue.domain();
    auto bimg = glue.range();
    for (const auto& [name, arity] : c.signature()) {
        (void)arity;
        auto ca = c.induced(cdom), ba = b.induced(bimg);
        for (const auto& t : ca.tuples(name)) {
            RelTuple u;
            for (const auto& p : t) u.push_back(glue.at(p));
            if (!ba.holds(name, u)) throw std::invalid_argument("glue is not an isomorphism of the common part");
        }
        for (const auto& t : ba.tuples(name)) {
            RelTuple u;
            for (const auto& p : t) u.push_back(*glue.preimage(p));
            if (!ca.holds(name, u)) throw std::invalid_argument("glue is not an isomorphism of the common part");
        }
    }

    FreeAmalgam out;
    out.structure = b;
    for (const auto& p : c.points()) {
        if (auto g = glue.image(p)) {
            out.c_map[p] = *g;
            continue;
        }
        std::string label = p;
        for (int k = 1; out.structure.has_point(label); ++k) label = p + "_" + std::to_string(k);
        out.structure.add_point(label);
        out.c_map[p] = label;
    }
    for (const auto& [name, arity] : c.signature()) {
        (void)arity;
        for (const auto& t : c.tuples(name)) {
            RelTuple u;
            for (const auto& p : t) u.push_back(out.c_map.at(p));
            out.structure.add_tuple(name, u);
        }
    }
    if (cls.kind != ClassDescriptor::Kind::metric) out.violations = class_violations(cls, out.structure);
    return out;
}

// Union of two structures on the same points with disjoint signatures.
inline RelStructure product_structure(const RelStructure& s1, const RelStructure& s2)
{
    std::set<std::string> p1(s1.points().begin(), s1.points().end()), p2(s2.points().begin(), s2.points().end());
    if (p1 != p2) throw std::invalid_argument("structures live on different point sets");
    auto sig = s1.signature();
    for (const auto& r : s2.signature()) {
        for (const auto& q : sig)
            if (q.first == r.first) throw std::invalid_argument("signature clash on " + r.first);
        sig.push_back(r);
    }
    RelStructure out(sig);
    for (const auto& p : s1.points()) out.add_point(p);
    for (const auto* s : {&s1, &s2})
        for (const auto& [name, arity] : s->signature()) {
            (void)arity;
            for (const auto& t : s->tuples(name)) out.add_tuple(name, t);
        }
    return out;
}

inline RelStructure reduct(const RelStructure& s, const std::vector<std::string>& names)
{
    std::vector<std::pair<std::string, int>> sig;
    for (const auto& n : names) sig.emplace_back(n, s.arity(n));
    RelStructure out(sig);
    for (const auto& p : s.points()) out.add_point(p);
    for (const auto& n : names)
        for (const auto& t : s.tuples(n)) out.add_tuple(n, t);
    return out;
}

// Lazily built limit of finite graphs or tournaments. A fresh point gets
// its prescribed relations to the base; graphs add no others, tournaments
// orient the remaining pairs by the seeded generator.
class LimitSession {
public:
    enum class Kind { graph, tournament };
    using Point = PointId;

    struct Event {
        enum class Op { realize, extend };
        Op op = Op::realize;
        std::vector<std::pair<PointId, PointId>> map;   // extend
        PointId x = 0;
        bool inverse = false;
        std::vector<int> row;     // relations of a fresh point to all earlier points; empty when reused
        PointId result = 0;
    };

    LimitSession(Kind kind, std::uint64_t seed) : kind_(kind), seed_(seed), rng_(seed) {}

    Kind kind() const { return kind_; }
    std::size_t size() const { return arcs_.size(); }
    std::uint64_t seed() const { return seed_; }
    const std::vector<Event>& transcript() const { return events_; }

    // x -> y for tournaments, adjacency for graphs.
    bool edge(PointId x, PointId y) const
    {
        if (x == y) return false;
        if (x > y) return arcs_[x][y] == 1;
        return kind_ == Kind::graph ? arcs_[y][x] == 1 : arcs_[y][x] == 0;
    }

    // rels[i]: graphs 1 = adjacent; tournaments 1 = new -> base[i].
    PointId realize(const std::vector<PointId>& base, const std::vector<int>& rels)
    {
        if (base.size() != rels.size()) throw std::invalid_argument("relation vector size mismatch");
        for (PointId b : base)
            if (b >= size()) throw std::invalid_argument("base point outside the session");
        std::vector<int> row = fill_row(base, rels);
        PointId p = append(row);
        Event e;
        e.op = Event::Op::realize;
        e.row = std::move(row);
        e.result = p;
        events_.push_back(std::move(e));
        return p;
    }

    std::vector<PointId> matches(const PointMap& p, PointId x, bool inverse) const
    {
        std::vector<PointId> out;
        for (PointId y = 0; y < size(); ++y) {
            if (inverse ? p.in_domain(y) : p.in_range(y)) continue;
            bool ok = true;
            for (const auto& [a, b] : p.pairs()) {
                PointId src = inverse ? b : a, dst = inverse ? a : b;
                if (y == dst || edge(y, dst) != edge(x, src) || edge(dst, y) != edge(src, x)) {
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
        std::vector<int> rels;
        for (const auto& [a, b] : p.pairs()) {
            base.push_back(inverse ? a : b);
            rels.push_back(edge(x, inverse ? b : a) ? 1 : 0);
        }
        last_row_ = fill_row(base, rels);
        return append(last_row_);
    }

    template <class Rng>
    PointId fresh_near(PointId x, Rng& rng)
    {
        int bit = static_cast<int>(rng() & 1u);
        return realize({x}, {bit});
    }

    void note_extend(const PointMap& p, PointId x, bool inverse, PointId y)
    {
        Event e;
        e.op = Event::Op::extend;
        e.map = p.pairs();
        e.x = x;
        e.inverse = inverse;
        if (y + 1 == size() && !last_row_.empty() && last_row_.size() == y) e.row = last_row_;
        last_row_.clear();
        e.result = y;
        events_.push_back(std::move(e));
    }

    bool tuples_iso(const Tuple& x, const Tuple& y) const
    {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < x.size(); ++j) {
                if ((x[i] == x[j]) != (y[i] == y[j])) return false;
                if (edge(x[i], x[j]) != edge(y[i], y[j])) return false;
            }
        return true;
    }

    Tuple copy_free(const Tuple& x, const Tuple& fixed)
    {
        Tuple out;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (std::find(fixed.begin(), fixed.end(), x[i]) != fixed.end()) {
                out.push_back(x[i]);
                continue;
            }
            auto dup = std::find(x.begin(), x.begin() + static_cast<long>(i), x[i]);
            if (dup != x.begin() + static_cast<long>(i)) {
                out.push_back(out[static_cast<std::size_t>(dup - x.begin())]);
                continue;
            }
            std::vector<PointId> base;
            std::vector<int> rels;
            for (PointId f : fixed) {
                base.push_back(f);
                rels.push_back(edge(x[i], f));
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (std::find(base.begin(), base.end(), out[j]) != base.end()) continue;
                base.push_back(out[j]);
                rels.push_back(edge(x[i], x[j]));
            }
            out.push_back(realize(base, rels));
        }
        return out;
    }

    RelStructure to_structure() const
    {
        RelStructure out = graph_structure();
        for (PointId p = 0; p < size(); ++p) out.add_point(label(p));
        for (PointId p = 0; p < size(); ++p)
            for (PointId q = 0; q < size(); ++q)
                if (edge(p, q)) out.add_tuple("E", {label(p), label(q)});
        return out;
    }

    static std::string label(PointId p) { return "p" + std::to_string(p); }

    static LimitSession replay(Kind kind, std::uint64_t seed, const std::vector<Event>& events)
    {
        LimitSession s(kind, seed);
        for (const auto& e : events) {
            PointId got;
            if (e.op == Event::Op::realize) {
                got = s.append(e.row);
                s.events_.push_back(e);
            } else {
                PointMap p(e.map);
                if (!e.row.empty()) {
                    got = s.append(e.row);
                } else {
                    auto c = s.matches(p, e.x, e.inverse);
                    if (std::find(c.begin(), c.end(), e.result) == c.end())
                        throw std::runtime_error("transcript extend step does not match the replayed structure");
                    got = e.result;
                }
                s.events_.push_back(e);
            }
            if (got != e.result) throw std::runtime_error("transcript diverged");
        }
        return s;
    }

private:
    std::vector<int> fill_row(const std::vector<PointId>& base, const std::vector<int>& rels)
    {
        std::vector<int> row(size(), -1);
        for (std::size_t i = 0; i < base.size(); ++i) {
            int v = rels[i] ? 1 : 0;
            if (row[base[i]] != -1 && row[base[i]] != v) throw std::invalid_argument("conflicting relations to one point");
            row[base[i]] = v;
        }
        for (auto& v : row)
            if (v == -1) v = kind_ == Kind::graph ? 0 : static_cast<int>(rng_() & 1u);
        return row;
    }

    PointId append(const std::vector<int>& row)
    {
        if (row.size() != size()) throw std::invalid_argument("relation row has the wrong length");
        arcs_.push_back(row);
        return arcs_.size() - 1;
    }

    Kind kind_;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
    // arcs_[x][y] for y < x: graphs 1 = adjacent; tournaments 1 = x -> y.
    std::vector<std::vector<int>> arcs_;
    std::vector<int> last_row_;
    std::vector<Event> events_;
};

// Extends an embedding of part of b into the limit to all of b.
inline std::map<std::string, PointId> limit_realize(LimitSession& s, const RelStructure& b,
                                                     std::map<std::string, PointId> emb)
{
    auto cls = s.kind() == LimitSession::Kind::graph ? ClassDescriptor::graphs() : ClassDescriptor::tournaments();
    auto bad = class_violations(cls, b);
    if (!bad.empty()) throw std::invalid_argument("structure not in class: " + bad.front());
    const std::string& rel = b.signature()[0].first;
    for (const auto& [p, x] : emb) {
        if (!b.has_point(p)) throw std::invalid_argument("embedding names unknown point " + p);
        if (x >= s.size()) throw std::invalid_argument("embedding names a point outside the session");
        for (const auto& [q, y] : emb)
            if (p != q && (x == y || b.holds(rel, {p, q}) != s.edge(x, y)))
                throw std::invalid_argument("given map is not an embedding");
    }
    for (const auto& p : b.points()) {
        if (emb.count(p)) continue;
        std::vector<PointId> base;
        std::vector<int> rels;
        for (const auto& [q, y] : emb) {
            base.push_back(y);
            rels.push_back(b.holds(rel, {p, q}) ? 1 : 0);
        }
        emb[p] = s.realize(base, rels);
    }
    return emb;
}

struct NdExtension {
    std::string point;            // the new point b
    std::string formula;          // positive formula phi(x, b) true at a1, false at a2
    std::optional<RelStructure> structure;
    std::optional<FinSpace> space;
    bool separates = false;       // re-checked on the result
};

// Graphs: b adjacent to a1 only. Tournaments: b -> a1, a2 -> b, and every
// other point of a points at b.
inline NdExtension nd_extension(const ClassDescriptor& cls, const RelStructure& a, const std::string& a1,
                                const std::string& a2)
{
    using K = ClassDescriptor::Kind;
    if (cls.kind != K::graphs && cls.kind != K::tournaments)
        throw std::invalid_argument("ND extension not supported for kind " + class_kind_name(cls.kind));
    if (a1 == a2) throw std::invalid_argument("a1 and a2 must differ");
    if (!a.has_point(a1) || !a.has_point(a2)) throw std::invalid_argument("a1, a2 must be points of A");
    auto bad = class_violations(cls, a);
    if (!bad.empty()) throw std::invalid_argument("A not in class: " + bad.front());
    const std::string& rel = a.signature()[0].first;
    RelStructure out = a;
    std::string b = "b";
    for (int k = 1; out.has_point(b); ++k) b = "b_" + std::to_string(k);
    out.add_point(b);
    NdExtension nd;
    nd.point = b;
    if (cls.kind == K::graphs) {
        out.add_tuple(rel, {b, a1});
        out.add_tuple(rel, {a1, b});
        nd.formula = rel + "(x," + b + ")";
        nd.separates = out.holds(rel, {a1, b}) && !out.holds(rel, {a2, b});
    } else {
        for (const auto& p : a.points()) {
            if (p == a1)
                out.add_tuple(rel, {b, p});
            else
                out.add_tuple(rel, {p, b});
        }
        nd.formula = rel + "(" + b + ",x)";
        nd.separates = out.holds(rel, {b, a1}) && !out.holds(rel, {b, a2});
    }
    if (!class_violations(cls, out).empty()) throw std::logic_error("ND extension left the class");
    nd.structure = std::move(out);
    return nd;
}

// Metric: d(a1,b) = q/2, d(a2,b) = q/2 + eps with q = d(a1,a2), freely
// amalgamated with A over {a1, a2}. eps defaults to q/4 and must not exceed q/2.
inline NdExtension nd_extension(const FinSpace& a, const std::string& a1, const std::string& a2,
                                std::optional<Distance> eps = std::nullopt)
{
    const Monoid& m = a.monoid();
    if (!m.dense()) throw std::invalid_argument("ND extension needs a monoid where q/2 exists");
    if (a1 == a2) throw std::invalid_argument("a1 and a2 must differ");
    if (!is_valid(a)) throw std::invalid_argument("A is not a valid metric space");
    Distance q = a.d(a1, a2);
    Distance h = half(m, q);
    Distance e = eps ? *eps : half(m, h);
    if (e == Distance() || less(m, h, e)) throw std::invalid_argument("eps must lie in (0, q/2]");
    Distance far = oplus(m, h, e);

    FinSpace small(m, {a1, a2, "b"}, {{Distance(), q, h}, {q, Distance(), far}, {h, far, Distance()}});
    if (!is_valid(small)) throw std::invalid_argument("three-point extension is not metric");
    PartialMap glue;
    glue.add(a1, a1);
    glue.add(a2, a2);
    auto am = amalgamate(a, small, glue);
    NdExtension nd;
    nd.point = am.b_map.at("b");
    nd.formula = "R_" + format(m, h) + "(x," + nd.point + ")";
    nd.separates = leq(m, am.space.d(a1, nd.point), h) && less(m, h, am.space.d(a2, nd.point));
    nd.space = std::move(am.space);
    return nd;
}

} // namespace ury
