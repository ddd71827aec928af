#pragma once

// One-variable group words with named parameters, their evaluation on
// lazily built automorphisms, and the equation-avoidance construction:
// a finite partial automorphism f0 fixing B and a point a such that every
// automorphism extending f0 moves a under the word.

#include "fraisse.hpp"
#include "lazy.hpp"
#include "urysohn.hpp"

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ury {

struct Symbol {
    std::string name;
    int exp = 1;    // +1 or -1
    bool operator==(const Symbol&) const = default;
};

// A freely reduced product of parameters; empty is the identity.
using ConstProduct = std::vector<Symbol>;

// consts[0] x^exps[0] consts[1] ... x^exps[n-1] consts[n].
struct GroupWord {
    std::vector<ConstProduct> consts{ConstProduct{}};
    std::vector<int> exps;

    std::size_t occurrences() const { return exps.size(); }
    bool operator==(const GroupWord&) const = default;
};

struct Letter {
    bool is_x = false;
    int exp = 1;
    ConstProduct c;
};

inline ConstProduct free_reduce(const ConstProduct& p)
{
    ConstProduct out;
    for (const auto& s : p) {
        if (s.exp != 1 && s.exp != -1) throw std::invalid_argument("parameter exponents must be +1 or -1");
        if (!out.empty() && out.back().name == s.name && out.back().exp == -s.exp)
            out.pop_back();
        else
            out.push_back(s);
    }
    return out;
}

inline ConstProduct inverse(const ConstProduct& p)
{
    ConstProduct out;
    for (auto it = p.rbegin(); it != p.rend(); ++it) out.push_back({it->name, -it->exp});
    return out;
}

inline GroupWord from_letters(const std::vector<Letter>& letters)
{
    GroupWord w;
    for (const auto& l : letters) {
        if (l.is_x) {
            if (l.exp != 1 && l.exp != -1) throw std::invalid_argument("x exponents must be +1 or -1");
            w.exps.push_back(l.exp);
            w.consts.emplace_back();
        } else {
            auto& c = w.consts.back();
            c.insert(c.end(), l.c.begin(), l.c.end());
        }
    }
    for (auto& c : w.consts) c = free_reduce(c);
    return w;
}

inline std::vector<Letter> to_letters(const GroupWord& w)
{
    std::vector<Letter> out;
    for (std::size_t i = 0; i < w.consts.size(); ++i) {
        if (!w.consts[i].empty()) out.push_back({false, 1, w.consts[i]});
        if (i < w.exps.size()) out.push_back({true, w.exps[i], {}});
    }
    return out;
}

inline std::string format(const ConstProduct& p)
{
    std::string out;
    for (const auto& s : p) out += (out.empty() ? "" : " ") + s.name + (s.exp < 0 ? "^-1" : "");
    return out;
}

inline std::string format(const GroupWord& w)
{
    std::string out;
    for (const auto& l : to_letters(w)) {
        std::string t = l.is_x ? (l.exp < 0 ? "x^-1" : "x") : format(l.c);
        out += (out.empty() ? "" : " ") + t;
    }
    return out.empty() ? "1" : out;
}

// Whitespace-separated tokens: x, x^-1, name, name^-1, 1.
inline GroupWord parse_word(const std::string& text)
{
    std::istringstream in(text);
    std::vector<Letter> letters;
    std::string tok;
    while (in >> tok) {
        int exp = 1;
        if (tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
            exp = -1;
            tok.resize(tok.size() - 3);
        }
        if (tok == "1") continue;
        if (tok == "x")
            letters.push_back({true, exp, {}});
        else
            letters.push_back({false, 1, {{tok, exp}}});
    }
    return from_letters(letters);
}

struct ReducedWord {
    GroupWord word;
    bool trivial = false;     // the identity of G * <x>
    bool constant = false;    // no occurrence of x
};

// Free-reduces constants and cancels x^e 1 x^-e until nothing changes.
inline ReducedWord reduce_word(const GroupWord& w)
{
    GroupWord cur = w;
    for (auto& c : cur.consts) c = free_reduce(c);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < cur.exps.size(); ++i) {
            if (cur.exps[i] + cur.exps[i + 1] == 0 && cur.consts[i + 1].empty()) {
                ConstProduct merged = cur.consts[i];
                merged.insert(merged.end(), cur.consts[i + 2].begin(), cur.consts[i + 2].end());
                cur.consts.erase(cur.consts.begin() + static_cast<long>(i), cur.consts.begin() + static_cast<long>(i) + 3);
                cur.consts.insert(cur.consts.begin() + static_cast<long>(i), free_reduce(merged));
                cur.exps.erase(cur.exps.begin() + static_cast<long>(i), cur.exps.begin() + static_cast<long>(i) + 2);
                changed = true;
                break;
            }
        }
    }
    ReducedWord out;
    out.word = cur;
    out.constant = cur.exps.empty();
    out.trivial = out.constant && cur.consts[0].empty();
    return out;
}

// Removes the named parameters (known identities) and reduces again.
inline ReducedWord drop_parameters(const GroupWord& w, const std::vector<std::string>& names)
{
    GroupWord cur = w;
    for (auto& c : cur.consts) {
        ConstProduct kept;
        for (const auto& s : c)
            if (std::find(names.begin(), names.end(), s.name) == names.end()) kept.push_back(s);
        c = kept;
    }
    return reduce_word(cur);
}

// y -> x^-1 alpha in every word of the system.
inline std::vector<GroupWord> substitute_inverse_shift(const std::vector<GroupWord>& system, const std::string& alpha)
{
    std::vector<GroupWord> out;
    for (const auto& w : system) {
        std::vector<Letter> letters;
        for (const auto& l : to_letters(w)) {
            if (!l.is_x) {
                letters.push_back(l);
            } else if (l.exp == 1) {
                letters.push_back({true, -1, {}});
                letters.push_back({false, 1, {{alpha, 1}}});
            } else {
                letters.push_back({false, 1, {{alpha, -1}}});
                letters.push_back({true, 1, {}});
            }
        }
        out.push_back(reduce_word(from_letters(letters)).word);
    }
    return out;
}

// Raised when a finite partial map cannot answer an application.
struct Unresolvable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A point map with its inverse: x^{+1} and x^{-1}.
using Applier = std::function<PointId(PointId, int)>;

inline Applier partial_applier(const PointMap& f)
{
    return [f](PointId p, int e) {
        auto y = e > 0 ? f.image(p) : f.preimage(p);
        if (!y) throw Unresolvable("point " + std::to_string(p) + " outside the partial map");
        return *y;
    };
}

template <class S>
Applier lazy_applier(LazyAutomorphism<S>& g)
{
    return [&g](PointId p, int e) { return e > 0 ? g.apply(p) : g.apply_inverse(p); };
}

using ParamTable = std::map<std::string, Applier>;

inline PointId apply_const(const ConstProduct& c, const ParamTable& params, PointId p, int e = 1)
{
    auto one = [&](const Symbol& s, int sign) {
        auto it = params.find(s.name);
        if (it == params.end()) throw std::invalid_argument("unknown parameter " + s.name);
        p = it->second(p, s.exp * sign);
    };
    if (e > 0)
        for (auto it = c.rbegin(); it != c.rend(); ++it) one(*it, 1);
    else
        for (const auto& s : c) one(s, -1);
    return p;
}

// Right-to-left evaluation of w(x) at point p.
inline PointId eval_word(const GroupWord& w, const Applier& x, const ParamTable& params, PointId p)
{
    std::size_t n = w.exps.size();
    p = apply_const(w.consts[n], params, p);
    for (std::size_t k = n; k-- > 0;) {
        p = x(p, w.exps[k]);
        p = apply_const(w.consts[k], params, p);
    }
    return p;
}

// ---- structure hooks -------------------------------------------------------

// A new point with no relations to B (graphs), pointing at B (tournaments),
// or far from B (metric).
inline PointId fresh_point(LimitSession& s, const Tuple& b)
{
    return s.realize(b, std::vector<int>(b.size(), 0));
}

inline PointId fresh_point(UrysohnSession& s, const Tuple& b)
{
    std::vector<Distance> pair_d;
    for (PointId p : b)
        for (PointId q : b) pair_d.push_back(s.d(p, q));
    Distance far = far_value(s.monoid(), pair_d);
    return s.realize_free(b, std::vector<Distance>(b.size(), far));
}

// A new point realizing the type of c over dom(m), transported to range(m).
// Goes through the recorded realize calls so transcripts replay.
inline PointId transported_point(LimitSession& s, const PointMap& m, PointId c)
{
    std::vector<PointId> base;
    std::vector<int> rels;
    for (const auto& [a, b] : m.pairs()) {
        base.push_back(b);
        rels.push_back(s.edge(c, a) ? 1 : 0);
    }
    return s.realize(base, rels);
}

inline PointId transported_point(UrysohnSession& s, const PointMap& m, PointId c)
{
    std::vector<PointId> base;
    std::vector<Distance> dists;
    for (const auto& [a, b] : m.pairs()) {
        base.push_back(b);
        dists.push_back(s.d(c, a));
    }
    return s.realize_free(base, dists);
}

// Same as transported_point, additionally related differently to s1 and s2; no automorphism sending s1 to s2
// can fix it.
inline std::optional<PointId> separating_point(LimitSession& s, const PointMap& m, PointId c, PointId s1, PointId s2)
{
    std::vector<PointId> base;
    std::vector<int> rels;
    for (const auto& [a, b] : m.pairs()) {
        base.push_back(b);
        rels.push_back(s.edge(c, a) ? 1 : 0);
    }
    // graphs: e ~ s1, e !~ s2. tournaments: e -> s1, s2 -> e.
    base.push_back(s1);
    rels.push_back(1);
    base.push_back(s2);
    rels.push_back(0);
    return s.realize(base, rels);
}

inline std::optional<PointId> separating_point(UrysohnSession& s, const PointMap& m, PointId c, PointId s1, PointId s2)
{
    const Monoid& mo = s.monoid();
    std::vector<PointId> base;
    std::vector<Distance> dists;
    for (const auto& [a, b] : m.pairs()) {
        base.push_back(b);
        dists.push_back(s.d(c, a));
    }
    // Candidate distances to s1 and s2: interval ends of each Katetov
    // constraint, their midpoints, and a few multiples of d(s1,s2).
    std::vector<Distance> cands;
    auto add = [&](const Distance& v) {
        if (valid_value(mo, v) && !(v == Distance()) &&
            std::find(cands.begin(), cands.end(), v) == cands.end())
            cands.push_back(v);
    };
    Distance gap = s.d(s1, s2);
    for (std::size_t i = 0; i < base.size(); ++i)
        for (PointId t : {s1, s2}) {
            add(oplus(mo, dists[i], s.d(base[i], t)));
            Distance lo;
            if (difference(mo, dists[i], s.d(base[i], t), lo) || difference(mo, s.d(base[i], t), dists[i], lo)) add(lo);
        }
    std::size_t ends = cands.size();
    if (mo.dense()) {
        for (std::size_t i = 0; i < ends; ++i)
            for (std::size_t j = 0; j < ends; ++j) add(half(mo, oplus(mo, cands[i], cands[j])));
        for (int k = 1; k <= 4; ++k) add(nmul(mo, static_cast<std::uint64_t>(k), half(mo, gap)));
    } else {
        for (std::size_t i = 0; i < ends; ++i)
            for (std::uint64_t k = 1; k <= 2; ++k) {
                add(oplus(mo, cands[i], Distance(Rational(k))));
                Distance lo;
                if (difference(mo, cands[i], Distance(Rational(k)), lo)) add(lo);
            }
        for (int k = 1; k <= 4; ++k) add(nmul(mo, static_cast<std::uint64_t>(k), gap));
    }
    add(far_value(mo, dists));
    for (const auto& t1 : cands)
        for (const auto& t2 : cands) {
            if (t1 == t2) continue;
            auto b2 = base;
            auto d2 = dists;
            b2.push_back(s1);
            d2.push_back(t1);
            b2.push_back(s2);
            d2.push_back(t2);
            try {
                s.check_vector(b2, d2);
            } catch (const std::invalid_argument&) {
                continue;
            }
            return s.realize_free(b2, d2);
        }
    return std::nullopt;
}

// ---- the avoidance engine --------------------------------------------------

struct ConstMap {
    ConstProduct product;
    const ParamTable* params = nullptr;
    bool identity() const { return product.empty(); }
    PointId operator()(PointId p) const { return apply_const(product, *params, p, 1); }
    PointId inverse(PointId p) const { return apply_const(product, *params, p, -1); }
};

// A realization e of the type of c over dom(m), transported by m, with
// alpha(e) outside range(m) and different from e. Points s with s != alpha(s)
// serve as anchors; e is related differently to s and alpha(s).
template <class S>
PointId strongly_unbounded_step(S& s, const ConstMap& alpha, const PointMap& m, PointId c, std::size_t attempts = 64)
{
    if (alpha.identity()) throw std::invalid_argument("identity parameter cannot move points");
    Tuple a = m.range();
    auto in_a = [&](PointId p) { return std::find(a.begin(), a.end(), p) != a.end(); };
    std::size_t tried = 0;
    PointId next_existing = 0;
    while (tried < attempts) {
        PointId s1;
        if (next_existing < s.size()) {
            s1 = next_existing++;
        } else {
            s1 = fresh_point(s, a);
        }
        if (in_a(s1)) continue;
        ++tried;
        PointId s2 = alpha(s1);
        if (s2 == s1 || in_a(s2)) continue;
        auto e = separating_point(s, m, c, s1, s2);
        if (!e) continue;
        PointId ae = alpha(*e);
        if (ae != *e && !in_a(ae)) return *e;
    }
    throw std::runtime_error("no moved point found; the parameter looks like the identity at this depth");
}

struct AuditStep {
    std::size_t k = 0;
    PointId c = 0;
    std::vector<PointId> forbidden;   // dom(f_k^{eps_{k-1}})
    bool ok = false;
};

struct AvoidResult {
    PointMap f0;
    PointId a = 0;
    PointId c0 = 0;                   // w(beta)(a) for every beta extending f0
    std::vector<AuditStep> audit;
    std::vector<PointId> chain_c;     // c_n, ..., c_0
    std::size_t verified = 0;         // sampled extensions checked
    std::size_t param_support = 0;    // total size of the parameter maps afterwards
    ReducedWord reduced;
};

struct AvoidOptions {
    std::size_t samples = 20;
    std::uint64_t seed = 1;
    std::size_t attempts = 64;
};

// params: applier per parameter name; identity_params: names known to be 1.
template <class S>
AvoidResult avoid_equation(S& s, const GroupWord& w, const Tuple& b, const ParamTable& params,
                           const std::vector<std::string>& identity_params, AvoidOptions opt = {},
                           std::function<std::size_t()> support = {})
{
    AvoidResult out;
    out.reduced = drop_parameters(w, identity_params);
    if (out.reduced.trivial) throw std::invalid_argument("the word is trivial");
    const GroupWord& rw = out.reduced.word;
    std::size_t n = rw.exps.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (rw.exps[i] + rw.exps[i + 1] == 0 && rw.consts[i + 1].empty())
            throw std::logic_error("word is not reduced");
    auto cm = [&](std::size_t k) { return ConstMap{rw.consts[k], &params}; };

    PointMap f = PointMap::identity(b);
    auto in = [](const Tuple& t, PointId p) { return std::find(t.begin(), t.end(), p) != t.end(); };

    // a with c_n = alpha_n(a) outside B.
    PointId a = 0, c = 0;
    bool found = false;
    for (std::size_t t = 0; t < opt.attempts && !found; ++t) {
        a = fresh_point(s, b);
        c = cm(n)(a);
        found = !in(b, c) && (n > 0 || c != a);
    }
    if (!found) throw std::runtime_error("could not place the starting point");
    out.a = a;
    out.chain_c.push_back(c);
    if (n == 0) {
        out.f0 = f;
        out.c0 = c;
    }

    for (std::size_t k = n; k-- > 0;) {
        int eps = rw.exps[k];
        PointMap m = eps > 0 ? f : f.inverse();
        if (m.in_domain(c)) throw std::logic_error("c_{k+1} already in the domain");
        ConstMap alpha = cm(k);
        PointId e = 0;
        bool ok = false;
        if (k > 0 && rw.exps[k - 1] == -eps) {
            e = strongly_unbounded_step(s, alpha, m, c, opt.attempts);
            ok = true;
        } else {
            Tuple forbid = m.domain();
            forbid.push_back(c);
            for (std::size_t t = 0; t < opt.attempts && !ok; ++t) {
                e = transported_point(s, m, c);
                PointId ae = alpha(e);
                ok = k > 0 ? !in(forbid, ae) : ae != a;
            }
        }
        if (!ok) throw std::runtime_error("no admissible realization found at step " + std::to_string(k));
        m.add(c, e);
        f = eps > 0 ? m : m.inverse();
        c = alpha(e);
        out.chain_c.push_back(c);
        if (k > 0) {
            PointMap prev = rw.exps[k - 1] > 0 ? f : f.inverse();
            AuditStep st{k, c, prev.domain(), !prev.in_domain(c)};
            out.audit.push_back(st);
        }
    }
    if (n > 0) {
        out.f0 = f;
        out.c0 = c;
    }
    if (out.c0 == a) throw std::logic_error("construction returned a fixed point");
    if (!s.tuples_iso(out.f0.domain(), out.f0.range())) throw std::logic_error("f0 is not a partial isomorphism");

    for (std::size_t i = 0; i < opt.samples; ++i) {
        LazyAutomorphism<S> beta(s, Policy::generic, opt.seed * 7919 + i, out.f0);
        PointId got = eval_word(rw, lazy_applier(beta), params, a);
        if (got == a) throw std::logic_error("a sampled extension solves the equation");
        ++out.verified;
    }
    if (support) out.param_support = support();
    return out;
}

} // namespace ury
