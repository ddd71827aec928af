#pragma once

// Exact distance monoids: rational, truncated rational, integer,
// lexicographic pairs and the quadratic extension Q + Q*sqrt(n).

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ury {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational parse_rational(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        return s;
    };
    auto parse_int = [](std::string_view s) {
        if (s.empty()) throw std::invalid_argument("empty integer");
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw std::invalid_argument("bad integer: " + std::string(s));
        for (std::size_t j = i; j < s.size(); ++j)
            if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("bad integer: " + std::string(s));
        return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
    };
    text = trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    Integer den = parse_int(trim(text.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(parse_int(trim(text.substr(0, slash))), den);
}

inline std::string format_rational(const Rational& q)
{
    auto num = boost::multiprecision::numerator(q);
    auto den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline bool is_integral(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

enum class Kind { rational, rational_truncated, integer, lex_pair, quad_ext };

struct Monoid {
    Kind kind = Kind::rational;
    Rational bound = 0;    // rational_truncated only
    long radicand = 2;     // quad_ext only: the tag a stands for sqrt(radicand)

    static Monoid rational() { return {}; }
    static Monoid truncated(Rational b)
    {
        if (b <= 0) throw std::invalid_argument("truncation bound must be positive");
        Monoid m;
        m.kind = Kind::rational_truncated;
        m.bound = std::move(b);
        return m;
    }
    static Monoid integer()
    {
        Monoid m;
        m.kind = Kind::integer;
        return m;
    }
    static Monoid lex_pair()
    {
        Monoid m;
        m.kind = Kind::lex_pair;
        return m;
    }
    static Monoid quad_ext(long n = 2)
    {
        if (n < 2) throw std::invalid_argument("radicand must be at least 2");
        for (long k = 1; k * k <= n; ++k)
            if (k * k == n) throw std::invalid_argument("radicand must not be a perfect square");
        Monoid m;
        m.kind = Kind::quad_ext;
        m.radicand = n;
        return m;
    }

    bool operator==(const Monoid&) const = default;

    // Archimedean classes including {0}.
    int num_classes() const { return kind == Kind::lex_pair ? 3 : 2; }
    // Subgroup-based monoids without a minimal positive element.
    bool standard() const
    {
        return kind == Kind::rational || kind == Kind::rational_truncated || kind == Kind::lex_pair;
    }
    bool dense() const { return kind != Kind::integer; }
    bool bounded() const { return kind == Kind::rational_truncated; }
};

inline std::string kind_name(Kind k)
{
    switch (k) {
    case Kind::rational: return "rational";
    case Kind::rational_truncated: return "rational_truncated";
    case Kind::integer: return "integer";
    case Kind::lex_pair: return "lex_pair";
    case Kind::quad_ext: return "quad_ext";
    }
    return "?";
}

// Scalar kinds use x only. lex_pair is (x, y) ordered lexicographically;
// quad_ext is x + y*sqrt(radicand).
struct Distance {
    Rational x = 0;
    Rational y = 0;

    Distance() = default;
    Distance(Rational a) : x(std::move(a)) {}
    Distance(Rational a, Rational b) : x(std::move(a)), y(std::move(b)) {}
    Distance(int a) : x(a) {}

    bool operator==(const Distance&) const = default;
};

inline bool valid_value(const Monoid& m, const Distance& d)
{
    switch (m.kind) {
    case Kind::rational: return d.y == 0 && d.x >= 0;
    case Kind::rational_truncated: return d.y == 0 && d.x >= 0 && d.x <= m.bound;
    case Kind::integer: return d.y == 0 && d.x >= 0 && is_integral(d.x);
    case Kind::lex_pair: return d.x > 0 || (d.x == 0 && d.y >= 0);
    case Kind::quad_ext: return d.x >= 0 && d.y >= 0;
    }
    return false;
}

inline std::string format(const Monoid& m, const Distance& d)
{
    switch (m.kind) {
    case Kind::lex_pair: return "(" + format_rational(d.x) + "," + format_rational(d.y) + ")";
    case Kind::quad_ext:
        if (d.y == 0) return format_rational(d.x);
        return format_rational(d.x) + "+" + format_rational(d.y) + "a";
    default: return format_rational(d.x);
    }
}

inline void check_value(const Monoid& m, const Distance& d)
{
    if (!valid_value(m, d))
        throw std::invalid_argument("value " + format(m, d) + " is not an element of the " + kind_name(m.kind) +
                                    " monoid");
}

// Sign of u + v*sqrt(n), decided on rationals.
inline int quad_sign(const Rational& u, const Rational& v, long n)
{
    int su = u.sign(), sv = v.sign();
    if (su >= 0 && sv >= 0) return (su > 0 || sv > 0) ? 1 : 0;
    if (su <= 0 && sv <= 0) return -1;
    Rational uu = u * u, vv = v * v * n;
    if (su > 0) return uu > vv ? 1 : -1;
    return vv > uu ? 1 : -1;
}

inline std::strong_ordering compare(const Monoid& m, const Distance& a, const Distance& b)
{
    auto cmp = [](const Rational& p, const Rational& q) {
        if (p < q) return std::strong_ordering::less;
        if (q < p) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    };
    switch (m.kind) {
    case Kind::lex_pair: {
        auto c = cmp(a.x, b.x);
        return c != 0 ? c : cmp(a.y, b.y);
    }
    case Kind::quad_ext: {
        int s = quad_sign(a.x - b.x, a.y - b.y, m.radicand);
        return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
    default: return cmp(a.x, b.x);
    }
}

inline bool leq(const Monoid& m, const Distance& a, const Distance& b) { return compare(m, a, b) <= 0; }
inline bool less(const Monoid& m, const Distance& a, const Distance& b) { return compare(m, a, b) < 0; }
inline const Distance& dmin(const Monoid& m, const Distance& a, const Distance& b) { return leq(m, a, b) ? a : b; }
inline const Distance& dmax(const Monoid& m, const Distance& a, const Distance& b) { return leq(m, a, b) ? b : a; }

inline Distance oplus(const Monoid& m, const Distance& a, const Distance& b)
{
    Distance s(a.x + b.x, a.y + b.y);
    if (m.kind == Kind::rational_truncated && s.x > m.bound) s.x = m.bound;
    return s;
}

inline Distance nmul(const Monoid& m, std::uint64_t k, const Distance& r)
{
    Distance acc;
    for (std::uint64_t i = 0; i < k; ++i) {
        acc = oplus(m, acc, r);
        if (m.kind == Kind::rational_truncated && acc.x == m.bound) break;
    }
    return acc;
}

// Ambient group sum, never clamped. Used where a formula is stated in the
// underlying group (e.g. the lambda quantity).
inline Distance add_unclamped(const Distance& a, const Distance& b) { return {a.x + b.x, a.y + b.y}; }

// a - b in the ambient group when it lands in R; internal use only.
inline bool difference(const Monoid& m, const Distance& a, const Distance& b, Distance& out)
{
    Distance d(a.x - b.x, a.y - b.y);
    if (m.kind == Kind::rational_truncated && !(d.x >= 0)) return false;
    if (!valid_value(m, d)) return false;
    out = d;
    return true;
}

// a - b clamped at 0 (standard kinds).
inline Distance monus(const Monoid& m, const Distance& a, const Distance& b)
{
    Distance d;
    if (leq(m, a, b)) return d;
    d = Distance(a.x - b.x, a.y - b.y);
    return d;
}

inline Distance half(const Monoid& m, const Distance& a)
{
    if (!m.dense()) throw std::invalid_argument("halving requires a dense monoid");
    return {a.x / 2, a.y / 2};
}

// 0 for the zero class; lex_pair: 1 small, 2 big; others: 1.
inline int arch_class(const Monoid& m, const Distance& r)
{
    if (r.x == 0 && r.y == 0) return 0;
    if (m.kind == Kind::lex_pair) return r.x == 0 ? 1 : 2;
    return 1;
}

enum class Arch { same_class, r_below, s_below, zero_involved };

inline std::string arch_name(Arch a)
{
    switch (a) {
    case Arch::same_class: return "same_class";
    case Arch::r_below: return "r_below";
    case Arch::s_below: return "s_below";
    case Arch::zero_involved: return "zero_involved";
    }
    return "?";
}

inline Arch arch_compare(const Monoid& m, const Distance& r, const Distance& s)
{
    int cr = arch_class(m, r), cs = arch_class(m, s);
    if (cr == 0 || cs == 0) return Arch::zero_involved;
    if (cr == cs) return Arch::same_class;
    return cr < cs ? Arch::r_below : Arch::s_below;
}

// A member of class k at which r -> r (+)* beta separates the idempotents.
inline Distance class_representative(const Monoid& m, int k)
{
    if (k == 0) return {};
    switch (m.kind) {
    case Kind::rational_truncated: return Distance(m.bound / 2);
    case Kind::lex_pair: return k == 1 ? Distance(0, 1) : Distance(1, 0);
    default: return Distance(1);
    }
}

// A value above every element of the list (strictly, except in the bounded
// kind where the bound is returned). Used to place fresh points far away.
inline Distance far_value(const Monoid& m, const std::vector<Distance>& vals)
{
    Distance top;
    for (const auto& v : vals)
        if (less(m, top, v)) top = v;
    if (m.kind == Kind::rational_truncated) return Distance(m.bound);
    return oplus(m, top, m.kind == Kind::lex_pair ? Distance(1, 0) : Distance(1));
}

// A small positive value drawn from a few fixed shapes per kind.
template <class Rng>
Distance sample_positive(const Monoid& m, Rng& rng)
{
    long k = 1 + static_cast<long>(rng() % 4);
    switch (m.kind) {
    case Kind::rational: return Distance(Rational(k, 2));
    case Kind::rational_truncated: return Distance(m.bound * Rational(k, 4));
    case Kind::integer: return Distance(k);
    case Kind::lex_pair: return rng() % 2 ? Distance(0, k) : Distance(Rational(k), Rational(0));
    case Kind::quad_ext: return rng() % 2 ? Distance(Rational(k, 2)) : Distance(Rational(0), Rational(k, 2));
    }
    return Distance(1);
}

} // namespace ury
