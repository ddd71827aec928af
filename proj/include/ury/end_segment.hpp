#pragma once

// End segments (upward closed subsets) of a distance monoid, ordered by
// reverse inclusion. Four shapes: [v,inf), (v,inf), a class boundary, and
// the empty set.

#include "monoid.hpp"

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace ury {

struct EndSegment {
    enum class Tag { closed, open, class_boundary, empty };
    Tag tag = Tag::closed;
    // closed/open: the cut point. class_boundary: an offset o, the segment
    // being {r : r - o lies in class_index or above}.
    Distance value;
    int class_index = 0;

    bool operator==(const EndSegment&) const = default;
};

using SegTag = EndSegment::Tag;

inline EndSegment seg_closed(const Monoid& m, const Distance& v)
{
    check_value(m, v);
    return {SegTag::closed, v, 0};
}

inline EndSegment seg_open(const Monoid& m, const Distance& v)
{
    check_value(m, v);
    if (!m.dense()) throw std::invalid_argument("open segment needs a monoid without successors");
    if (m.kind == Kind::rational_truncated && v.x == m.bound)
        throw std::invalid_argument("open segment above the bound is empty");
    return {SegTag::open, v, 0};
}

inline EndSegment seg_empty(const Monoid& m)
{
    if (m.bounded()) throw std::invalid_argument("a bounded monoid has no empty end segment");
    return {SegTag::empty, {}, 0};
}

// Class k and everything above, shifted by offset. Only lex_pair has a
// boundary that is not already closed(0), open(0) or closed(1).
inline EndSegment seg_boundary(const Monoid& m, int k, const Distance& offset = {})
{
    check_value(m, offset);
    if (k < 0 || k >= m.num_classes()) throw std::invalid_argument("class index out of range");
    if (k == 0) return seg_closed(m, offset);
    if (m.kind == Kind::lex_pair && k == 2) return {SegTag::class_boundary, Distance(offset.x, 0), 2};
    if (m.kind == Kind::integer) return seg_closed(m, oplus(m, offset, Distance(1)));
    if (m.kind == Kind::rational_truncated && offset.x == m.bound) return seg_closed(m, offset);
    return seg_open(m, offset);
}

// The top idempotent: empty, or closed(bound) when R has a maximum.
inline EndSegment seg_top(const Monoid& m)
{
    return m.bounded() ? seg_closed(m, Distance(m.bound)) : seg_empty(m);
}

inline bool valid_segment(const Monoid& m, const EndSegment& s)
{
    switch (s.tag) {
    case SegTag::closed: return valid_value(m, s.value);
    case SegTag::open:
        return m.dense() && valid_value(m, s.value) && !(m.bounded() && s.value.x == m.bound);
    case SegTag::class_boundary: return m.kind == Kind::lex_pair && s.class_index == 2 && s.value.y == 0 && s.value.x >= 0;
    case SegTag::empty: return !m.bounded();
    }
    return false;
}

inline std::string format(const Monoid& m, const EndSegment& s)
{
    switch (s.tag) {
    case SegTag::closed: return s.value == Distance() ? std::string("0") : format(m, s.value);
    case SegTag::open: return (s.value == Distance() ? std::string("0") : format(m, s.value)) + "+";
    case SegTag::class_boundary:
        return s.value.x == 0 ? std::string("alpha") : "alpha@" + format_rational(s.value.x);
    case SegTag::empty: return "empty";
    }
    return "?";
}

inline bool seg_contains(const Monoid& m, const EndSegment& s, const Distance& r)
{
    switch (s.tag) {
    case SegTag::closed: return leq(m, s.value, r);
    case SegTag::open: return less(m, s.value, r);
    case SegTag::class_boundary: return r.x > s.value.x;
    case SegTag::empty: return false;
    }
    return false;
}

// Reverse inclusion: less means a strictly contains b.
inline std::strong_ordering seg_compare(const Monoid& m, const EndSegment& a, const EndSegment& b)
{
    using so = std::strong_ordering;
    bool ea = a.tag == SegTag::empty, eb = b.tag == SegTag::empty;
    if (ea || eb) return ea == eb ? so::equal : (ea ? so::greater : so::less);
    bool ba = a.tag == SegTag::class_boundary, bb = b.tag == SegTag::class_boundary;
    if (ba || bb) {
        // A boundary at offset o sits just above every (o, y).
        if (a.value.x < b.value.x) return so::less;
        if (b.value.x < a.value.x) return so::greater;
        if (ba && bb) return so::equal;
        return ba ? so::greater : so::less;
    }
    auto c = compare(m, a.value, b.value);
    if (c != 0) return c;
    if (a.tag == b.tag) return so::equal;
    return a.tag == SegTag::closed ? so::less : so::greater;
}

inline bool seg_leq(const Monoid& m, const EndSegment& a, const EndSegment& b) { return seg_compare(m, a, b) <= 0; }
inline bool seg_less(const Monoid& m, const EndSegment& a, const EndSegment& b) { return seg_compare(m, a, b) < 0; }

// inf { r (+) s : r in a, s in b }.
inline EndSegment seg_oplus(const Monoid& m, const EndSegment& a, const EndSegment& b)
{
    if (!valid_segment(m, a) || !valid_segment(m, b)) throw std::invalid_argument("segment not valid for monoid");
    if (a.tag == SegTag::empty || b.tag == SegTag::empty) return {SegTag::empty, {}, 0};
    if (a.tag == SegTag::class_boundary || b.tag == SegTag::class_boundary) {
        // Only lex_pair gets here; the big class absorbs the second coordinate.
        return {SegTag::class_boundary, Distance(a.value.x + b.value.x, 0), 2};
    }
    if (a.tag == SegTag::closed && b.tag == SegTag::closed) return {SegTag::closed, oplus(m, a.value, b.value), 0};
    Distance sum = add_unclamped(a.value, b.value);
    if (m.bounded() && sum.x >= m.bound) return {SegTag::closed, Distance(m.bound), 0};
    return {SegTag::open, sum, 0};
}

inline bool is_idempotent(const Monoid& m, const EndSegment& a) { return seg_oplus(m, a, a) == a; }

// The idempotent chain, ascending in reverse inclusion.
inline std::vector<EndSegment> idempotents(const Monoid& m)
{
    std::vector<EndSegment> candidates;
    candidates.push_back(seg_closed(m, {}));
    if (m.dense()) candidates.push_back(seg_open(m, {}));
    if (m.kind == Kind::lex_pair) candidates.push_back(seg_boundary(m, 2));
    candidates.push_back(seg_top(m));
    std::vector<EndSegment> out;
    for (auto& c : candidates)
        if (is_idempotent(m, c)) out.push_back(c);
    return out;
}

// Upward closure of archimedean class k.
inline EndSegment class_closure(const Monoid& m, int k) { return seg_boundary(m, k); }

} // namespace ury
