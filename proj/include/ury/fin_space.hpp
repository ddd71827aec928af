#pragma once

// Finite R-metric spaces over a distance monoid, amalgamation and one-point
// (Katetov) extensions.

#include "monoid.hpp"
#include "partial_map.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ury {

using PartialMap = Bijection<std::string>;

class FinSpace {
public:
    FinSpace() = default;
    explicit FinSpace(Monoid m) : m_(std::move(m)) {}

    // The table must be square with values in the monoid; metric axioms are
    // not enforced here (see validate).
    FinSpace(Monoid m, std::vector<std::string> labels, std::vector<std::vector<Distance>> table)
        : m_(std::move(m))
    {
        if (table.size() != labels.size()) throw std::invalid_argument("distance table has the wrong number of rows");
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (table[i].size() != labels.size())
                throw std::invalid_argument("distance table row " + labels[i] + " is incomplete");
            for (const auto& v : table[i]) check_value(m_, v);
        }
        labels_ = std::move(labels);
        rows_ = std::move(table);
        reindex();
    }

    const Monoid& monoid() const { return m_; }
    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    bool has(const std::string& l) const { return index_.count(l) != 0; }

    std::size_t index(const std::string& l) const
    {
        auto it = index_.find(l);
        if (it == index_.end()) throw std::invalid_argument("unknown point " + l);
        return it->second;
    }

    const Distance& d(std::size_t i, std::size_t j) const { return rows_[i][j]; }
    const Distance& d(const std::string& a, const std::string& b) const { return rows_[index(a)][index(b)]; }

    // Appends a point; row[i] is the distance to point i. Returns its index.
    std::size_t add_point(const std::string& l, const std::vector<Distance>& row)
    {
        if (has(l)) throw std::invalid_argument("duplicate point label " + l);
        if (row.size() != size()) throw std::invalid_argument("new point needs a distance to every point");
        for (const auto& v : row) check_value(m_, v);
        for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i].push_back(row[i]);
        rows_.push_back(row);
        rows_.back().push_back(Distance());
        labels_.push_back(l);
        index_.emplace(l, labels_.size() - 1);
        return labels_.size() - 1;
    }

    FinSpace restrict_to(const std::vector<std::string>& pts) const
    {
        std::vector<std::vector<Distance>> t(pts.size(), std::vector<Distance>(pts.size()));
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < pts.size(); ++j) t[i][j] = d(pts[i], pts[j]);
        return FinSpace(m_, pts, t);
    }

    // A label not yet used, derived from base.
    std::string fresh_label(const std::string& base) const
    {
        if (!has(base)) return base;
        for (std::size_t k = 1;; ++k) {
            std::string cand = base + "_" + std::to_string(k);
            if (!has(cand)) return cand;
        }
    }

    bool operator==(const FinSpace& o) const { return m_ == o.m_ && labels_ == o.labels_ && rows_ == o.rows_; }

private:
    void reindex()
    {
        index_.clear();
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (!index_.emplace(labels_[i], i).second) throw std::invalid_argument("duplicate point label " + labels_[i]);
    }

    Monoid m_;
    std::vector<std::string> labels_;
    std::vector<std::vector<Distance>> rows_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct Violation {
    enum class Kind { nonzero_diagonal, zero_distance, asymmetric, triangle };
    Kind kind;
    // triangle: d(x,z) > d(x,y) (+) d(y,z). Other kinds use x and y only.
    std::string x, y, z;
};

inline std::string violation_name(Violation::Kind k)
{
    switch (k) {
    case Violation::Kind::nonzero_diagonal: return "nonzero_diagonal";
    case Violation::Kind::zero_distance: return "zero_distance";
    case Violation::Kind::asymmetric: return "asymmetric";
    case Violation::Kind::triangle: return "triangle";
    }
    return "?";
}

inline std::vector<Violation> validate(const FinSpace& s)
{
    const auto& m = s.monoid();
    std::vector<Violation> out;
    std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(s.d(i, i) == Distance())) out.push_back({Violation::Kind::nonzero_diagonal, s.label(i), s.label(i), {}});
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(s.d(i, j) == s.d(j, i))) out.push_back({Violation::Kind::asymmetric, s.label(i), s.label(j), {}});
            if (s.d(i, j) == Distance()) out.push_back({Violation::Kind::zero_distance, s.label(i), s.label(j), {}});
        }
    }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = x + 1; z < n; ++z)
            for (std::size_t y = 0; y < n; ++y) {
                if (y == x || y == z) continue;
                if (less(m, oplus(m, s.d(x, y), s.d(y, z)), s.d(x, z)))
                    out.push_back({Violation::Kind::triangle, s.label(x), s.label(y), s.label(z)});
            }
    return out;
}

inline bool is_valid(const FinSpace& s) { return validate(s).empty(); }

inline Distance diam(const FinSpace& s, const std::vector<std::string>& a)
{
    if (a.empty()) throw std::invalid_argument("diameter of an empty set");
    Distance best;
    for (const auto& p : a)
        for (const auto& q : a) best = dmax(s.monoid(), best, s.d(p, q));
    return best;
}

inline Distance set_distance(const FinSpace& s, const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    if (a.empty() || b.empty()) throw std::invalid_argument("distance to an empty set");
    std::optional<Distance> best;
    for (const auto& p : a)
        for (const auto& q : b)
            if (!best || less(s.monoid(), s.d(p, q), *best)) best = s.d(p, q);
    return *best;
}

// Distance preservation of a partial map between two spaces.
inline bool is_isometry(const FinSpace& src, const FinSpace& dst, const PartialMap& f)
{
    const auto& ps = f.pairs();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (!src.has(ps[i].first) || !dst.has(ps[i].second)) return false;
        for (std::size_t j = i + 1; j < ps.size(); ++j)
            if (!(src.d(ps[i].first, ps[j].first) == dst.d(ps[i].second, ps[j].second))) return false;
    }
    return true;
}

inline bool is_isometry(const FinSpace& s, const PartialMap& f) { return is_isometry(s, s, f); }

// Positionwise isometry of two equally long tuples.
inline bool tuples_isometric(const FinSpace& s, const std::vector<std::string>& x, const std::vector<std::string>& y)
{
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            if (!(s.d(x[i], x[j]) == s.d(y[i], y[j]))) return false;
    return true;
}

struct AmalgamResult {
    FinSpace space;
    PartialMap b_map;    // labels of b -> labels in the amalgam
};

// a and b glued along glue (a-labels -> b-labels). Non-common points of b
// keep their labels unless they clash with a.
inline AmalgamResult amalgamate(const FinSpace& a, const FinSpace& b, const PartialMap& glue)
{
    const auto& m = a.monoid();
    if (!(b.monoid() == m)) throw std::invalid_argument("amalgamation across different monoids");
    if (glue.empty() && !m.bounded()) throw std::invalid_argument("amalgamation needs a nonempty common part");
    if (!is_valid(a) || !is_valid(b)) throw std::invalid_argument("amalgamation of an invalid space");
    if (!is_isometry(a, b, glue)) throw std::invalid_argument("glue is not an isometry of the common parts");

    FinSpace out = a;
    PartialMap bmap;
    for (const auto& [ca, cb] : glue.pairs()) bmap.add(cb, ca);
    std::vector<std::string> fresh_b;
    for (const auto& l : b.labels())
        if (!glue.in_range(l)) fresh_b.push_back(l);

    for (const auto& l : fresh_b) {
        std::vector<Distance> row(out.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            const std::string& p = out.label(i);
            if (auto pb = bmap.preimage(p)) {
                row[i] = b.d(l, *pb);
                continue;
            }
            // p is a point of a outside the common part.
            std::optional<Distance> best;
            for (const auto& [ca, cb] : glue.pairs()) {
                Distance v = oplus(m, a.d(p, ca), b.d(cb, l));
                if (!best || less(m, v, *best)) best = v;
            }
            row[i] = best ? *best : Distance(m.bound);
        }
        std::string nl = out.fresh_label(l);
        out.add_point(nl, row);
        bmap.add(l, nl);
    }
    return {std::move(out), std::move(bmap)};
}

// Cross distances between A\C and B\C match the amalgam formula over C.
inline bool is_free_independent(const FinSpace& u, const std::vector<std::string>& a, const std::vector<std::string>& b,
                                const std::vector<std::string>& c)
{
    const auto& m = u.monoid();
    auto in_c = [&](const std::string& p) { return std::find(c.begin(), c.end(), p) != c.end(); };
    for (const auto& x : a) {
        if (in_c(x)) continue;
        for (const auto& y : b) {
            if (in_c(y) || x == y) continue;
            if (c.empty()) {
                if (!m.bounded() || !(u.d(x, y) == Distance(m.bound))) return false;
                continue;
            }
            std::optional<Distance> best;
            for (const auto& z : c) {
                Distance v = oplus(m, u.d(x, z), u.d(z, y));
                if (!best || less(m, v, *best)) best = v;
            }
            if (!(u.d(x, y) == *best)) return false;
        }
    }
    return true;
}

struct KatetovVector {
    std::vector<std::string> points;
    std::vector<Distance> entries;
};

// Violations as human-readable strings; throws on a zero or missing entry.
inline std::vector<std::string> katetov_valid(const FinSpace& s, const KatetovVector& v)
{
    const auto& m = s.monoid();
    if (v.points.size() != v.entries.size()) throw std::invalid_argument("Katetov vector size mismatch");
    for (std::size_t i = 0; i < v.points.size(); ++i) {
        if (!s.has(v.points[i])) throw std::invalid_argument("Katetov vector names unknown point " + v.points[i]);
        check_value(m, v.entries[i]);
        if (v.entries[i] == Distance()) throw std::invalid_argument("zero entry at " + v.points[i]);
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.points.size(); ++i)
        for (std::size_t j = 0; j < v.points.size(); ++j) {
            if (i == j) continue;
            const Distance& dpq = s.d(v.points[i], v.points[j]);
            if (less(m, oplus(m, v.entries[j], dpq), v.entries[i]))
                out.push_back("entry(" + v.points[i] + ") > entry(" + v.points[j] + ") + d(" + v.points[i] + "," +
                              v.points[j] + ")");
            if (i < j && less(m, oplus(m, v.entries[i], v.entries[j]), dpq))
                out.push_back("d(" + v.points[i] + "," + v.points[j] + ") > entry(" + v.points[i] + ") + entry(" +
                              v.points[j] + ")");
        }
    return out;
}

// Distances from a new point realizing v to every point of s: prescribed on
// the support, free amalgam elsewhere.
inline std::vector<Distance> katetov_row(const FinSpace& s, const KatetovVector& v)
{
    const auto& m = s.monoid();
    std::vector<std::size_t> idx;
    for (const auto& p : v.points) idx.push_back(s.index(p));
    std::vector<Distance> row(s.size());
    std::vector<bool> set(s.size(), false);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        row[idx[k]] = v.entries[k];
        set[idx[k]] = true;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (set[i]) continue;
        if (idx.empty()) {
            // No support: place the point beyond the current diameter.
            std::vector<Distance> all;
            for (std::size_t a = 0; a < s.size(); ++a)
                for (std::size_t b = 0; b < s.size(); ++b) all.push_back(s.d(a, b));
            row[i] = far_value(m, all);
            continue;
        }
        std::optional<Distance> best;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            Distance c = oplus(m, v.entries[k], s.d(idx[k], i));
            if (!best || less(m, c, *best)) best = c;
        }
        row[i] = *best;
    }
    return row;
}

inline FinSpace extend_one_point(const FinSpace& s, const KatetovVector& v, const std::string& label)
{
    auto bad = katetov_valid(s, v);
    if (!bad.empty()) throw std::invalid_argument("invalid Katetov vector: " + bad.front());
    FinSpace out = s;
    out.add_point(label, katetov_row(s, v));
    return out;
}


struct CopyResult {
    FinSpace space;
    PartialMap map;    // x -> x' for every x in the copied tuple (fixed points map to themselves)
};

// X' with X' isometric to X over fixed, freely amalgamated with the rest of s
// over fixed. Points of X inside fixed are kept.
inline CopyResult independent_copy(const FinSpace& s, const std::vector<std::string>& x,
                                   const std::vector<std::string>& fixed, const std::string& suffix = "'")
{
    auto in_fixed = [&](const std::string& p) { return std::find(fixed.begin(), fixed.end(), p) != fixed.end(); };
    std::vector<std::string> moving;
    for (const auto& p : x)
        if (!in_fixed(p) && std::find(moving.begin(), moving.end(), p) == moving.end()) moving.push_back(p);

    std::vector<std::string> src = fixed;
    src.insert(src.end(), moving.begin(), moving.end());
    std::vector<std::string> labels = fixed;
    FinSpace probe = s;
    for (const auto& p : moving) {
        std::string l = probe.fresh_label(p + suffix);
        probe.add_point(l, std::vector<Distance>(probe.size()));
        labels.push_back(l);
    }
    std::vector<std::vector<Distance>> t(src.size(), std::vector<Distance>(src.size()));
    for (std::size_t i = 0; i < src.size(); ++i)
        for (std::size_t j = 0; j < src.size(); ++j) t[i][j] = s.d(src[i], src[j]);
    FinSpace piece(s.monoid(), labels, t);

    auto am = amalgamate(s, piece, PartialMap::identity(fixed));
    PartialMap map;
    for (const auto& p : x) {
        if (in_fixed(p)) {
            map.try_add(p, p);
            continue;
        }
        auto pos = std::find(moving.begin(), moving.end(), p) - moving.begin();
        map.try_add(p, am.b_map.at(labels[fixed.size() + pos]));
    }
    return {std::move(am.space), std::move(map)};
}

inline std::vector<std::string> map_tuple(const PartialMap& f, const std::vector<std::string>& x)
{
    std::vector<std::string> out;
    for (const auto& p : x) out.push_back(f.at(p));
    return out;
}

} // namespace ury
