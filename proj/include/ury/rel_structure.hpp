#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ury {

using RelTuple = std::vector<std::string>;

class RelStructure {
public:
    RelStructure() = default;
    explicit RelStructure(std::vector<std::pair<std::string, int>> signature) : signature_(std::move(signature))
    {
        std::set<std::string> seen;
        for (const auto& [name, arity] : signature_) {
            if (arity < 1) throw std::invalid_argument("relation " + name + " needs positive arity");
            if (!seen.insert(name).second) throw std::invalid_argument("relation " + name + " declared twice");
            rels_[name];
        }
    }

    const std::vector<std::pair<std::string, int>>& signature() const { return signature_; }
    const std::vector<std::string>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool has_point(const std::string& p) const { return index_.count(p) != 0; }
    std::size_t index(const std::string& p) const
    {
        auto it = index_.find(p);
        if (it == index_.end()) throw std::invalid_argument("unknown point " + p);
        return it->second;
    }

    int arity(const std::string& name) const
    {
        for (const auto& [n, a] : signature_)
            if (n == name) return a;
        throw std::invalid_argument("unknown relation " + name);
    }
    bool has_relation(const std::string& name) const { return rels_.count(name) != 0; }

    void add_point(const std::string& p)
    {
        if (has_point(p)) throw std::invalid_argument("duplicate point " + p);
        index_[p] = points_.size();
        points_.push_back(p);
    }

    void add_tuple(const std::string& name, const RelTuple& t)
    {
        if (static_cast<int>(t.size()) != arity(name)) throw std::invalid_argument("tuple arity mismatch for " + name);
        for (const auto& p : t)
            if (!has_point(p)) throw std::invalid_argument("tuple names unknown point " + p);
        rels_[name].insert(t);
    }

    bool holds(const std::string& name, const RelTuple& t) const
    {
        auto it = rels_.find(name);
        return it != rels_.end() && it->second.count(t) != 0;
    }

    const std::set<RelTuple>& tuples(const std::string& name) const
    {
        auto it = rels_.find(name);
        if (it == rels_.end()) throw std::invalid_argument("unknown relation " + name);
        return it->second;
    }

    // Adds every permutation of every tuple of name.
    void symmetrize(const std::string& name)
    {
        std::set<RelTuple> closed;
        for (auto t : tuples(name)) {
            std::sort(t.begin(), t.end());
            do closed.insert(t);
            while (std::next_permutation(t.begin(), t.end()));
        }
        rels_[name] = std::move(closed);
    }

    RelStructure induced(const std::vector<std::string>& pts) const
    {
        RelStructure out(signature_);
        for (const auto& p : pts) out.add_point(p);
        for (const auto& [name, ts] : rels_)
            for (const auto& t : ts)
                if (std::all_of(t.begin(), t.end(), [&](const std::string& p) { return out.has_point(p); }))
                    out.add_tuple(name, t);
        return out;
    }

    bool operator==(const RelStructure& o) const
    {
        return signature_ == o.signature_ && points_ == o.points_ && rels_ == o.rels_;
    }

private:
    std::vector<std::pair<std::string, int>> signature_;
    std::vector<std::string> points_;
    std::map<std::string, std::size_t> index_;
    std::map<std::string, std::set<RelTuple>> rels_;
};

inline RelStructure graph_structure() { return RelStructure({{"E", 2}}); }

// Hyperedges as sorted index sets, one entry per edge.
inline std::vector<std::vector<std::size_t>> hyperedges(const RelStructure& h)
{
    if (h.signature().size() != 1) throw std::invalid_argument("hypergraph needs a single relation");
    std::set<std::vector<std::size_t>> out;
    for (const auto& t : h.tuples(h.signature()[0].first)) {
        std::vector<std::size_t> e;
        for (const auto& p : t) e.push_back(h.index(p));
        std::sort(e.begin(), e.end());
        out.insert(e);
    }
    return {out.begin(), out.end()};
}

} // namespace ury
