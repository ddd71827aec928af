#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ury {

// Finite injective partial map. Keeps insertion order for reporting.
template <class K>
class Bijection {
public:
    Bijection() = default;
    explicit Bijection(const std::vector<std::pair<K, K>>& pairs)
    {
        for (const auto& [a, b] : pairs) add(a, b);
    }

    // Adds a -> b. Re-adding an existing pair is a no-op; a conflicting pair
    // throws.
    void add(const K& a, const K& b)
    {
        auto f = fwd_.find(a);
        auto r = bwd_.find(b);
        if (f != fwd_.end() || r != bwd_.end()) {
            if (f != fwd_.end() && f->second == b) return;
            throw std::invalid_argument("partial map would stop being injective or single-valued");
        }
        fwd_.emplace(a, b);
        bwd_.emplace(b, a);
        pairs_.emplace_back(a, b);
    }

    bool try_add(const K& a, const K& b)
    {
        auto f = fwd_.find(a);
        auto r = bwd_.find(b);
        if (f != fwd_.end() || r != bwd_.end()) return f != fwd_.end() && f->second == b;
        add(a, b);
        return true;
    }

    std::optional<K> image(const K& a) const
    {
        auto it = fwd_.find(a);
        if (it == fwd_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<K> preimage(const K& b) const
    {
        auto it = bwd_.find(b);
        if (it == bwd_.end()) return std::nullopt;
        return it->second;
    }
    const K& at(const K& a) const
    {
        auto it = fwd_.find(a);
        if (it == fwd_.end()) throw std::out_of_range("point outside the domain of the map");
        return it->second;
    }

    bool in_domain(const K& a) const { return fwd_.count(a) != 0; }
    bool in_range(const K& b) const { return bwd_.count(b) != 0; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    const std::vector<std::pair<K, K>>& pairs() const { return pairs_; }

    std::vector<K> domain() const
    {
        std::vector<K> out;
        for (const auto& p : pairs_) out.push_back(p.first);
        return out;
    }
    std::vector<K> range() const
    {
        std::vector<K> out;
        for (const auto& p : pairs_) out.push_back(p.second);
        return out;
    }

    Bijection inverse() const
    {
        Bijection out;
        for (const auto& [a, b] : pairs_) out.add(b, a);
        return out;
    }

    bool is_identity() const
    {
        for (const auto& [a, b] : pairs_)
            if (!(a == b)) return false;
        return true;
    }

    // Same graph, ignoring insertion order.
    bool operator==(const Bijection& o) const { return fwd_ == o.fwd_; }

    static Bijection identity(const std::vector<K>& pts)
    {
        Bijection out;
        for (const auto& p : pts) out.add(p, p);
        return out;
    }

private:
    std::map<K, K> fwd_;
    std::map<K, K> bwd_;
    std::vector<std::pair<K, K>> pairs_;
};

// g after f, defined where f(x) lands in dom(g).
template <class K>
Bijection<K> compose(const Bijection<K>& g, const Bijection<K>& f)
{
    Bijection<K> out;
    for (const auto& [a, b] : f.pairs())
        if (auto c = g.image(b)) out.add(a, *c);
    return out;
}

} // namespace ury
