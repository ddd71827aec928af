#pragma once

#include <vector>

namespace ury {

template <class P>
struct ZigzagChain {
    std::vector<std::vector<P>> as;    // A_0 .. A_n
    std::vector<std::vector<P>> bs;    // B_0 .. B_{n-1}
    std::vector<P> base_b;             // the fixed B of the (n,B)-zigzag

    std::size_t length() const { return bs.size(); }
};

// A_i B_i ~ A_{i+1} B_i ~ A_0 B for every step, as tuples.
template <class P, class Iso>
bool chain_invariant(const ZigzagChain<P>& c, Iso tuples_iso)
{
    if (c.as.size() != c.bs.size() + 1 || c.as.empty()) return false;
    auto cat = [](const std::vector<P>& x, const std::vector<P>& y) {
        std::vector<P> out = x;
        out.insert(out.end(), y.begin(), y.end());
        return out;
    };
    auto ref = cat(c.as[0], c.base_b);
    for (std::size_t i = 0; i < c.bs.size(); ++i) {
        if (!tuples_iso(cat(c.as[i], c.bs[i]), ref)) return false;
        if (!tuples_iso(cat(c.as[i + 1], c.bs[i]), ref)) return false;
    }
    return true;
}

} // namespace ury
