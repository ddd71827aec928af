#pragma once

// Demand-driven back-and-forth over a homogeneous session (metric, graph or
// tournament). A session S supplies:
//   size()
//   matches(p, x, inverse)            existing points realizing the transported type of x
//   realize_transported(p, x, inverse) a fresh such point
//   fresh_near(x, rng)                 a fresh point, used for the first move of a generic map
//   note_extend(p, x, inverse, y)      transcript hook

#include "partial_map.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace ury {

using PointId = std::size_t;
using PointMap = Bijection<PointId>;
using Tuple = std::vector<PointId>;

enum class ExtendChoice { prefer_self, seeded };

// The image of x under an extension of p (of p^-1 when inverse).
template <class S>
PointId extend_choice(S& s, const PointMap& p, PointId x, bool inverse, ExtendChoice choice, std::mt19937_64* rng)
{
    if (!inverse && p.in_domain(x)) return p.at(x);
    if (inverse && p.in_range(x)) return *p.preimage(x);
    auto cands = s.matches(p, x, inverse);
    PointId y;
    if (choice == ExtendChoice::prefer_self) {
        if (std::find(cands.begin(), cands.end(), x) != cands.end())
            y = x;
        else if (!cands.empty())
            y = cands.front();
        else
            y = s.realize_transported(p, x, inverse);
    } else {
        std::size_t k = static_cast<std::size_t>((*rng)() % (cands.size() + 1));
        y = k < cands.size() ? cands[k] : s.realize_transported(p, x, inverse);
    }
    s.note_extend(p, x, inverse, y);
    return y;
}

template <class S>
PointMap extend_forward(S& s, PointMap p, PointId x)
{
    PointId y = extend_choice(s, p, x, false, ExtendChoice::prefer_self, nullptr);
    p.try_add(x, y);
    return p;
}

template <class S>
PointMap extend_backward(S& s, PointMap p, PointId y)
{
    PointId x = extend_choice(s, p, y, true, ExtendChoice::prefer_self, nullptr);
    p.try_add(x, y);
    return p;
}

// Extends p forward over every point of pts, in order.
template <class S>
PointMap extend_over(S& s, PointMap p, const Tuple& pts)
{
    for (PointId x : pts) p = extend_forward(s, std::move(p), x);
    return p;
}

enum class Policy { identity, generic };

// A finite approximation of an automorphism that only ever grows. Stage k of
// the dovetailing handles point k forward, then point k backward.
template <class S>
class LazyAutomorphism {
public:
    LazyAutomorphism(S& s, Policy policy, std::uint64_t seed, PointMap initial = {})
        : s_(&s), policy_(policy), rng_(seed), map_(std::move(initial))
    {
    }

    PointId apply(PointId x, std::size_t depth = 0)
    {
        advance(depth);
        if (!map_.in_domain(x)) forward_step(x);
        return map_.at(x);
    }

    PointId apply_inverse(PointId y, std::size_t depth = 0)
    {
        advance(depth);
        if (!map_.in_range(y)) backward_step(y);
        return *map_.preimage(y);
    }

    void advance(std::size_t depth)
    {
        while (stage_ < depth && stage_ < s_->size()) {
            forward_step(stage_);
            backward_step(stage_);
            ++stage_;
        }
    }

    const PointMap& map() const { return map_; }
    Policy policy() const { return policy_; }
    std::size_t depth_used() const { return stage_; }
    S& session() const { return *s_; }

private:
    void forward_step(PointId x)
    {
        if (map_.in_domain(x)) return;
        if (policy_ == Policy::identity) {
            map_.add(x, x);
            return;
        }
        PointId y = map_.empty() ? s_->fresh_near(x, rng_)
                                 : extend_choice(*s_, map_, x, false, ExtendChoice::seeded, &rng_);
        map_.add(x, y);
    }

    void backward_step(PointId y)
    {
        if (map_.in_range(y)) return;
        if (policy_ == Policy::identity) {
            map_.add(y, y);
            return;
        }
        PointId x = map_.empty() ? s_->fresh_near(y, rng_)
                                 : extend_choice(*s_, map_, y, true, ExtendChoice::seeded, &rng_);
        map_.add(x, y);
    }

    S* s_;
    Policy policy_;
    std::mt19937_64 rng_;
    PointMap map_;
    std::size_t stage_ = 0;
};

} // namespace ury
