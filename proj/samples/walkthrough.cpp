// Embeds a 4-cycle into a rational Urysohn session, extends the rotation of
// the square to a larger piece of the space, and lists the group topologies
// coming from ladders over two monoids.

#include "ury/ury.hpp"

#include <iostream>

int main()
{
    using namespace ury;
    Monoid q = Monoid::rational();
    FinSpace square(q, {"a", "b", "c", "d"},
                    {{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}});

    UrysohnSession s(q, 42);
    Tuple pts = s.embed(square);
    PointMap rot;
    for (std::size_t i = 0; i < 4; ++i) rot.add(pts[i], pts[(i + 1) % 4]);

    // A point at distance 1 from every corner, then the rotation moved over it.
    PointId centre = s.realize(pts, std::vector<Distance>(4, Distance(1)));
    PointMap ext = s.extend_isometry(rot, centre);
    std::cout << "centre p" << centre << " -> p" << ext.at(centre) << " (session size " << s.size() << ")\n";

    for (Monoid m : {Monoid::rational(), Monoid::lex_pair()}) {
        auto en = enumerate_ladders(m);
        std::cout << kind_name(m.kind) << ": " << en.ladders.size() << " ladders\n";
        for (const auto& g : en.ladders) std::cout << "  " << format(g) << "  mu = " << ideal_mu(ladder_to_modulus(g)).text << "\n";
    }
}
