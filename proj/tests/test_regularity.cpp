#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polycorr/regularity.hpp"
#include "polycorr/triangulate.hpp"

#include <algorithm>

using namespace polycorr;

namespace {

LatticePolygon unit_square() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
}
LatticePolygon square2() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 2}, {2, 2}, {2, 0}});
}

// Triangle with exactly three interior lattice points forming a smaller
// triangle; the two pinwheel tilings of this configuration admit no inducing
// height function.
LatticePolygon mother() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 4}, {4, 0}});
}

} // namespace

TEST_CASE("unit square triangulations are height-induced") {
    auto ts = enumerate_triangulations(unit_square());
    REQUIRE(ts.size() == 2);
    for (const auto& t : ts) CHECK(is_regular(t, unit_square()));
    CHECK(secondary_polytope_vertices(unit_square()).size() == 2);
}

TEST_CASE("coarse cells are height-induced") {
    auto subs = enumerate_subdivisions(unit_square());
    REQUIRE(subs.size() == 3);
    for (const auto& s : subs) CHECK(is_regular(s, unit_square()));
}

TEST_CASE("doubled square: every triangulation is height-induced") {
    auto ts = enumerate_triangulations(square2());
    REQUIRE(ts.size() == 3);
    for (const auto& t : ts) CHECK(is_regular(t, square2()));
    CHECK(secondary_polytope_vertices(square2()).size() == 3);
}

TEST_CASE("pinwheel tilings are not height-induced") {
    auto poly = mother();
    auto inner = interior_points(poly);
    REQUIRE(inner == std::vector<Pt>{{1, 1}, {1, 2}, {2, 1}});

    auto ts = enumerate_triangulations(poly);
    long long irregular = 0;
    std::vector<Triangulation> bad;
    for (const auto& t : ts)
        if (!is_regular(t, poly)) {
            ++irregular;
            bad.push_back(t);
        }
    CHECK(irregular == 2);

    // The failures must be the two chiral pinwheels: all six points used,
    // inner triangle present as a cell.
    for (const auto& t : bad) {
        CHECK(t.used_vertices.size() == 6);
        std::array<Pt, 3> core{{{1, 1}, {1, 2}, {2, 1}}};
        CHECK(std::count(t.triangles.begin(), t.triangles.end(), core) == 1);
    }
    CHECK(secondary_polytope_vertices(poly).size() == ts.size() - 2);
}
