#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polycorr/io.hpp"
#include "polycorr/triangulate.hpp"

#include "common/naive_tilings.hpp"

#include <algorithm>
#include <set>

using namespace polycorr;
using polycorr::testing::naive_triangulations;
using polycorr::testing::Tri;

namespace {

LatticePolygon unit_triangle() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 1}, {1, 0}});
}
LatticePolygon unit_square() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
}
LatticePolygon square2() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 2}, {2, 2}, {2, 0}});
}
LatticePolygon ell_hexagon() {
    return LatticePolygon::from_boundary({{0, 2}, {1, 2}, {1, 1}, {2, 1}, {2, 0}, {0, 0}});
}
LatticePolygon degenerate_triangle() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 1}, {2, 0}});
}
LatticePolygon right3() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 3}, {3, 0}});
}

std::set<std::vector<Tri>> as_tri_set(const std::vector<Triangulation>& ts) {
    std::set<std::vector<Tri>> out;
    for (const auto& t : ts) {
        std::vector<Tri> v(t.triangles.begin(), t.triangles.end());
        out.insert(v);
    }
    return out;
}

void check_euler_and_shape(const LatticePolygon& poly, const std::vector<Triangulation>& ts) {
    const auto bd = poly.boundary();
    const std::set<Pt> listed(bd.begin(), bd.end());
    for (const auto& tau : ts) {
        long long boundary_used = 0, interior_used = 0;
        for (const Pt& v : tau.used_vertices) {
            if (on_cycle(v, bd))
                ++boundary_used;
            else
                ++interior_used;
        }
        CHECK(static_cast<long long>(tau.triangles.size()) ==
              2 * interior_used + boundary_used - 2);
        for (const Pt& v : bd) CHECK(std::count(tau.used_vertices.begin(),
                                                tau.used_vertices.end(), v) == 1);
        Int vol = 0;
        for (const auto& t : tau.triangles) {
            CHECK(orient2(t[0], t[1], t[2]) > 0);
            CHECK(t[0] < t[1]);
            CHECK(t[0] < t[2]);
            vol += orient2(t[0], t[1], t[2]);
        }
        CHECK(vol == poly.twice_area());
        CHECK(std::is_sorted(tau.triangles.begin(), tau.triangles.end()));
    }
}

void check_oracle_agreement(const LatticePolygon& poly) {
    auto engine = as_tri_set(enumerate_triangulations(poly));
    auto oracle = naive_triangulations(poly);
    CHECK(engine == oracle);
}

} // namespace

TEST_CASE("triangulation counts on fixed regions") {
    CHECK(enumerate_triangulations(unit_triangle()).size() == 1);
    CHECK(enumerate_triangulations(unit_square()).size() == 2);
    CHECK(enumerate_triangulations(square2()).size() == 3);
    CHECK(enumerate_triangulations(degenerate_triangle()).size() == 1);
    CHECK(enumerate_triangulations(right3()).size() == 2);
    CHECK(enumerate_triangulations(ell_hexagon()).size() == 4);
}

TEST_CASE("engine matches naive exhaustive search") {
    check_oracle_agreement(unit_triangle());
    check_oracle_agreement(unit_square());
    check_oracle_agreement(square2());
    check_oracle_agreement(degenerate_triangle());
    check_oracle_agreement(right3());
    check_oracle_agreement(ell_hexagon());
    check_oracle_agreement(LatticePolygon::from_boundary(
        {{0, 0}, {0, 2}, {1, 2}, {2, 1}, {2, 0}}));
}

TEST_CASE("euler count and triangle shape invariants") {
    for (const auto& poly : {unit_triangle(), unit_square(), square2(), ell_hexagon(),
                             degenerate_triangle(), right3()})
        check_euler_and_shape(poly, enumerate_triangulations(poly));
}

TEST_CASE("subdivision counts and consistency") {
    CHECK(enumerate_subdivisions(unit_triangle()).size() == 1);
    CHECK(enumerate_subdivisions(unit_square()).size() == 3);
    CHECK(enumerate_subdivisions(square2()).size() == 4);

    for (const auto& poly : {unit_square(), square2(), ell_hexagon(), right3()}) {
        auto subs = enumerate_subdivisions(poly);
        auto tris = enumerate_triangulations(poly);

        std::set<std::vector<std::vector<Pt>>> sub_cells;
        for (const auto& s : subs) {
            for (const auto& c : s.cells) {
                CHECK(is_strict_convex_cw_cell(c));
                CHECK(c.front() == *std::min_element(c.begin(), c.end()));
            }
            Int vol = 0;
            for (const auto& c : s.cells) vol += cell_twice_area(c);
            CHECK(vol == poly.twice_area());
            sub_cells.insert(s.cells);
        }
        CHECK(sub_cells.size() == subs.size());

        for (const auto& t : tris) {
            std::vector<std::vector<Pt>> cells;
            for (const auto& tr : t.triangles) cells.push_back({tr[0], tr[1], tr[2]});
            CHECK(sub_cells.count(cells) == 1);
        }
    }
}

TEST_CASE("characteristic functions") {
    auto ts = enumerate_triangulations(square2());
    REQUIRE(ts.size() == 3);

    std::set<CharFunction> chars;
    for (const auto& t : ts) chars.insert(char_function(t));
    CHECK(chars.size() == 3);

    CharFunction diag1{{{0, 0}, 8}, {{0, 2}, 4}, {{2, 2}, 8}, {{2, 0}, 4}};
    CharFunction diag2{{{0, 0}, 4}, {{0, 2}, 8}, {{2, 2}, 4}, {{2, 0}, 8}};
    CharFunction fan{{{0, 0}, 4}, {{0, 2}, 4}, {{2, 2}, 4}, {{2, 0}, 4}, {{1, 1}, 8}};
    CHECK(chars == std::set<CharFunction>{diag1, diag2, fan});

    for (const auto& t : ts) {
        Int total = 0;
        for (const auto& [v, c] : char_function(t)) total += c;
        CHECK(total == 3 * square2().twice_area());
    }
}

TEST_CASE("all-lattice vertex pool") {
    CHECK(enumerate_triangulations(unit_square(), VertexPool::AllLattice).size() == 2);
    CHECK(enumerate_subdivisions(unit_square(), VertexPool::AllLattice).size() == 3);

    auto tri2 = LatticePolygon::from_boundary({{0, 0}, {0, 2}, {2, 0}});
    CHECK(enumerate_triangulations(tri2).size() == 1);
    auto all = enumerate_triangulations(tri2, VertexPool::AllLattice);
    CHECK(all.size() > 1);

    const auto bd = tri2.boundary();
    for (const auto& tau : all) {
        long long boundary_used = 0, interior_used = 0;
        for (const Pt& v : tau.used_vertices) {
            if (on_cycle(v, bd))
                ++boundary_used;
            else
                ++interior_used;
        }
        CHECK(static_cast<long long>(tau.triangles.size()) ==
              2 * interior_used + boundary_used - 2);
    }
}

TEST_CASE("tiling serialization") {
    auto ts = enumerate_triangulations(unit_square());
    std::string js = triangulations_to_json(ts);
    CHECK(js ==
          "[{\"triangles\":[[[0,0],[0,1],[1,0]],[[0,1],[1,1],[1,0]]]},"
          "{\"triangles\":[[[0,0],[0,1],[1,1]],[[0,0],[1,1],[1,0]]]}]");

    auto ss = enumerate_subdivisions(unit_triangle());
    CHECK(subdivisions_to_json(ss) == "[{\"cells\":[[[0,0],[0,1],[1,0]]]}]");
}

TEST_CASE("enumeration is deterministic") {
    auto a = enumerate_triangulations(ell_hexagon());
    auto b = enumerate_triangulations(ell_hexagon());
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].triangles == b[i].triangles);
}
