#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polycorr/errors.hpp"
#include "polycorr/geometry.hpp"

#include <random>

using namespace polycorr;

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

} // namespace

TEST_CASE("orient2 fixed values") {
    CHECK(orient2({1, 0}, {0, 0}, {0, 1}) == 1);
    CHECK(orient2({0, 0}, {1, 0}, {2, 0}) == 0);
    CHECK(orient2({0, 1}, {0, 0}, {1, 0}) == -1);
}

TEST_CASE("orient2 antisymmetry and translation invariance") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<Int> coord(-6, 6);
    for (int iter = 0; iter < 200; ++iter) {
        Pt i{coord(rng), coord(rng)}, j{coord(rng), coord(rng)}, k{coord(rng), coord(rng)};
        Pt s{coord(rng), coord(rng)};
        CHECK(orient2(i, j, k) == -orient2(k, j, i));
        CHECK(orient2(i + s, j + s, k + s) == orient2(i, j, k));
    }
}

TEST_CASE("lattice and interior point counts") {
    CHECK(lattice_points(unit_square()).size() == 4);
    CHECK(interior_points(unit_square()).empty());

    CHECK(lattice_points(square2()).size() == 9);
    const auto inner = interior_points(square2());
    REQUIRE(inner.size() == 1);
    CHECK(inner[0] == Pt{1, 1});

    auto tri2 = LatticePolygon::from_boundary({{0, 0}, {0, 2}, {2, 0}});
    CHECK(lattice_points(tri2).size() == 6);

    auto tri3 = LatticePolygon::from_boundary({{0, 0}, {0, 3}, {3, 0}});
    CHECK(interior_points(tri3).size() == 1);
}

TEST_CASE("Pick count identities on fixtures") {
    for (const LatticePolygon& poly :
         {unit_triangle(), unit_square(), square2(),
          LatticePolygon::from_boundary({{0, 0}, {0, 3}, {3, 0}}),
          LatticePolygon::from_boundary({{0, 0}, {0, 2}, {2, 2}, {2, 1}, {1, 1}, {1, 0}})}) {
        const Int area2 = poly.twice_area();
        const Int b = boundary_lattice_count(poly.boundary());
        const Int lstar = static_cast<Int>(interior_points(poly).size());
        const Int l = static_cast<Int>(lattice_points(poly).size());
        CHECK(area2 == 2 * lstar + b - 2);
        CHECK(l == lstar + b);
    }
}

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(LatticePolygon::from_boundary({{0, 0}, {1, 0}}), schema_error);
    CHECK_THROWS_AS(LatticePolygon::from_boundary({{0, 0}, {1, 0}, {0, 0}}), schema_error);
    // counterclockwise listing
    CHECK_THROWS_AS(LatticePolygon::from_boundary({{0, 0}, {1, 0}, {0, 1}}), schema_error);
    // bowtie
    CHECK_THROWS_AS(
        LatticePolygon::from_boundary({{0, 0}, {2, 2}, {2, 0}, {0, 2}}), schema_error);
    // collinear spike folding back
    CHECK_THROWS_AS(LatticePolygon::from_boundary({{0, 0}, {2, 0}, {1, 0}}), schema_error);
    // vertex of one edge in the middle of another
    CHECK_THROWS_AS(LatticePolygon::from_boundary(
                        {{0, 0}, {0, 2}, {2, 2}, {2, 0}, {1, 0}, {1, 1}, {0, 1}}),
                    schema_error);
}

TEST_CASE("collinear listed corners") {
    auto quad = LatticePolygon::from_boundary({{0, 0}, {0, 2}, {2, 0}, {1, 0}});
    CHECK(quad.n() == 4);
    CHECK(quad.twice_area() == 4);
    CHECK_THROWS_AS(
        LatticePolygon::from_boundary({{0, 0}, {0, 2}, {2, 0}, {1, 0}}, false),
        schema_error);
}

TEST_CASE("is_convex_cell") {
    CHECK(is_convex_cell({{0, 0}, {0, 1}, {1, 1}, {1, 0}}));
    CHECK(is_convex_cell({{1, 0}, {1, 1}, {0, 1}, {0, 0}}));
    // reflex corner
    CHECK_FALSE(is_convex_cell({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}));
    // collinear corner on a hull edge
    CHECK(is_convex_cell({{0, 0}, {1, 0}, {2, 0}, {0, 2}}));
    // pentagram: same-signed turns but winds twice
    CHECK_FALSE(is_convex_cell({{0, 0}, {5, 3}, {-1, 3}, {4, 0}, {2, 5}}));
    CHECK_FALSE(is_convex_cell({{0, 0}, {1, 0}}));
    CHECK_FALSE(is_convex_cell({{0, 0}, {1, 0}, {2, 0}}));
    CHECK_FALSE(is_convex_cell({{0, 0}, {1, 0}, {1, 0}, {0, 1}}));
}

TEST_CASE("is_strict_convex_cw_cell") {
    CHECK(is_strict_convex_cw_cell({{0, 0}, {0, 1}, {1, 1}, {1, 0}}));
    CHECK(is_strict_convex_cw_cell({{0, 0}, {0, 1}, {1, 0}}));
    // counterclockwise
    CHECK_FALSE(is_strict_convex_cw_cell({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    // flat corner not allowed here
    CHECK_FALSE(is_strict_convex_cw_cell({{0, 0}, {0, 2}, {2, 0}, {1, 0}}));
    CHECK_FALSE(is_strict_convex_cw_cell({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}));
}

TEST_CASE("point classification and winding") {
    const auto poly = square2();
    const auto& sq = poly.boundary();
    CHECK(point_vs_cycle({1, 1}, sq) == 1);
    CHECK(point_vs_cycle({0, 1}, sq) == 0);
    CHECK(point_vs_cycle({3, 1}, sq) == -1);
    CHECK(point_vs_cycle({-1, 5}, sq) == -1);

    // clockwise interior winds -1; reversed listing +1
    CHECK(winding_number(sq, {1, 1}) == -1);
    std::vector<Pt> rev(sq.rbegin(), sq.rend());
    CHECK(winding_number(rev, {1, 1}) == 1);
    CHECK(winding_number(sq, {5, 5}) == 0);
}

TEST_CASE("index box") {
    IndexBox box{2};
    CHECK(box.contains({2, -2}));
    CHECK_FALSE(box.contains({3, 0}));
    CHECK(box.points().size() == 25);
    CHECK(covering_box(square2()).n == 2);
}

TEST_CASE("polygon canonical key") {
    auto sq = unit_square();
    auto shifted = LatticePolygon::from_boundary({{5, -3}, {5, -2}, {6, -2}, {6, -3}});
    auto rotated = LatticePolygon::from_boundary({{1, 1}, {1, 0}, {0, 0}, {0, 1}});
    CHECK(canonical_key(sq) == canonical_key(shifted));
    CHECK(canonical_key(sq) == canonical_key(rotated));
    CHECK(canonical_key(sq) != canonical_key(unit_triangle()));
}

TEST_CASE("orient_d") {
    std::vector<PtD> tet = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK(orient_d(tet) == 1);
    std::vector<PtD> swapped = {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
    CHECK(orient_d(swapped) == -1);
    std::vector<PtD> flat = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
    CHECK(orient_d(flat) == 0);
    CHECK_THROWS_AS(orient_d({{0, 0}, {1, 0}}), schema_error);
}

TEST_CASE("orient_d under unimodular maps") {
    std::vector<PtD> pts = {{0, 0, 0}, {2, 1, 0}, {1, 3, 1}, {0, 1, 4}};
    const Int base = orient_d(pts);
    // det +1 map: (x, y, z) -> (x + y, y, z)
    std::vector<PtD> mapped;
    for (const PtD& p : pts) mapped.push_back({p[0] + p[1], p[1], p[2]});
    CHECK(orient_d(mapped) == base);
    // det -1 map: swap x and y
    mapped.clear();
    for (const PtD& p : pts) mapped.push_back({p[1], p[0], p[2]});
    CHECK(orient_d(mapped) == -base);
}

TEST_CASE("det_int") {
    CHECK(det_int({{1, 2}, {3, 4}}) == -2);
    CHECK(det_int({{2, 0, 0}, {0, 3, 0}, {0, 0, 4}}) == 24);
    CHECK(det_int({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}) == 0);
    CHECK(det_int({{0, 1}, {1, 0}}) == -1);
}

namespace {

SimplicialPolytope unit_tet() {
    return make_simplicial_polytope(
        3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
        {{1, 2, 3}, {0, 2, 1}, {0, 1, 3}, {0, 3, 2}});
}

} // namespace

TEST_CASE("simplicial polytope validation and queries") {
    auto tet = unit_tet();
    CHECK(normalized_volume(tet) == 1);
    CHECK(lattice_points(tet).size() == 4);
    CHECK(interior_points(tet).empty());

    CHECK(point_vs_polytope({0, 0, 0}, tet) == 0);
    CHECK(point_vs_polytope({1, 1, 1}, tet) == -1);

    // facet flipped inward
    CHECK_THROWS_AS(make_simplicial_polytope(
                        3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                        {{3, 2, 1}, {0, 2, 1}, {0, 1, 3}, {0, 3, 2}}),
                    schema_error);
    // missing facet leaves open ridges
    CHECK_THROWS_AS(make_simplicial_polytope(
                        3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                        {{1, 2, 3}, {0, 2, 1}, {0, 1, 3}}),
                    schema_error);
}

TEST_CASE("scaled simplex interior count") {
    auto tet4 = make_simplicial_polytope(
        3, {{0, 0, 0}, {4, 0, 0}, {0, 4, 0}, {0, 0, 4}},
        {{1, 2, 3}, {0, 2, 1}, {0, 1, 3}, {0, 3, 2}});
    CHECK(normalized_volume(tet4) == 64);
    const auto inner = interior_points(tet4);
    REQUIRE(inner.size() == 1);
    CHECK(inner[0] == PtD{1, 1, 1});
}

TEST_CASE("polytope canonical key") {
    auto tet = unit_tet();
    auto shifted = make_simplicial_polytope(
        3, {{2, -1, 3}, {3, -1, 3}, {2, 0, 3}, {2, -1, 4}},
        {{1, 2, 3}, {0, 2, 1}, {0, 1, 3}, {0, 3, 2}});
    CHECK(canonical_key(tet) == canonical_key(shifted));
}
