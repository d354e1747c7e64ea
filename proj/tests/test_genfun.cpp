#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polycorr/genfun.hpp"
#include "polycorr/io.hpp"

#include <map>

using namespace polycorr;

namespace {

LatticePolygon unit_triangle() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 1}, {1, 0}});
}
LatticePolygon unit_square() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
}
LatticePolygon square2_midpoints() {
    return LatticePolygon::from_boundary(
        {{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}, {2, 1}, {2, 0}, {1, 0}});
}
LatticePolygon degenerate_triangle() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 1}, {2, 0}});
}
LatticePolygon ell_hexagon() {
    return LatticePolygon::from_boundary({{0, 2}, {1, 2}, {1, 1}, {2, 1}, {2, 0}, {0, 0}});
}

Exponent xmono(int beta, std::map<Pt, int> x) {
    Exponent e;
    e.beta = beta;
    e.x = std::move(x);
    return e;
}

} // namespace

TEST_CASE("direct correlator of the unit triangle") {
    GenPoly expected = GenPoly::monomial(xmono(1, {{{0, 0}, 1}, {{0, 1}, 1}, {{1, 0}, 1}}));
    CHECK(correlator_direct(unit_triangle()) == expected);
}

TEST_CASE("direct correlator of the unit square") {
    GenPoly expected;
    expected.add_term(xmono(2, {{{0, 0}, 2}, {{0, 1}, 1}, {{1, 1}, 2}, {{1, 0}, 1}}), 1);
    expected.add_term(xmono(2, {{{0, 0}, 1}, {{0, 1}, 2}, {{1, 1}, 1}, {{1, 0}, 2}}), 1);
    GenPoly got = correlator_direct(unit_square());
    CHECK(got == expected);

    GenPoly at_zero = got.set_x_zero();
    CHECK(at_zero == beta_pow(2) * 2);
    CHECK(genpoly_to_json(at_zero) == "[{\"beta\":2,\"coeff\":2,\"mu\":0,\"t\":{},\"x\":{}}]");
}

TEST_CASE("beta degrees") {
    CHECK(beta_degree(correlator_direct(unit_square())) == 2);
    CHECK(beta_degree(correlator_direct(degenerate_triangle())) == 1);
    CHECK(beta_degree(correlator_direct(square2_midpoints())) == 8);

    GenPoly deg = correlator_direct(degenerate_triangle());
    GenPoly expected = GenPoly::monomial(xmono(1, {{{0, 0}, 2}, {{0, 1}, 2}, {{2, 0}, 2}}));
    CHECK(deg == expected);
}

TEST_CASE("per-term volume grading") {
    for (const auto& poly : {unit_triangle(), unit_square(), degenerate_triangle(),
                             square2_midpoints(), ell_hexagon()}) {
        GenPoly p = correlator_direct(poly);
        std::map<int, Coeff> by_beta;
        for (const auto& [e, c] : p.terms()) {
            CHECK(c >= 1);
            long long xsum = 0;
            for (const auto& [a, k] : e.x) xsum += k;
            CHECK(xsum == 3 * poly.twice_area());
            by_beta[e.beta] += c;
        }
        std::map<int, Coeff> counts;
        for (const auto& tau : enumerate_triangulations(poly))
            counts[static_cast<int>(tau.triangles.size())] += 1;
        CHECK(by_beta == counts);
    }
}

TEST_CASE("subdivision generating function of the unit triangle") {
    Exponent e;
    e.t[1] = 1;
    e.mu = -3;
    e.x = {{{0, 0}, 1}, {{0, 1}, 1}, {{1, 0}, 1}};
    CHECK(subdivision_genfun(unit_triangle()) == GenPoly::monomial(e, 3));
}

TEST_CASE("subdivision generating function of the unit square") {
    GenPoly got = subdivision_genfun(unit_square());

    Exponent quad;
    quad.t[2] = 1;
    quad.mu = -4;
    quad.x = {{{0, 0}, 2}, {{0, 1}, 2}, {{1, 1}, 2}, {{1, 0}, 2}};
    Exponent diag_a;
    diag_a.t[1] = 2;
    diag_a.mu = -5;
    diag_a.x = {{{0, 0}, 2}, {{0, 1}, 1}, {{1, 1}, 2}, {{1, 0}, 1}};
    Exponent diag_b;
    diag_b.t[1] = 2;
    diag_b.mu = -5;
    diag_b.x = {{{0, 0}, 1}, {{0, 1}, 2}, {{1, 1}, 1}, {{1, 0}, 2}};

    GenPoly expected = GenPoly::monomial(quad, 4) + GenPoly::monomial(diag_a, 9) +
                       GenPoly::monomial(diag_b, 9);
    CHECK(got == expected);

    Exponent z_quad;
    z_quad.t[2] = 1;
    z_quad.mu = -4;
    Exponent z_tri;
    z_tri.t[1] = 2;
    z_tri.mu = -5;
    CHECK(got.set_x_zero() == GenPoly::monomial(z_quad, 4) + GenPoly::monomial(z_tri, 18));
}

TEST_CASE("nonconvex region admits no single-cell term") {
    GenPoly p = subdivision_genfun(ell_hexagon());
    CHECK(!p.is_zero());
    for (const auto& [e, c] : p.terms()) {
        int cells = 0;
        for (const auto& [q, k] : e.t) cells += k;
        CHECK(cells >= 2);
        CHECK(e.t.count(4) == 0);
    }
}

TEST_CASE("triangle-only slice matches the direct correlator") {
    for (const auto& poly : {unit_triangle(), unit_square(), ell_hexagon(),
                             degenerate_triangle()}) {
        const int m = static_cast<int>(poly.n());
        GenPoly rebuilt;
        const GenPoly sub = subdivision_genfun(poly);
        for (const auto& [e, c] : sub.terms()) {
            if (e.t.size() != 1 || e.t.count(1) == 0) continue;
            const int k = e.t.at(1);
            CHECK(e.mu == -(3 * k + m) / 2);
            Coeff pow3 = 1;
            for (int i = 0; i < k; ++i) pow3 *= 3;
            REQUIRE(c % pow3 == 0);
            Exponent stripped;
            stripped.beta = k;
            stripped.x = e.x;
            rebuilt.add_term(stripped, c / pow3);
        }
        CHECK(rebuilt == correlator_direct(poly));
    }
}
