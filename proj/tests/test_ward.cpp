#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polycorr/ward.hpp"

#include <stdexcept>
#include <vector>

using namespace polycorr;

namespace {

LatticePolygon unit_triangle() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 1}, {1, 0}});
}
LatticePolygon unit_square() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
}
LatticePolygon degenerate_triangle() {
    return LatticePolygon::from_boundary({{0, 0}, {0, 1}, {2, 0}});
}
LatticePolygon ell_hexagon() {
    return LatticePolygon::from_boundary(
        {{0, 2}, {1, 2}, {1, 1}, {2, 1}, {2, 0}, {0, 0}});
}

DiffOp op_term(std::map<int, int> t, std::map<int, int> d, Coeff c,
               int mu = 0, int npow = 0) {
    OpKey key;
    key.t = std::move(t);
    key.d = std::move(d);
    key.mu = mu;
    key.npow = npow;
    DiffOp r;
    r.add_term(key, c);
    return r;
}

int d_order(const OpKey& key) {
    int s = 0;
    for (const auto& [v, o] : key.d) s += o;
    return s;
}

} // namespace

TEST_CASE("operator composition follows the Leibniz rule") {
    const DiffOp d1 = DiffOp::deriv(1);
    const DiffOp t1 = DiffOp::t_mult(1);

    CHECK(compose(d1, t1) ==
          op_term({{1, 1}}, {{1, 1}}, 1) + DiffOp::identity());
    CHECK(compose(t1, d1) == op_term({{1, 1}}, {{1, 1}}, 1));

    const DiffOp a = compose(DiffOp::t_mult(2), DiffOp::deriv(3));
    const DiffOp b = compose(DiffOp::t_mult(3), DiffOp::deriv(5));
    CHECK(compose(a, b) == op_term({{2, 1}}, {{5, 1}}, 1) +
                               op_term({{2, 1}, {3, 1}}, {{3, 1}, {5, 1}}, 1));

    const DiffOp v = hmm_virasoro(2, 8);
    CHECK(compose(v, DiffOp::identity()) == v);
    CHECK(compose(DiffOp::identity(), v) == v);

    SUBCASE("higher orders pick up falling factorials") {
        const DiffOp d2 = compose(d1, d1);
        const DiffOp t3 = compose(t1, compose(t1, t1));
        // d^2 t^3 = t^3 d^2 + 6 t^2 d + 6 t
        CHECK(compose(d2, t3) == op_term({{1, 3}}, {{1, 2}}, 1) +
                                     op_term({{1, 2}}, {{1, 1}}, 6) +
                                     op_term({{1, 1}}, {}, 6));
    }

    SUBCASE("associativity on mixed operators") {
        const DiffOp p = op_term({{1, 1}}, {{2, 1}}, 2) +
                         op_term({}, {{0, 1}}, 1, 1) + DiffOp::identity();
        const DiffOp q = op_term({{2, 2}}, {{1, 1}}, 3) +
                         op_term({{0, 1}}, {}, -1, 0, 1);
        const DiffOp r = op_term({{1, 1}, {2, 1}}, {{2, 2}}, 1) +
                         op_term({}, {{1, 1}, {2, 1}}, 5);
        CHECK(compose(compose(p, q), r) == compose(p, compose(q, r)));
        CHECK(compose(compose(q, p), r) == compose(q, compose(p, r)));
    }

    SUBCASE("index validation") {
        CHECK_THROWS_AS(DiffOp::t_mult(-1), std::invalid_argument);
        CHECK_THROWS_AS(DiffOp::deriv(-2), std::invalid_argument);
    }
}

TEST_CASE("operator action on polynomials") {
    const DiffOp d1 = DiffOp::deriv(1);
    CHECK(apply(d1, t_var(1, 3)) == 3 * t_var(1, 2));
    CHECK(apply(d1, t_var(2)) == GenPoly{});
    CHECK(apply(compose(d1, d1), t_var(1, 3)) == 6 * t_var(1));

    // a mu- and N-carrying term multiplies through
    const DiffOp shift = op_term({}, {{1, 1}}, -1, 1, 2);
    CHECK(apply(shift, t_var(1) * mu_pow(-3)) ==
          -1 * mu_pow(-2) * n_pow(2));

    CHECK(apply(DiffOp::t_mult(0), GenPoly::constant(4)) == 4 * t_var(0));
    CHECK_THROWS_AS(apply(d1, x_var({0, 0})), std::invalid_argument);
}

TEST_CASE("constraint generators of the reference model") {
    SUBCASE("lowest generator gains the linear closure term") {
        DiffOp expected = op_term({}, {{1, 1}}, -1, 1) +
                          op_term({{1, 1}}, {{0, 1}}, 1) +
                          op_term({{1, 1}}, {}, 1, 0, 1);
        for (int k = 2; k <= 6; ++k)
            expected += op_term({{k, 1}}, {{k - 1, 1}}, k);
        CHECK(hmm_virasoro(-1, 6) == expected);
    }

    SUBCASE("zeroth generator carries the N^2 constant") {
        DiffOp expected = op_term({}, {{2, 1}}, -1, 1) +
                          op_term({}, {{0, 2}}, 1) +
                          op_term({}, {{0, 1}}, 2, 0, 1) +
                          op_term({}, {}, 1, 0, 2);
        for (int k = 1; k <= 5; ++k)
            expected += op_term({{k, 1}}, {{k, 1}}, k);
        CHECK(hmm_virasoro(0, 5) == expected);
    }

    SUBCASE("second-derivative block of the first generator") {
        const DiffOp v = hmm_virasoro(1, 9);
        DiffOp quad;
        for (const auto& [key, c] : v.terms())
            if (key.t.empty() && d_order(key) == 2) quad.add_term(key, c);
        CHECK(quad == op_term({}, {{0, 1}, {1, 1}}, 2));
    }

    SUBCASE("quadratic block spreads across the split") {
        const DiffOp v = hmm_virasoro(2, 9);
        DiffOp quad;
        for (const auto& [key, c] : v.terms())
            if (key.t.empty() && d_order(key) == 2) quad.add_term(key, c);
        CHECK(quad ==
              op_term({}, {{0, 1}, {2, 1}}, 2) + op_term({}, {{1, 2}}, 1));
    }

    SUBCASE("domain checks") {
        CHECK_THROWS_AS(hmm_virasoro(-2, 10), std::invalid_argument);
        CHECK_THROWS_AS(hmm_virasoro(1, 2), std::invalid_argument);
    }
}

TEST_CASE("commutator closure of the truncated generators") {
    CHECK(check_virasoro(0, 1, 12, 6));
    CHECK(check_virasoro(3, 3, 8, 4));
    CHECK(check_virasoro(-1, 1, 12, 6));

    SUBCASE("bracket with the lowest generator doubles the zeroth") {
        const int K = 12;
        const DiffOp bracket =
            compose(hmm_virasoro(1, K), hmm_virasoro(-1, K)) -
            compose(hmm_virasoro(-1, K), hmm_virasoro(1, K));
        const DiffOp twice = hmm_virasoro(0, K) * 2;
        const GenPoly probe =
            t_var(1) * t_var(3, 2) + t_var(0) * t_var(2) + GenPoly::constant(1);
        CHECK(apply(bracket, probe) == apply(twice, probe));
    }

    SUBCASE("full low-index window") {
        for (int n = -1; n <= 4; ++n)
            for (int m = -1; m <= 4; ++m) {
                INFO("n=" << n << " m=" << m);
                CHECK(check_virasoro(n, m, 12, 6));
            }
    }

    SUBCASE("a too-small window is reported, not a failure") {
        CHECK_THROWS_AS(check_virasoro(1, 2, 5, 7), window_error);
    }
}

TEST_CASE("fan insertions splice admissible cells into the cycle") {
    const auto tri = unit_triangle().boundary();
    const auto reg = lattice_points(unit_triangle());

    const CorrelatorSum one = insert_ihat(tri, 1, reg);
    REQUIRE(one.terms.size() == 3);
    for (const auto& [cycle, w] : one.terms) {
        CHECK(cycle.size() == 4);
        CHECK(w == GenPoly::constant(1));
    }
    const std::vector<Pt> spliced{{0, 0}, {1, 0}, {0, 1}, {1, 0}};
    CHECK(one.terms.count(spliced) == 1);
    const std::vector<Pt> wrapped{{0, 0}, {0, 1}, {1, 0}, {0, 1}};
    CHECK(one.terms.count(wrapped) == 1);

    // no strictly convex 4-gon fits in a three-point region
    CHECK(insert_ihat(tri, 2, reg).terms.empty());

    const auto sq = unit_square().boundary();
    const CorrelatorSum sq_one = insert_ihat(sq, 1, lattice_points(unit_square()));
    CHECK(sq_one.terms.size() == 8);
    for (const auto& [cycle, w] : sq_one.terms) CHECK(cycle.size() == 5);

    CHECK_THROWS_AS(insert_ihat(tri, 0, reg), std::invalid_argument);
    CHECK_THROWS_AS(insert_ihat(std::vector<Pt>{{0, 0}}, 1, reg),
                    std::invalid_argument);
}

TEST_CASE("constraint residual vanishes on the cell-model correlator") {
    CHECK(ward_residual(unit_triangle(), 1, 2).is_zero());
    CHECK(ward_residual(unit_square(), 1, 2).is_zero());
    CHECK(ward_residual(unit_square(), 2, 2).is_zero());
    CHECK(ward_residual(degenerate_triangle(), 1, 2).is_zero());
    CHECK(ward_residual(ell_hexagon(), 1, 1).is_zero());

    CHECK_THROWS_AS(ward_residual(unit_square(), 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(ward_residual(unit_square(), 1, -1), std::invalid_argument);
}
