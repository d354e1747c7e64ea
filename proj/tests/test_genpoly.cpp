#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polycorr/errors.hpp"
#include "polycorr/genpoly.hpp"
#include "polycorr/io.hpp"

#include <random>

using namespace polycorr;

namespace {

GenPoly random_poly(std::mt19937& rng) {
    std::uniform_int_distribution<int> nterms(0, 4), small(-2, 2), coeff(-5, 5);
    GenPoly p;
    const int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        Exponent e;
        e.beta = std::abs(small(rng));
        e.mu = small(rng);
        if (int k = std::abs(small(rng)); k != 0) e.t[1 + std::abs(small(rng))] = k;
        if (int k = small(rng); k != 0) e.x[Pt{small(rng), small(rng)}] = k;
        p.add_term(e, coeff(rng));
    }
    return p;
}

} // namespace

TEST_CASE("basic arithmetic and zero handling") {
    GenPoly p = beta_pow(1) * x_var({0, 0}) + GenPoly::constant(2);
    CHECK((p - p).is_zero());
    CHECK(p + GenPoly() == p);
    CHECK((p * GenPoly()).is_zero());
    CHECK(p * GenPoly::constant(1) == p);

    GenPoly q = (GenPoly::constant(1) + beta_pow(1)) * (GenPoly::constant(1) - beta_pow(1));
    CHECK(q == GenPoly::constant(1) - beta_pow(2));
}

TEST_CASE("laurent exponents cancel") {
    GenPoly p = mu_pow(-3) * mu_pow(3);
    CHECK(p == GenPoly::constant(1));
    GenPoly q = t_var(2) * t_var(2, -1);
    CHECK(q == GenPoly::constant(1));
}

TEST_CASE("ring identities on random sparse instances") {
    std::mt19937 rng(777);
    for (int iter = 0; iter < 60; ++iter) {
        GenPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("divide_exact") {
    GenPoly p = GenPoly::constant(6) + beta_pow(2) * 4;
    GenPoly h = p.divide_exact(2);
    CHECK(h == GenPoly::constant(3) + beta_pow(2) * 2);
    CHECK_THROWS_AS(p.divide_exact(4), std::logic_error);
    CHECK_THROWS_AS(p.divide_exact(0), std::logic_error);
}

TEST_CASE("beta degree") {
    GenPoly p = beta_pow(2) * 5 + beta_pow(7) - GenPoly::constant(3);
    CHECK(p.beta_degree() == 7);
    CHECK_THROWS_AS(GenPoly().beta_degree(), schema_error);
}

TEST_CASE("x evaluation at zero merges terms") {
    GenPoly sq =
        beta_pow(2) * (x_var({0, 0}, 2) * x_var({0, 1}) * x_var({1, 1}, 2) * x_var({1, 0}) +
                       x_var({0, 0}) * x_var({1, 0}, 2) * x_var({1, 1}) * x_var({0, 1}, 2));
    CHECK(sq.set_x_zero() == beta_pow(2) * 2);
}

TEST_CASE("canonical string form") {
    CHECK(GenPoly().str() == "0");
    CHECK(GenPoly::constant(1).str() == "1");
    CHECK((-beta_pow(1)).str() == "-beta");
    CHECK((t_var(1) * mu_pow(-3) * 3).str() == "3*mu^-3*t1");
    GenPoly two_terms = beta_pow(2) * 2 - mu_pow(1) * n_pow(2);
    CHECK(two_terms.str() == "-mu*N^2 + 2*beta^2");
    CHECK((x_var({0, 1}, 2) * t_var(2)).str() == "t2*x[0,1]^2");
}

TEST_CASE("genpoly json is canonical") {
    CHECK(genpoly_to_json(GenPoly()) == "[]");
    GenPoly p = beta_pow(2) * 2;
    CHECK(genpoly_to_json(p) == R"([{"beta":2,"coeff":2,"mu":0,"t":{},"x":{}}])");
    GenPoly q = t_var(1) * mu_pow(-3) * x_var({0, 0}) * 3;
    CHECK(genpoly_to_json(q) ==
          R"([{"beta":0,"coeff":3,"mu":-3,"t":{"1":1},"x":{"0,0":1}}])");
    GenPoly with_n = n_pow(2) * ttree_var("v1") * 2;
    CHECK(genpoly_to_json(with_n) ==
          R"([{"N":2,"beta":0,"coeff":2,"mu":0,"t":{},"t_tree":{"v1":1},"x":{}}])");
}

TEST_CASE("polygon json roundtrip") {
    const std::string text = R"({"dim":2,"boundary":[[0,0],[0,1],[1,1],[1,0]]})";
    LatticePolygon sq = parse_polygon_json(text);
    CHECK(sq.n() == 4);
    CHECK(polygon_to_json(sq) == R"({"boundary":[[0,0],[0,1],[1,1],[1,0]],"dim":2})");
    CHECK(json_input_dim(text) == 2);

    CHECK_THROWS_AS(parse_polygon_json("not json"), schema_error);
    CHECK_THROWS_AS(parse_polygon_json(R"({"dim":2})"), schema_error);
    CHECK_THROWS_AS(parse_polygon_json(R"({"dim":2,"boundary":[[0,0],[1,0]]})"),
                    schema_error);
    CHECK_THROWS_AS(parse_polygon_json(R"({"dim":3,"boundary":[]})"), schema_error);
    // counterclockwise listing is a schema violation, not a silent fix
    CHECK_THROWS_AS(parse_polygon_json(R"({"dim":2,"boundary":[[0,0],[1,0],[0,1]]})"),
                    schema_error);
}

TEST_CASE("polytope json roundtrip") {
    const std::string text =
        R"({"dim":3,"vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]],)"
        R"("facets":[[1,2,3],[0,2,1],[0,1,3],[0,3,2]]})";
    SimplicialPolytope tet = parse_polytope_json(text);
    CHECK(tet.vertices.size() == 4);
    CHECK(normalized_volume(tet) == 1);
    const std::string out = polytope_to_json(tet);
    SimplicialPolytope again = parse_polytope_json(out);
    CHECK(canonical_key(tet) == canonical_key(again));

    CHECK_THROWS_AS(parse_polytope_json(R"({"dim":3,"vertices":[]})"), schema_error);
}
