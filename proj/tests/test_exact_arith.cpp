#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "filippov/errors.hpp"
#include "filippov/matrix.hpp"
#include "filippov/multipoly.hpp"
#include "filippov/random.hpp"
#include "filippov/rational.hpp"

#include "oracles.hpp"

using namespace filippov;

namespace
{

MultiPoly x(int nv, int i)
{
    return MultiPoly::variable(nv, i);
}

PolyVectorField random_field(Rng &rng, int nv)
{
    PolyVectorField v(nv);
    for (int i = 0; i < nv; ++i)
        v[static_cast<std::size_t>(i)] = rng.small_poly(nv, 2);
    return v;
}

} // namespace

TEST_CASE("rationals stay canonical")
{
    Rational a = parse_rational("-6/4");
    CHECK(a.get_num() == -3);
    CHECK(a.get_den() == 2);
    CHECK(to_string(a) == "-3/2");
    CHECK(to_string(parse_rational("10/5")) == "2");
    CHECK_THROWS_AS(parse_rational("1/0"), input_error);
    CHECK_THROWS_AS(parse_rational("abc"), input_error);
    CHECK_THROWS_AS(parse_rational(""), input_error);
    Rational big = parse_rational("123456789012345678901234567890/7");
    CHECK(to_string(big * 7) == "123456789012345678901234567890");
}

TEST_CASE("poly_arith examples")
{
    MultiPoly one = MultiPoly::constant(1, 1);
    CHECK(poly_arith(x(1, 0), x(1, 0), PolyOp::add) == x(1, 0) * Rational(2));
    CHECK(poly_arith(x(1, 0) + one, x(1, 0) - one, PolyOp::mul) == x(1, 0) * x(1, 0) - one);
    Rng rng(3);
    for (int t = 0; t < 10; ++t)
        CHECK(poly_arith(MultiPoly(3), rng.small_poly(3, 3), PolyOp::mul).is_zero());
    CHECK(poly_arith(x(2, 1), MultiPoly(2), PolyOp::scale, Rational(1, 3)) == x(2, 1) * Rational(1, 3));
    CHECK_THROWS_AS(poly_arith(x(1, 0), x(2, 0), PolyOp::add), dimension_error);
}

TEST_CASE("no zero terms are stored")
{
    MultiPoly p = x(2, 0) - x(2, 0);
    CHECK(p.is_zero());
    CHECK(p.terms().empty());
    CHECK(p.degree() == -1);
    MultiPoly q = x(2, 0) * Rational(0);
    CHECK(q.terms().empty());
}

TEST_CASE("ring axioms on random triples")
{
    Rng rng(11);
    for (int t = 0; t < 40; ++t) {
        auto a = rng.small_poly(3, 3), b = rng.small_poly(3, 3), c = rng.small_poly(3, 3);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(a + b - b == a);
    }
}

TEST_CASE("vf_apply examples")
{
    CHECK(vf_apply(PolyVectorField::coordinate(1, 0), x(1, 0) * x(1, 0)) == x(1, 0) * Rational(2));
    PolyVectorField v(1);
    v[0] = x(1, 0);
    CHECK(vf_apply(v, MultiPoly::constant(1, 7)).is_zero());
    // product-rule expansion of (x2 d1 + d2)(x1 x2)
    PolyVectorField w(2);
    w[0] = x(2, 1);
    w[1] = MultiPoly::constant(2, 1);
    CHECK(vf_apply(w, x(2, 0) * x(2, 1)) == x(2, 1) * x(2, 1) + x(2, 0));
}

TEST_CASE("vf_bracket examples")
{
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        auto v = random_field(rng, 3);
        CHECK(vf_bracket(v, v).is_zero());
    }
    PolyVectorField xd(1);
    xd[0] = x(1, 0);
    CHECK(vf_bracket(PolyVectorField::coordinate(1, 0), xd) == PolyVectorField::coordinate(1, 0));
    CHECK(vf_bracket(PolyVectorField::coordinate(2, 0), PolyVectorField::coordinate(2, 1)).is_zero());
}

TEST_CASE("vector field bracket properties")
{
    Rng rng(17);
    for (int t = 0; t < 20; ++t) {
        auto u = random_field(rng, 3), v = random_field(rng, 3), w = random_field(rng, 3);
        auto f = rng.small_poly(3, 3);
        auto jac = vf_bracket(u, vf_bracket(v, w)) + vf_bracket(v, vf_bracket(w, u)) + vf_bracket(w, vf_bracket(u, v));
        CHECK(jac.is_zero());
        CHECK(vf_apply(vf_bracket(v, w), f) == vf_apply(v, vf_apply(w, f)) - vf_apply(w, vf_apply(v, f)));
    }
}

TEST_CASE("rank_nullspace examples")
{
    auto id = rank_nullspace(RationalMatrix::identity(3));
    CHECK(id.rank == 3);
    CHECK(id.nullspace.empty());
    auto z = rank_nullspace(RationalMatrix(2, 5));
    CHECK(z.rank == 0);
    CHECK(z.nullspace.size() == 5);
    auto m = rank_nullspace(RationalMatrix::from_rows({Vector{1, 2}, Vector{2, 4}}));
    CHECK(m.rank == 1);
    REQUIRE(m.nullspace.size() == 1);
    CHECK(m.nullspace[0] == Vector{-2, 1});
}

TEST_CASE("rank agrees with the naive elimination oracle")
{
    Rng rng(23);
    for (int t = 0; t < 40; ++t) {
        std::size_t r = static_cast<std::size_t>(rng.uniform(1, 6)), c = static_cast<std::size_t>(rng.uniform(1, 6));
        auto m = rng.small_matrix(r, c);
        // force some dependence
        if (r > 2)
            for (std::size_t j = 0; j < c; ++j)
                m(r - 1, j) = m(0, j) * Rational(2) - m(1, j);
        oracle::Mat rows;
        for (std::size_t i = 0; i < r; ++i)
            rows.push_back(m.row(i));
        auto rn = rank_nullspace(m);
        CHECK(rn.rank == oracle::rank(rows));
        CHECK(rn.rank + rn.nullspace.size() == c);
        for (const auto &v : rn.nullspace)
            CHECK(is_zero(m * v));
    }
}

TEST_CASE("solve and inverse")
{
    auto m = RationalMatrix::from_rows({Vector{2, 1}, Vector{1, 1}});
    auto x = solve(m, Vector{3, 2});
    REQUIRE(x);
    CHECK(*x == Vector{1, 1});
    CHECK(!solve(RationalMatrix::from_rows({Vector{1, 1}, Vector{1, 1}}), {1, 2}));
    auto inv = inverse(m);
    REQUIRE(inv);
    CHECK(*inv * m == RationalMatrix::identity(2));
    CHECK(!inverse(RationalMatrix::from_rows({Vector{1, 2}, Vector{2, 4}})));
}
