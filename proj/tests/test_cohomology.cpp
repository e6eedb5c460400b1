#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "filippov/cohomology.hpp"
#include "filippov/errors.hpp"
#include "filippov/random.hpp"
#include "filippov/standard_algebras.hpp"

#include "oracles.hpp"

using namespace filippov;

namespace
{

oracle::Mat rows_of(const RationalMatrix &m)
{
    oracle::Mat r;
    for (std::size_t i = 0; i < m.rows(); ++i)
        r.push_back(m.row(i));
    return r;
}

std::size_t h2_lie_oracle(const NLieAlgebra &a)
{
    auto d1 = oracle::ce_matrix(a, 1), d2 = oracle::ce_matrix(a, 2);
    std::size_t dim2 = oracle::cols_of(d2, 0);
    return dim2 - oracle::rank(d2) - oracle::rank(d1);
}

} // namespace

TEST_CASE("differential matrices")
{
    for (int k = 0; k <= 3; ++k)
        CHECK(differential_matrix(zero_algebra(3, 4), k).is_zero());
    auto eps = epsilon_algebra();
    for (int k = 0; k <= 2; ++k)
        CHECK((differential_matrix(eps, k + 1) * differential_matrix(eps, k)).is_zero());
    CoboundaryOperator d(eps);
    auto m = differential_matrix(eps, 2);
    auto b = basis(4, 3, 1);
    Rng rng(9);
    for (int t = 0; t < 6; ++t) {
        std::size_t j = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(b.size()) - 1));
        CHECK(m.column(j) == d(b[j]).values());
    }
    CHECK_THROWS_AS(differential_matrix(fi_violating_example(), 1), precondition_error);
}

TEST_CASE("zero bracket: every cochain is a class")
{
    auto r = cohomology(zero_algebra(3, 4), 2);
    CHECK(r.dim_cochains == 16);
    CHECK(r.betti == 16);
    CHECK(r.representatives.size() == 16);
}

TEST_CASE("sl2 against the brute-force oracles")
{
    auto s = sl2();
    std::size_t h1 = oracle::derivation_dim(s) - oracle::inner_rank(s);
    CHECK(h1 == 0);
    CHECK(cohomology(s, 1).betti == h1);
    std::size_t h2 = h2_lie_oracle(s);
    CHECK(h2 == 0);
    CHECK(cohomology(s, 2).betti == h2);
    CHECK(outer_derivations(s).empty());
}

TEST_CASE("epsilon bracket H^1 from two oracles")
{
    auto eps = epsilon_algebra();
    std::size_t h1 = oracle::derivation_dim(eps) - oracle::inner_rank(eps);
    CHECK(cohomology(eps, 1).betti == h1);
    CHECK(outer_derivations(eps).size() == h1);
    CHECK(h1 == 0);
}

TEST_CASE("epsilon bracket, all degrees up to the cap")
{
    auto eps = epsilon_algebra();
    for (int k = 0; k <= 3; ++k) {
        auto r = cohomology(eps, k);
        CHECK(r.betti == 0);
        CHECK(r.dim_cochains == r.rank_d_out + r.rank_d_in + r.betti);
    }
    CHECK_THROWS_AS(cohomology(eps, 4), precondition_error);
}

TEST_CASE("outer derivations")
{
    CHECK(outer_derivations(zero_algebra(2, 2)).size() == 4);
    auto a = direct_sum(zero_algebra(2, 1), sl2());
    std::size_t expect = oracle::derivation_dim(a) - oracle::inner_rank(a);
    auto out = outer_derivations(a);
    CHECK(out.size() == expect);
    CHECK(expect == 1);
    for (const auto &dmap : out)
        CHECK(is_derivation(a, dmap));
}

TEST_CASE("Lie reduction")
{
    for (const auto &r : reduce_lie(sl2()))
        CHECK(r.agree);
    for (const auto &r : reduce_lie(zero_algebra(2, 2))) {
        CHECK(r.agree);
        CHECK(r.generic_zero);
        CHECK(r.ce_zero);
    }
    Rng rng(77);
    for (int t = 0; t < 5; ++t) {
        auto a = random_lie_algebra_3d(rng);
        REQUIRE(check_fundamental_identity(a).holds);
        for (const auto &r : reduce_lie(a))
            CHECK(r.agree);
        // library CE matrix against the evaluation oracle
        for (int k = 1; k <= 2; ++k)
            CHECK(rows_of(ce_differential_matrix(a, k)) == oracle::ce_matrix(a, k));
    }
    CHECK_THROWS_AS(reduce_lie(epsilon_algebra()), dimension_error);
}
