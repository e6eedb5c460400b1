#ifndef FILIPPOV_COHOMOLOGY_HPP
#define FILIPPOV_COHOMOLOGY_HPP

#include <cstddef>
#include <vector>

#include "filippov/cochain.hpp"
#include "filippov/matrix.hpp"
#include "filippov/nlie.hpp"

namespace filippov
{

// Degrees above this need allow_high_degree.
inline constexpr int default_degree_cap = 3;

// Matrix of delta_F : C^k_F -> C^{k+1}_F (C^k_F = Der^{k-1}) in the indicator
// bases. Throws precondition_error when the bracket violates the fundamental
// identity.
RationalMatrix differential_matrix(const NLieAlgebra &a, int k);
RationalMatrix differential_matrix(const CoboundaryOperator &d, int k);

struct CohomologyReport
{
    int degree = 0;
    std::size_t dim_cochains = 0;
    std::size_t rank_d_out = 0;
    std::size_t rank_d_in = 0;
    std::size_t betti = 0;
    // Cocycles spanning a complement of the coboundaries.
    std::vector<Cochain> representatives;
};

CohomologyReport cohomology(const NLieAlgebra &a, int k, bool allow_high_degree = false);

// Derivations modulo inner ones, as matrices.
std::vector<LinearMap> outer_derivations(const NLieAlgebra &a);

// Chevalley-Eilenberg differential of a Lie algebra (arity 2) with adjoint
// coefficients, Hom(Lambda^k L, L) -> Hom(Lambda^{k+1} L, L), basis index
// rank(subset)*m + component:
//   (dc)(x_0..x_k) = sum_i (-1)^i [x_i, c(..^x_i..)]
//                  + sum_{i<j} (-1)^{i+j} c([x_i,x_j], ..^x_i..^x_j..)
RationalMatrix ce_differential_matrix(const NLieAlgebra &a, int k);

// Agreement of the generic complex with the Chevalley-Eilenberg complex in one
// degree. On C^0 the generic differential is ad_X, which is the negative of
// the CE differential (dx)(y) = [y, x]; that sign is part of the comparison.
struct LieReductionReport
{
    int degree = 0;
    bool agree = false;
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool generic_zero = false;
    bool ce_zero = false;
};

// Degrees 0..max_degree (at most 2). Throws dimension_error for arity != 2.
std::vector<LieReductionReport> reduce_lie(const NLieAlgebra &a, int max_degree = 2);

} // namespace filippov

#endif
