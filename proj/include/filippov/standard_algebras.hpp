#ifndef FILIPPOV_STANDARD_ALGEBRAS_HPP
#define FILIPPOV_STANDARD_ALGEBRAS_HPP

#include "filippov/matrix.hpp"
#include "filippov/nlie.hpp"
#include "filippov/random.hpp"

namespace filippov
{

NLieAlgebra zero_algebra(int arity, int dim);

// The 4-dimensional 3-Lie algebra [e1,e2,e3]=e4, [e1,e2,e4]=-e3,
// [e1,e3,e4]=e2, [e2,e3,e4]=-e1.
NLieAlgebra epsilon_algebra();

// Basis h, e, f with [h,e]=2e, [h,f]=-2f, [e,f]=h.
NLieAlgebra sl2();

// so(3): [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2.
NLieAlgebra so3();

// R acting on R^2 by a diagonal matrix: [e1,e2]=e2, [e1,e3]=-e3.
NLieAlgebra r_ltimes_r2();

// n=3, m=4 with [e1,e2,e3]=e1 and [e1,e2,e4]=e4; violates the fundamental
// identity at x = e2^e3, y = (e1,e2,e4).
NLieAlgebra fi_violating_example();

// Direct sum: brackets vanish as soon as both summands appear.
NLieAlgebra direct_sum(const NLieAlgebra &a, const NLieAlgebra &b);

// Bracket transported along the basis change p: [x..]' = p^{-1}[p x, ..].
NLieAlgebra change_basis(const NLieAlgebra &a, const RationalMatrix &p);

// Independent small rational structure constants; each key is nonzero with
// the given percentage.
NLieAlgebra random_bracket(Rng &rng, int arity, int dim, int density_percent = 50);

// One of sl2, so3, R|x R^2, Heisenberg or abelian in a random basis.
NLieAlgebra random_lie_algebra_3d(Rng &rng);

} // namespace filippov

#endif
