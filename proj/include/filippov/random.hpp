#ifndef FILIPPOV_RANDOM_HPP
#define FILIPPOV_RANDOM_HPP

#include <cstdint>
#include <random>

#include "filippov/matrix.hpp"
#include "filippov/multipoly.hpp"
#include "filippov/rational.hpp"

namespace filippov
{

// Seeded source for the sampled families. Draws are reduced by modulo on the
// raw engine output so that sequences do not depend on the standard library's
// distribution implementations.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform-ish integer in [lo, hi].
    int uniform(int lo, int hi);
    bool chance(int percent) { return uniform(0, 99) < percent; }
    // p/q with |p| <= bound, q in 1..den_bound.
    Rational small_rational(int bound = 3, int den_bound = 2);
    Vector small_vector(std::size_t n, int bound = 3, int den_bound = 2);
    RationalMatrix small_matrix(std::size_t rows, std::size_t cols, int bound = 3, int den_bound = 2);
    // Random matrix with nonzero determinant.
    RationalMatrix invertible_matrix(std::size_t n, int bound = 2);
    // Up to max_terms monomials of total degree <= max_degree.
    MultiPoly small_poly(int num_vars, int max_degree, int max_terms = 3);

private:
    std::mt19937_64 engine_;
};

} // namespace filippov

#endif
