#include "filippov/random.hpp"

namespace filippov
{

int Rng::uniform(int lo, int hi)
{
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
}

Rational Rng::small_rational(int bound, int den_bound)
{
    Rational r(uniform(-bound, bound), uniform(1, den_bound));
    r.canonicalize();
    return r;
}

Vector Rng::small_vector(std::size_t n, int bound, int den_bound)
{
    Vector v(n);
    for (auto &x : v)
        x = small_rational(bound, den_bound);
    return v;
}

RationalMatrix Rng::small_matrix(std::size_t rows, std::size_t cols, int bound, int den_bound)
{
    RationalMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = small_rational(bound, den_bound);
    return m;
}

RationalMatrix Rng::invertible_matrix(std::size_t n, int bound)
{
    while (true) {
        RationalMatrix m = small_matrix(n, n, bound, 1);
        if (rank(m) == n)
            return m;
    }
}

MultiPoly Rng::small_poly(int num_vars, int max_degree, int max_terms)
{
    MultiPoly out(num_vars);
    int terms = uniform(1, max_terms);
    for (int t = 0; t < terms; ++t) {
        Exponents e(static_cast<std::size_t>(num_vars), 0);
        int budget = uniform(0, max_degree);
        for (int d = 0; d < budget && num_vars > 0; ++d)
            ++e[static_cast<std::size_t>(uniform(0, num_vars - 1))];
        out.add_term(e, small_rational());
    }
    return out;
}

} // namespace filippov
