#include "filippov/standard_algebras.hpp"

#include <vector>

#include "filippov/errors.hpp"

namespace filippov
{

namespace
{

Vector vec(std::initializer_list<int> xs)
{
    Vector v;
    for (int x : xs)
        v.emplace_back(x);
    return v;
}

} // namespace

NLieAlgebra zero_algebra(int arity, int dim)
{
    return NLieAlgebra(arity, dim);
}

NLieAlgebra epsilon_algebra()
{
    NLieAlgebra a(3, 4);
    a.set_bracket(std::vector{0, 1, 2}, vec({0, 0, 0, 1}));
    a.set_bracket(std::vector{0, 1, 3}, vec({0, 0, -1, 0}));
    a.set_bracket(std::vector{0, 2, 3}, vec({0, 1, 0, 0}));
    a.set_bracket(std::vector{1, 2, 3}, vec({-1, 0, 0, 0}));
    return a;
}

NLieAlgebra sl2()
{
    NLieAlgebra a(2, 3);
    a.set_bracket(std::vector{0, 1}, vec({0, 2, 0}));
    a.set_bracket(std::vector{0, 2}, vec({0, 0, -2}));
    a.set_bracket(std::vector{1, 2}, vec({1, 0, 0}));
    return a;
}

NLieAlgebra so3()
{
    NLieAlgebra a(2, 3);
    a.set_bracket(std::vector{0, 1}, vec({0, 0, 1}));
    a.set_bracket(std::vector{1, 2}, vec({1, 0, 0}));
    a.set_bracket(std::vector{0, 2}, vec({0, -1, 0}));
    return a;
}

NLieAlgebra r_ltimes_r2()
{
    NLieAlgebra a(2, 3);
    a.set_bracket(std::vector{0, 1}, vec({0, 1, 0}));
    a.set_bracket(std::vector{0, 2}, vec({0, 0, -1}));
    return a;
}

namespace
{

NLieAlgebra heisenberg()
{
    NLieAlgebra a(2, 3);
    a.set_bracket(std::vector{0, 1}, vec({0, 0, 1}));
    return a;
}

} // namespace

NLieAlgebra fi_violating_example()
{
    NLieAlgebra a(3, 4);
    a.set_bracket(std::vector{0, 1, 2}, vec({1, 0, 0, 0}));
    a.set_bracket(std::vector{0, 1, 3}, vec({0, 0, 0, 1}));
    return a;
}

NLieAlgebra direct_sum(const NLieAlgebra &a, const NLieAlgebra &b)
{
    if (a.arity() != b.arity())
        throw dimension_error("direct sum of brackets with different arity");
    const int m = a.dim() + b.dim();
    const int n = a.arity();
    NLieAlgebra out(n, m);
    const auto &keys = SubsetIndex::get(m, n);
    for (std::size_t k = 0; k < keys.size(); ++k) {
        auto el = keys.elements(k);
        Vector v(static_cast<std::size_t>(m));
        if (el.back() < a.dim()) {
            Vector c = a.basis_bracket(el);
            std::copy(c.begin(), c.end(), v.begin());
        } else if (el.front() >= a.dim()) {
            std::vector<int> shifted;
            for (int i : el)
                shifted.push_back(i - a.dim());
            Vector c = b.basis_bracket(shifted);
            std::copy(c.begin(), c.end(), v.begin() + a.dim());
        }
        out.structure(k) = std::move(v);
    }
    return out;
}

NLieAlgebra change_basis(const NLieAlgebra &a, const RationalMatrix &p)
{
    auto pinv = inverse(p);
    if (!pinv || p.rows() != static_cast<std::size_t>(a.dim()))
        throw dimension_error("basis change must be an invertible m x m matrix");
    NLieAlgebra out(a.arity(), a.dim());
    const auto &keys = SubsetIndex::get(a.dim(), a.arity());
    for (std::size_t k = 0; k < keys.size(); ++k) {
        std::vector<Vector> args;
        for (int i : keys.elements(k))
            args.push_back(p.column(static_cast<std::size_t>(i)));
        out.structure(k) = *pinv * bracket_eval(a, args);
    }
    return out;
}

NLieAlgebra random_bracket(Rng &rng, int arity, int dim, int density_percent)
{
    NLieAlgebra a(arity, dim);
    for (std::size_t k = 0; k < a.num_keys(); ++k)
        for (auto &c : a.structure(k))
            if (rng.chance(density_percent))
                c = rng.small_rational();
    return a;
}

NLieAlgebra random_lie_algebra_3d(Rng &rng)
{
    NLieAlgebra base;
    switch (rng.uniform(0, 4)) {
    case 0:
        base = sl2();
        break;
    case 1:
        base = so3();
        break;
    case 2:
        base = r_ltimes_r2();
        break;
    case 3:
        base = heisenberg();
        break;
    default:
        base = zero_algebra(2, 3);
        break;
    }
    return change_basis(base, rng.invertible_matrix(3));
}

} // namespace filippov
