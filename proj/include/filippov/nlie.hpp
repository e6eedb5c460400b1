#ifndef FILIPPOV_NLIE_HPP
#define FILIPPOV_NLIE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "filippov/combinatorics.hpp"
#include "filippov/matrix.hpp"
#include "filippov/rational.hpp"

namespace filippov
{

// Element of the g-th exterior power of Q^m, dense over the lexicographic
// basis of g-subsets (SubsetIndex::get(dim, grade)).
struct WedgeElement
{
    int dim = 0;
    int grade = 0;
    Vector coords;

    WedgeElement() = default;
    WedgeElement(int dim, int grade);

    // e_{i1} ^ ... ^ e_{ig} for arbitrary 0-based indices (sorted with sign).
    static WedgeElement basis(int dim, std::span<const int> indices);
    // x_1 ^ ... ^ x_g.
    static WedgeElement product(int dim, const std::vector<Vector> &factors);

    bool is_zero() const { return filippov::is_zero(coords); }
    WedgeElement &operator+=(const WedgeElement &o);
    WedgeElement &operator-=(const WedgeElement &o);
    WedgeElement &operator*=(const Rational &c);
    friend WedgeElement operator+(WedgeElement a, const WedgeElement &b) { return a += b; }
    friend WedgeElement operator-(WedgeElement a, const WedgeElement &b) { return a -= b; }
    bool operator==(const WedgeElement &o) const = default;
};

// n-ary skew bracket on Q^m stored by its structure constants on strictly
// increasing index tuples.
class NLieAlgebra
{
public:
    NLieAlgebra() = default;
    NLieAlgebra(int arity, int dim);

    int arity() const { return n_; }
    int dim() const { return m_; }
    std::size_t num_keys() const { return table_.size(); }

    // Structure constants of the rank-th increasing n-tuple.
    const Vector &structure(std::size_t rank) const { return table_[rank]; }
    Vector &structure(std::size_t rank) { return table_[rank]; }
    // indices strictly increasing, 0-based.
    void set_bracket(std::span<const int> indices, const Vector &value);

    // [e_{i1},..,e_{in}] for arbitrary 0-based indices.
    Vector basis_bracket(std::span<const int> indices) const;
    // out += c * [e_{i1},..,e_{in}].
    void add_basis_bracket(std::span<const int> indices, const Rational &c, Vector &out) const;

    bool is_zero() const;
    bool operator==(const NLieAlgebra &o) const = default;

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<Vector> table_;
};

// Module action rho: Lambda^{n-1} L x E -> E, stored on (increasing
// (n-1)-tuple, module basis index).
class Representation
{
public:
    Representation() = default;
    Representation(int arity, int algebra_dim, int module_dim);

    int arity() const { return n_; }
    int algebra_dim() const { return m_; }
    int module_dim() const { return r_; }

    const Vector &action(std::size_t wedge_rank, int module_index) const
    {
        return table_[wedge_rank * static_cast<std::size_t>(r_) + static_cast<std::size_t>(module_index)];
    }
    Vector &action(std::size_t wedge_rank, int module_index)
    {
        return table_[wedge_rank * static_cast<std::size_t>(r_) + static_cast<std::size_t>(module_index)];
    }
    void set_action(std::span<const int> indices, int module_index, const Vector &value);

    // rho(X, .) as an r x r matrix.
    RationalMatrix matrix(const WedgeElement &x) const;

    bool operator==(const Representation &o) const = default;

private:
    int n_ = 0;
    int m_ = 0;
    int r_ = 0;
    std::vector<Vector> table_;
};

// Failure evidence of an exhaustive basis check. Index tuples are 0-based; the
// meaning of each tuple is fixed per condition.
struct Witness
{
    std::string condition;
    std::vector<std::vector<int>> tuples;
    Vector lhs;
    Vector rhs;
};

struct Verdict
{
    bool holds = true;
    std::optional<Witness> witness;
};

Vector bracket_eval(const NLieAlgebra &a, const std::vector<Vector> &args);

// [X, y] for X of grade n-1.
Vector bracket_wedge(const NLieAlgebra &a, const WedgeElement &x, const Vector &y);

// [x_1,..,x_{n-1},[y_1,..,y_n]] - sum_i [y_1,..,[x,y_i],..,y_n] on basis
// vectors. Tuples may be in any order.
Vector fi_defect(const NLieAlgebra &a, std::span<const int> x, std::span<const int> y);

// Exhaustive over increasing tuples. Witness tuples: {x (n-1), y (n)}; the
// first failure in lexicographic (x, y) order.
Verdict check_fundamental_identity(const NLieAlgebra &a);

// [X,Y] = sum_i y_1 ^ .. ^ [X, y_i] ^ .. ^ y_{n-1}.
WedgeElement fundamental_bracket(const NLieAlgebra &a, const WedgeElement &x, const WedgeElement &y);

// Matrix of y -> [X, y].
LinearMap ad_map(const NLieAlgebra &a, const WedgeElement &x);

// True when d[x_1..x_n] = sum_i [x_1..d x_i..x_n] on all basis tuples.
bool is_derivation(const NLieAlgebra &a, const LinearMap &d);

Vector rho_eval(const Representation &rho, const std::vector<Vector> &xs, const Vector &xi);

// Conditions (1) and (2). Witness tuples: condition (1) {x, y, {xi}};
// condition (2) {x (n-2), y (n), {xi}}.
Verdict check_representation(const NLieAlgebra &a, const Representation &rho);

// Adjoint action of a on itself.
Representation adjoint_representation(const NLieAlgebra &a);

// Module basis follows the algebra basis. Throws precondition_error when rho is
// not a representation.
NLieAlgebra semidirect_product(const NLieAlgebra &a, const Representation &rho);

// [T xi_1,..,T xi_n] = sum_i (-1)^{n-i} T rho(T xi_1,..^..,T xi_n, xi_i).
// Witness tuples: {xi (n)}.
Verdict check_o_operator(const NLieAlgebra &a, const Representation &rho, const LinearMap &t);

} // namespace filippov

#endif
