#ifndef FILIPPOV_COCHAIN_HPP
#define FILIPPOV_COCHAIN_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "filippov/matrix.hpp"
#include "filippov/nlie.hpp"

namespace filippov
{

// Element of Der^p. Layout of `values`:
//   p = -1: coordinates of a wedge of grade n-1;
//   p =  0: values[j*m + k] = k-th component of D(e_j);
//   p >= 1: values[(((b_1*B + b_2)*B + ..)*W + w)*m + k], where b_i rank the
//           (n-1)-subsets of the tensor blocks (B of them) and w ranks the
//           n-subset formed by the last block together with z (W of them).
class Cochain
{
public:
    Cochain() = default;
    Cochain(int arity, int dim, int degree);

    static Cochain from_wedge(int arity, const WedgeElement &x);
    static Cochain from_linear_map(int arity, const LinearMap &d);

    int arity() const { return n_; }
    int dim() const { return m_; }
    int degree() const { return p_; }
    const Vector &values() const { return values_; }
    Vector &values() { return values_; }
    std::size_t size() const { return values_.size(); }

    WedgeElement as_wedge() const;
    LinearMap as_linear_map() const;

    // Number of (blocks, wedge) keys for p >= 1; m for p = 0.
    std::size_t num_keys() const;
    // Offset of the value vector stored at a key.
    std::size_t key_offset(std::span<const std::size_t> block_ranks, std::size_t wedge_rank) const;
    // Inverse of key_offset / m.
    std::pair<std::vector<std::size_t>, std::size_t> key_of(std::size_t key) const;

    bool is_zero() const { return filippov::is_zero(values_); }
    Cochain &operator+=(const Cochain &o);
    Cochain &operator-=(const Cochain &o);
    Cochain &operator*=(const Rational &c);
    friend Cochain operator+(Cochain a, const Cochain &b) { return a += b; }
    friend Cochain operator-(Cochain a, const Cochain &b) { return a -= b; }
    friend Cochain operator*(Cochain a, const Rational &c) { return a *= c; }
    friend Cochain operator*(const Rational &c, Cochain a) { return a *= c; }
    Cochain operator-() const { return *this * Rational(-1); }
    bool operator==(const Cochain &o) const = default;

private:
    int n_ = 0;
    int m_ = 0;
    int p_ = 0;
    Vector values_;

    void check_same_shape(const Cochain &o) const;
};

// Dimension of Der^p for every p >= -1.
std::size_t der_dimension(int m, int n, int p);

// C(m,n-1)^{p-1} * C(m,n) * m; p >= 1 only.
std::size_t cochain_dim(int m, int n, int p);
// Indicator cochains in storage order; p >= 1 only.
std::vector<Cochain> basis(int m, int n, int p);
// Indicator cochains for any p >= -1.
std::vector<Cochain> der_basis(int m, int n, int p);

// Sparse element of a wedge power: (subset rank, coefficient) pairs.
using SparseWedge = std::vector<std::pair<std::size_t, Rational>>;
SparseWedge sparse_wedge(const WedgeElement &x);
// x_1 ^ .. ^ x_g expanded into the basis.
SparseWedge sparse_product(int dim, const std::vector<Vector> &factors);

// D(X_1,..,X_p, z) for p = degree(D) >= 0; blocks have grade n-1.
Vector evaluate(const Cochain &d, const std::vector<WedgeElement> &blocks, const Vector &z);
Vector evaluate(const Cochain &d, const std::vector<SparseWedge> &blocks, const Vector &z);
// Blocks given by their n-1 factors.
Vector evaluate_factors(const Cochain &d, const std::vector<std::vector<Vector>> &blocks, const Vector &z);

// D1 o D2 for degrees p, q >= 0.
Cochain circle(const Cochain &d1, const Cochain &d2);
// (D1 o D2)(X_1,..,X_{p+q}, z) computed from the defining sum without
// assuming skewness of the result in the final n-wedge.
Vector circle_value(const Cochain &d1, const Cochain &d2, const std::vector<std::vector<Vector>> &blocks,
                    const Vector &z);

// (-1)^{pq} D1 o D2 - D2 o D1.
Cochain gla_bracket(const Cochain &d1, const Cochain &d2);

Cochain from_bracket(const NLieAlgebra &a);
NLieAlgebra to_algebra(const Cochain &d);

// [D, D].
Cochain maurer_cartan_defect(const Cochain &d);

// delta_F = [phi, .] for a Maurer-Cartan element phi, with delta_F(X) = ad_X on
// degree -1.
class CoboundaryOperator
{
public:
    // Throws precondition_error unless [phi, phi] = 0.
    explicit CoboundaryOperator(Cochain phi);
    explicit CoboundaryOperator(const NLieAlgebra &a);

    const Cochain &phi() const { return phi_; }
    int arity() const { return phi_.arity(); }
    int dim() const { return phi_.dim(); }
    Cochain operator()(const Cochain &psi) const;

private:
    Cochain phi_;
    NLieAlgebra algebra_;
};

Cochain differential(const Cochain &phi, const Cochain &psi);

// The four-sum coboundary of n-Lie algebra cohomology written out with the
// bracket of a; degree p >= 0.
Cochain coboundary_explicit(const NLieAlgebra &a, const Cochain &psi);

bool is_filippov_derivation(const NLieAlgebra &a, const LinearMap &d);

} // namespace filippov

#endif
