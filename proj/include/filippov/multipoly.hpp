#ifndef FILIPPOV_MULTIPOLY_HPP
#define FILIPPOV_MULTIPOLY_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <vector>

#include "filippov/rational.hpp"

namespace filippov
{

using Exponents = std::vector<std::uint32_t>;

// Sparse multivariate polynomial with rational coefficients. Terms are kept in
// a map ordered lexicographically by exponent vector; zero coefficients are
// never stored.
class MultiPoly
{
public:
    using term_map = std::map<Exponents, Rational>;

    explicit MultiPoly(int num_vars = 0) : num_vars_(num_vars) {}

    static MultiPoly constant(int num_vars, const Rational &c);
    // x_i (0-based).
    static MultiPoly variable(int num_vars, int i);
    static MultiPoly monomial(int num_vars, Exponents exps, const Rational &c);

    int num_vars() const { return num_vars_; }
    const term_map &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Total degree; -1 for the zero polynomial.
    int degree() const;

    void add_term(const Exponents &exps, const Rational &c);

    MultiPoly &operator+=(const MultiPoly &other);
    MultiPoly &operator-=(const MultiPoly &other);
    MultiPoly &operator*=(const Rational &c);

    friend MultiPoly operator+(MultiPoly a, const MultiPoly &b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly &b) { return a -= b; }
    friend MultiPoly operator*(MultiPoly a, const Rational &c) { return a *= c; }
    friend MultiPoly operator*(const Rational &c, MultiPoly a) { return a *= c; }
    friend MultiPoly operator*(const MultiPoly &a, const MultiPoly &b);
    MultiPoly operator-() const;

    bool operator==(const MultiPoly &other) const = default;

    // d/dx_i.
    MultiPoly derivative(int i) const;

private:
    int num_vars_;
    term_map terms_;

    void check_compatible(const MultiPoly &other) const;
};

// Named operation matching the plain ring operations.
enum class PolyOp
{
    add,
    mul,
    scale
};
MultiPoly poly_arith(const MultiPoly &a, const MultiPoly &b, PolyOp op, const Rational &factor = Rational(1));

std::ostream &operator<<(std::ostream &os, const MultiPoly &p);

// Polynomial vector field sum_i v_i d/dx_i.
class PolyVectorField
{
public:
    explicit PolyVectorField(int num_vars = 0);
    explicit PolyVectorField(std::vector<MultiPoly> components);

    // d/dx_i.
    static PolyVectorField coordinate(int num_vars, int i);

    int num_vars() const { return static_cast<int>(components_.size()); }
    const MultiPoly &operator[](std::size_t i) const { return components_[i]; }
    MultiPoly &operator[](std::size_t i) { return components_[i]; }
    const std::vector<MultiPoly> &components() const { return components_; }
    bool is_zero() const;

    PolyVectorField &operator+=(const PolyVectorField &other);
    PolyVectorField &operator-=(const PolyVectorField &other);
    // Pointwise multiplication by a function.
    PolyVectorField &operator*=(const MultiPoly &f);
    PolyVectorField &operator*=(const Rational &c);
    friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField &b) { return a += b; }
    friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField &b) { return a -= b; }

    bool operator==(const PolyVectorField &other) const = default;

private:
    std::vector<MultiPoly> components_;
};

// v(f) = sum_i v_i df/dx_i.
MultiPoly vf_apply(const PolyVectorField &v, const MultiPoly &f);

// Lie bracket of vector fields, [v,w](f) = v(w(f)) - w(v(f)).
PolyVectorField vf_bracket(const PolyVectorField &v, const PolyVectorField &w);

} // namespace filippov

#endif
