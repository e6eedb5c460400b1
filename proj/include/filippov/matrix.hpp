#ifndef FILIPPOV_MATRIX_HPP
#define FILIPPOV_MATRIX_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "filippov/rational.hpp"

namespace filippov
{

// Dense row-major rational matrix.
class RationalMatrix
{
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
    RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);

    static RationalMatrix identity(std::size_t n);
    static RationalMatrix from_rows(const std::vector<Vector> &rows);
    static RationalMatrix from_columns(std::size_t rows, const std::vector<Vector> &cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool is_zero() const;

    Rational &operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Rational &operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    Vector column(std::size_t c) const;
    Vector row(std::size_t r) const;
    void set_column(std::size_t c, const Vector &v);
    RationalMatrix transpose() const;

    RationalMatrix &operator+=(const RationalMatrix &o);
    RationalMatrix &operator-=(const RationalMatrix &o);
    RationalMatrix &operator*=(const Rational &c);
    friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix &b) { return a += b; }
    friend RationalMatrix operator-(RationalMatrix a, const RationalMatrix &b) { return a -= b; }
    friend RationalMatrix operator*(RationalMatrix a, const Rational &c) { return a *= c; }
    friend RationalMatrix operator*(const RationalMatrix &a, const RationalMatrix &b);
    friend Vector operator*(const RationalMatrix &a, const Vector &v);

    bool operator==(const RationalMatrix &o) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> entries_;
};

// Linear maps between the small spaces of the algebra layer (N, T, phi_i).
using LinearMap = RationalMatrix;

struct RankNullspace
{
    std::size_t rank = 0;
    // Basis of {x : M x = 0}; one vector per free column, in column order, with
    // that free entry equal to 1 and the other free entries 0.
    std::vector<Vector> nullspace;
};

// Reduced row echelon data of a matrix.
struct Echelon
{
    // Pivot columns, ascending.
    std::vector<std::size_t> pivots;
    // Nonzero rows of the reduced row echelon form (pivot entries 1).
    std::vector<Vector> rows;
};

// Fraction-free (Bareiss) forward elimination on row-scaled integer data,
// followed by back substitution over Q.
Echelon echelon(const RationalMatrix &m);

std::size_t rank(const RationalMatrix &m);
RankNullspace rank_nullspace(const RationalMatrix &m);

// A solution of m x = b with every free variable set to zero, or nullopt when
// the system is inconsistent.
std::optional<Vector> solve(const RationalMatrix &m, const Vector &b);

// nullopt when m is singular.
std::optional<RationalMatrix> inverse(const RationalMatrix &m);

// Incrementally maintained span of vectors in Q^n, kept in reduced echelon form.
class SpanBuilder
{
public:
    explicit SpanBuilder(std::size_t n) : n_(n) {}

    std::size_t dimension() const { return rows_.size(); }
    // Residue of v modulo the current span (zero iff v is in the span).
    Vector reduce(Vector v) const;
    // Adds v; returns false when v was already in the span.
    bool add(const Vector &v);

private:
    std::size_t n_;
    std::vector<std::size_t> pivots_;
    std::vector<Vector> rows_;
};

} // namespace filippov

#endif
