#include "filippov/matrix.hpp"

#include <algorithm>
#include <utility>

#include "filippov/errors.hpp"

namespace filippov
{

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries))
{
    if (entries_.size() != rows * cols)
        throw dimension_error("matrix entry count does not match shape");
}

RationalMatrix RationalMatrix::identity(std::size_t n)
{
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<Vector> &rows)
{
    std::size_t c = rows.empty() ? 0 : rows.front().size();
    RationalMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c)
            throw dimension_error("ragged matrix rows");
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

RationalMatrix RationalMatrix::from_columns(std::size_t rows, const std::vector<Vector> &cols)
{
    RationalMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        m.set_column(j, cols[j]);
    return m;
}

bool RationalMatrix::is_zero() const
{
    return filippov::is_zero(entries_);
}

Vector RationalMatrix::column(std::size_t c) const
{
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        v[r] = (*this)(r, c);
    return v;
}

Vector RationalMatrix::row(std::size_t r) const
{
    return Vector(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

void RationalMatrix::set_column(std::size_t c, const Vector &v)
{
    if (v.size() != rows_)
        throw dimension_error("column length does not match matrix rows");
    for (std::size_t r = 0; r < rows_; ++r)
        (*this)(r, c) = v[r];
}

RationalMatrix RationalMatrix::transpose() const
{
    RationalMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

RationalMatrix &RationalMatrix::operator+=(const RationalMatrix &o)
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw dimension_error("matrix shapes differ");
    for (std::size_t i = 0; i < entries_.size(); ++i)
        entries_[i] += o.entries_[i];
    return *this;
}

RationalMatrix &RationalMatrix::operator-=(const RationalMatrix &o)
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw dimension_error("matrix shapes differ");
    for (std::size_t i = 0; i < entries_.size(); ++i)
        entries_[i] -= o.entries_[i];
    return *this;
}

RationalMatrix &RationalMatrix::operator*=(const Rational &c)
{
    for (auto &e : entries_)
        e *= c;
    return *this;
}

RationalMatrix operator*(const RationalMatrix &a, const RationalMatrix &b)
{
    if (a.cols_ != b.rows_)
        throw dimension_error("matrix product shape mismatch");
    RationalMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const auto &aik = a(i, k);
            if (sgn(aik) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                if (sgn(b(k, j)) != 0)
                    r(i, j) += aik * b(k, j);
        }
    return r;
}

Vector operator*(const RationalMatrix &a, const Vector &v)
{
    if (a.cols_ != v.size())
        throw dimension_error("matrix-vector shape mismatch");
    Vector r(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k)
            if (sgn(a(i, k)) != 0 && sgn(v[k]) != 0)
                r[i] += a(i, k) * v[k];
    return r;
}

namespace
{

using IntRow = std::vector<mpz_class>;

// Clears denominators row by row; the row space is unchanged.
std::vector<IntRow> integer_rows(const RationalMatrix &m)
{
    std::vector<IntRow> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        mpz_class l = 1;
        bool nonzero = false;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (sgn(m(i, j)) == 0)
                continue;
            nonzero = true;
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
        }
        if (!nonzero)
            continue;
        IntRow row(m.cols());
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (sgn(m(i, j)) != 0)
                row[j] = m(i, j).get_num() * (l / m(i, j).get_den());
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

Echelon echelon(const RationalMatrix &m)
{
    auto a = integer_rows(m);
    const std::size_t cols = m.cols();
    std::vector<std::size_t> pivots;
    mpz_class prev = 1;
    std::size_t k = 0;
    for (std::size_t c = 0; c < cols && k < a.size(); ++c) {
        std::size_t p = k;
        while (p < a.size() && sgn(a[p][c]) == 0)
            ++p;
        if (p == a.size())
            continue;
        std::swap(a[k], a[p]);
        const mpz_class &piv = a[k][c];
        for (std::size_t i = k + 1; i < a.size(); ++i) {
            mpz_class f = a[i][c];
            for (std::size_t j = c + 1; j < cols; ++j) {
                mpz_class t = piv * a[i][j] - f * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[k][c];
        pivots.push_back(c);
        ++k;
    }

    // Back substitution over Q into reduced form.
    Echelon e;
    e.pivots = pivots;
    e.rows.resize(k);
    for (std::size_t r = 0; r < k; ++r) {
        Vector row(cols);
        const mpz_class &piv = a[r][pivots[r]];
        for (std::size_t j = pivots[r]; j < cols; ++j)
            if (sgn(a[r][j]) != 0) {
                row[j] = Rational(a[r][j], piv);
                row[j].canonicalize();
            }
        e.rows[r] = std::move(row);
    }
    for (std::size_t r = k; r-- > 0;) {
        for (std::size_t above = 0; above < r; ++above) {
            Rational f = e.rows[above][pivots[r]];
            if (sgn(f) == 0)
                continue;
            for (std::size_t j = pivots[r]; j < cols; ++j)
                if (sgn(e.rows[r][j]) != 0)
                    e.rows[above][j] -= f * e.rows[r][j];
        }
    }
    return e;
}

std::size_t rank(const RationalMatrix &m)
{
    return echelon(m).pivots.size();
}

RankNullspace rank_nullspace(const RationalMatrix &m)
{
    auto e = echelon(m);
    RankNullspace out;
    out.rank = e.pivots.size();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots)
        is_pivot[p] = true;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        Vector v(m.cols());
        v[f] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            v[e.pivots[r]] = -e.rows[r][f];
        out.nullspace.push_back(std::move(v));
    }
    return out;
}

std::optional<Vector> solve(const RationalMatrix &m, const Vector &b)
{
    if (b.size() != m.rows())
        throw dimension_error("solve: right-hand side length mismatch");
    RationalMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    auto e = echelon(aug);
    if (!e.pivots.empty() && e.pivots.back() == m.cols())
        return std::nullopt;
    Vector x(m.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
        x[e.pivots[r]] = e.rows[r][m.cols()];
    return x;
}

Vector SpanBuilder::reduce(Vector v) const
{
    if (v.size() != n_)
        throw dimension_error("SpanBuilder: vector length mismatch");
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        Rational f = v[pivots_[r]];
        if (sgn(f) == 0)
            continue;
        for (std::size_t j = pivots_[r]; j < n_; ++j)
            if (sgn(rows_[r][j]) != 0)
                v[j] -= f * rows_[r][j];
    }
    return v;
}

bool SpanBuilder::add(const Vector &v)
{
    Vector res = reduce(v);
    std::size_t p = 0;
    while (p < n_ && sgn(res[p]) == 0)
        ++p;
    if (p == n_)
        return false;
    Rational inv = 1 / res[p];
    for (auto &x : res)
        x *= inv;
    // Keep existing rows reduced with respect to the new pivot.
    for (auto &row : rows_) {
        Rational f = row[p];
        if (sgn(f) == 0)
            continue;
        for (std::size_t j = p; j < n_; ++j)
            if (sgn(res[j]) != 0)
                row[j] -= f * res[j];
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, p);
    rows_.insert(rows_.begin() + pos, std::move(res));
    return true;
}

} // namespace filippov

namespace filippov
{

std::optional<RationalMatrix> inverse(const RationalMatrix &m)
{
    if (!m.is_square())
        throw dimension_error("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    RationalMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto e = echelon(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1)
        return std::nullopt;
    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv(i, j) = e.rows[i][n + j];
    return inv;
}

} // namespace filippov
