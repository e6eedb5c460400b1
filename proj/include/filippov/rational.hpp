#ifndef FILIPPOV_RATIONAL_HPP
#define FILIPPOV_RATIONAL_HPP

#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace filippov
{

// Exact rationals. mpq_class keeps values canonical (lowest terms, positive
// denominator) after every arithmetic operation.
using Rational = mpq_class;
using Vector = std::vector<Rational>;

// Parses "p", "-p" or "p/q". Throws input_error on malformed text or q = 0.
Rational parse_rational(std::string_view text);

// "p/q", or "p" when q = 1.
std::string to_string(const Rational &r);

inline bool is_zero(const Rational &r)
{
    return sgn(r) == 0;
}

bool is_zero(const Vector &v);

Vector zero_vector(std::size_t n);
Vector unit_vector(std::size_t n, std::size_t i);

} // namespace filippov

#endif
