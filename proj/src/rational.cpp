#include "filippov/rational.hpp"

#include <cctype>

#include "filippov/errors.hpp"

namespace filippov
{

namespace
{

bool is_integer_literal(std::string_view s)
{
    if (!s.empty() && (s.front() == '-' || s.front() == '+'))
        s.remove_prefix(1);
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

mpz_class parse_integer(std::string_view s)
{
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    return mpz_class(std::string(s), 10);
}

} // namespace

Rational parse_rational(std::string_view text)
{
    auto slash = text.find('/');
    auto num_text = text.substr(0, slash);
    if (!is_integer_literal(num_text))
        throw input_error("malformed rational '" + std::string(text) + "'");
    Rational r;
    r.get_num() = parse_integer(num_text);
    if (slash == std::string_view::npos) {
        r.get_den() = 1;
        return r;
    }
    auto den_text = text.substr(slash + 1);
    if (!is_integer_literal(den_text) || den_text.front() == '-')
        throw input_error("malformed rational '" + std::string(text) + "'");
    r.get_den() = parse_integer(den_text);
    if (r.get_den() == 0)
        throw input_error("zero denominator in '" + std::string(text) + "'");
    r.canonicalize();
    return r;
}

std::string to_string(const Rational &r)
{
    return r.get_str(10);
}

bool is_zero(const Vector &v)
{
    for (const auto &x : v)
        if (sgn(x) != 0)
            return false;
    return true;
}

Vector zero_vector(std::size_t n)
{
    return Vector(n);
}

Vector unit_vector(std::size_t n, std::size_t i)
{
    Vector v(n);
    v[i] = 1;
    return v;
}

} // namespace filippov
