#ifndef FILIPPOV_ERRORS_HPP
#define FILIPPOV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace filippov
{

// Operand shapes do not fit together (vector lengths, arities, ranks).
class dimension_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A mathematical precondition failed, e.g. the base bracket violates the
// fundamental identity.
class precondition_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Malformed serialized input.
class input_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace filippov

#endif
