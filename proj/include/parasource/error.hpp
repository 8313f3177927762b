#pragma once

#include <stdexcept>
#include <string>

namespace parasource {

// Invalid input: bad parameters, mismatched grids, malformed configs.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical contract was broken at run time (non-real spectrum, etc.).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg)
{
    if (!cond)
        throw ValidationError(msg);
}

} // namespace parasource
