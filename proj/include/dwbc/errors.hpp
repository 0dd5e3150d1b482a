#ifndef DWBC_ERRORS_HPP
#define DWBC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dwbc
{

// Root of every error thrown by the library. The CLI maps all of these to
// exit status 1.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A theta denominator (or other singular factor) sits on the period lattice.
class DegenerateParameter : public Error
{
public:
    using Error::Error;
};

class InvalidParameter : public Error
{
public:
    using Error::Error;
};

class SizeCapExceeded : public Error
{
public:
    using Error::Error;
};

// Interpolation nodes coincide modulo the lattice or violate the
// character condition.
class DegenerateNodes : public Error
{
public:
    using Error::Error;
};

} // namespace dwbc

#endif
