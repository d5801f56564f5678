#pragma once

#include <stdexcept>
#include <string>

namespace nslp {

/** Raised when a caller breaks an operation's precondition (dimension mismatch, bad index, ...). */
class ContractViolation : public std::invalid_argument
{
public:
    explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

/** Raised for out-of-range algorithm parameters such as a relaxation factor outside (0, 2). */
class ParameterError : public std::invalid_argument
{
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/** Raised when an iteration produces a non-finite coordinate. */
class NumericalError : public std::runtime_error
{
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/** Raised by the oracle for geometries it does not handle. */
class UnsupportedError : public std::runtime_error
{
public:
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

class EmptyRegionError : public std::runtime_error
{
public:
    explicit EmptyRegionError(const std::string& what) : std::runtime_error(what) {}
};

/** Malformed instance/scenario documents. The message names the offending field. */
class FormatError : public std::runtime_error
{
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/** No cross point and not the center lie in the current polytope. */
class LostPolytope : public std::runtime_error
{
public:
    explicit LostPolytope(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nslp
