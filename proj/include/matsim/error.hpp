#pragma once

#include <stdexcept>
#include <string>

namespace matsim {

// Base for every failure raised by the library. The CLI maps these to exit
// status 2 (data/numeric error).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// structures
class ParseError : public Error {
public:
    using Error::Error;
};
class SingularLatticeError : public Error {
public:
    using Error::Error;
};
class UnknownElementError : public Error {
public:
    using Error::Error;
};
class CoordinateCountError : public Error {
public:
    using Error::Error;
};

// geometry
class OpenCellError : public Error {
public:
    using Error::Error;
};
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

// numerics
class DimensionMismatchError : public Error {
public:
    using Error::Error;
};
class DomainError : public Error {
public:
    using Error::Error;
};
class SingularSystemError : public Error {
public:
    using Error::Error;
};

} // namespace matsim
