#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : Error {
    using Error::Error;
};

struct NotHermitian : Error {
    using Error::Error;
};

struct NotPSD : Error {
    using Error::Error;
};

// A reduced state has an eigenvalue too close to zero to filter through.
struct SingularMarginal : Error {
    using Error::Error;
};

struct NotUnitVector : Error {
    using Error::Error;
};

struct TooManyAxes : Error {
    using Error::Error;
};

// T.n is (numerically) zero, so Alice's maximizing direction is undefined.
struct ZeroCorrelation : Error {
    using Error::Error;
};

// Filtered correlation matrix is not diagonal: state outside the supported family.
struct NonDiagonalCorrelation : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

struct NoBoundary : Error {
    using Error::Error;
};

}  // namespace qcorr
