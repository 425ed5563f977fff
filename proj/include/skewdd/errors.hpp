#pragma once

#include <stdexcept>
#include <string>

namespace skewdd {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("division by zero") {}
};

class Unsupported : public Error {
public:
    using Error::Error;
};

/// An element was expected to lie in an ideal and does not.
class MembershipError : public Error {
public:
    MembershipError(std::string element, std::string lattice)
        : Error("element " + element + " is not in " + lattice),
          element_(std::move(element)),
          lattice_(std::move(lattice)) {}

    const std::string& element() const { return element_; }
    const std::string& lattice() const { return lattice_; }

private:
    std::string element_;
    std::string lattice_;
};

class BoundExceeded : public Error {
public:
    BoundExceeded(const std::string& what, long bound)
        : Error(what + " (search bound " + std::to_string(bound) + " exhausted)"), bound_(bound) {}

    long bound() const { return bound_; }

private:
    long bound_;
};

/// Requested coefficients lie beyond the known precision.
class PrecisionError : public Error {
public:
    explicit PrecisionError(const std::string& what, long deficit = 0)
        : Error(what), deficit_(deficit) {}

    long deficit() const { return deficit_; }

private:
    long deficit_;
};

class ZeroIdealError : public Error {
public:
    using Error::Error;
};

class SingularError : public Error {
public:
    using Error::Error;
};

class NotUnimodular : public Error {
public:
    using Error::Error;
};

class NotTwoSided : public Error {
public:
    using Error::Error;
};

/// sigma moves an ideal class, so a generator needed by row completion does not exist.
class SigmaClassObstruction : public Error {
public:
    using Error::Error;
};

}  // namespace skewdd
