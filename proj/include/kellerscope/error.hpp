#pragma once

#include <stdexcept>
#include <string>

namespace kellerscope {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shape or dimension mismatch between fields and domains.
class StructuralError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation (s < 0, gamma < 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual, int iterations)
        : Error(what), residual_(residual), iterations_(iterations) {}

    double residual() const { return residual_; }
    int iterations() const { return iterations_; }

private:
    double residual_;
    int iterations_;
};

// Two independent routes to the same quantity disagree.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class SnapshotError : public IoError {
public:
    using IoError::IoError;
};

} // namespace kellerscope
