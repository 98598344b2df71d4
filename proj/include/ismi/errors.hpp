#pragma once

#include <stdexcept>
#include <string>

namespace ismi {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative routine exhausted its iteration or refinement budget.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// A structural precondition on the inputs does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A density failed to integrate to one.
class NonNormalized : public Error {
public:
    using Error::Error;
};

/// A sample cloud carries no usable geometry for kNN estimation.
class DegenerateCloud : public Error {
public:
    using Error::Error;
};

}  // namespace ismi
