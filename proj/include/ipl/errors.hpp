#pragma once

#include <stdexcept>
#include <string>

namespace ipl {

/// Bad input: out-of-range parameter, wrong shape, non-finite value.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// d1 == d2: the cell rescaling 2/(d1-d2) is undefined.
class DegenerateCell : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Continuum parameters that do not admit the Gaussian ansatz (g <= 0).
class InvalidParams : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Matrix handed to the symmetric solver is not symmetric.
class SymmetryViolation : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class DimensionMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Two objects built for different Gaussian widths g were combined.
class GaussianMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// ODE sample point too close to a pole of the decoupled equations.
class SingularPoint : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A requested (level, branch) has no normalizable eigenstate.
class MissingState : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The parity partner construction maps the state onto itself.
class MissingPartner : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class Unsupported : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical self-check failed (non-terminating series, large residual).
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ipl
