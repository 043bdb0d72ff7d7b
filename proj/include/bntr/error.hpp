#pragma once

#include <stdexcept>
#include <string>

namespace bntr {

/// Shape, range or configuration violations in caller-supplied arguments.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Covariate or evaluation point outside the supported domain [0,1].
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Data that cannot support the requested construction (e.g. strict knots).
class DegenerateData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Request that is well formed but outside what is implemented.
class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File, parse or schema failures.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

}  // namespace detail
}  // namespace bntr
