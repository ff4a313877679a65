#pragma once

/**
 * @file errors.hpp
 * @brief Exception types shared by every module.
 *
 * The CLI maps InputError to exit code 1 and everything else derived from
 * std::runtime_error / std::logic_error to exit code 2.
 */

#include <stdexcept>
#include <string>

namespace cyclebound {

/// Malformed or inconsistent user-supplied data.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A mathematically undefined request (leading term of zero, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computation that could not complete (resource limit, degenerate orbit).
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Broken internal invariant; always a bug upstream.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace cyclebound
