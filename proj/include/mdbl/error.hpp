#pragma once

#include <stdexcept>
#include <string>

namespace mdbl {

/// Input outside an operation's domain or precondition (even modulus, q below
/// the kappa bound, zero argument to floor_log2, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// The input is well formed but exceeds a configured capacity, e.g. a
/// primality query above B^2 for the loaded prime table.
class CapacityError : public std::out_of_range {
public:
    explicit CapacityError(const std::string& what) : std::out_of_range(what) {}
};

}  // namespace mdbl
