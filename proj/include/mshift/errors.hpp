#pragma once

#include <stdexcept>
#include <string>

namespace mshift {

/// Malformed or inconsistent description of Omega (bad matrix, dead states, invalid digits, ...).
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation needed information beyond the depth of a truncated automaton.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mshift
