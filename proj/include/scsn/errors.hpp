#pragma once

#include <stdexcept>
#include <string>

namespace scsn {

// Tensor extents disagree with what an operation requires.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A caller broke an operation's precondition (empty set, bad index, ...).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

// Out-of-range numeric parameter (filter cutoff, crop stride, flag value).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed or truncated on-disk data.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Named item (channel, subject, parameter block) not found.
struct LookupError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Operation invoked in the wrong lifecycle state.
struct StateError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace scsn
