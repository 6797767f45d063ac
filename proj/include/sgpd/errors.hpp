#pragma once

#include <stdexcept>

namespace sgpd {

// Caller-supplied value violates a precondition (bad counts, negative radii,
// non-encodable shapes). The CLI maps this to exit code 2.
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A file or serialized blob does not match its schema. CLI exit code 3.
struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal invariant failed; indicates a bug, not bad input. CLI exit code 4.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace sgpd
