#pragma once

#include <stdexcept>

namespace tomo {

/// Malformed or unsupported file content.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed (e.g. excess Hermitian residual).
/// Signals a bug in spectrum construction, not bad user input.
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tomo
