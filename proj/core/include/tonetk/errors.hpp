#pragma once

#include <stdexcept>
#include <string>

namespace tonetk {

// Bad caller input: out-of-domain values, dimension mismatches, malformed files.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An external program (scorer, normalization hook) failed, timed out or
// produced unparseable output.
class HookError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tonetk
