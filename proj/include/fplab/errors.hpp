#pragma once

#include <stdexcept>
#include <string>

namespace fplab {

// Bad input: configuration, geometry or preconditions. CLI exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical stage did not produce a usable result. CLI exit code 3.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A file could not be written or read. CLI exit code 1.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw ValidationError(what);
}

} // namespace fplab
