#pragma once

#include <stdexcept>
#include <string>

namespace mfwht {

/// Bad user input: malformed file, out-of-range parameter, non-normalizable
/// state. Maps to process exit code 2.
class InvalidInputError : public std::runtime_error {
public:
    explicit InvalidInputError(const std::string& what) : std::runtime_error(what) {}
};

/// A requested computation does not fit the machine (memory guard, refused
/// problem size). Maps to process exit code 3.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// A violated internal invariant: the library caught itself producing
/// inconsistent numbers. Maps to process exit code 4.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace mfwht
