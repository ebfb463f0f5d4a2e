#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace koehler {

using Int = long long;
using BigInt = boost::multiprecision::cpp_int;

// Error hierarchy; the CLI maps these onto its exit-code contract.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-domain input (CLI exit 2).
struct InputError : Error {
    using Error::Error;
};

// A desk-scale resource guardrail was exceeded (CLI exit 3).
struct BoundError : Error {
    using Error::Error;
};

// An internal invariant failed; signals a bug, not bad input (CLI exit 4).
struct InternalError : Error {
    using Error::Error;
};

inline Int checked_cast(const BigInt& v, const char* what) {
    if (v > BigInt(std::numeric_limits<Int>::max()) ||
        v < BigInt(std::numeric_limits<Int>::min()))
        throw BoundError(std::string(what) + ": value exceeds 64-bit range");
    return static_cast<Int>(v);
}

}  // namespace koehler
