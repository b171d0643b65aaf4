// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace noisecorr {

/// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a precondition (out-of-range parameter, bad grid, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Data-dependent numeric failure: zero-power channels, singular targets.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or serialized input. Carries a location string
/// such as "samples.csv:14" or "config.json:rcs_m2" when one is known.
class FormatError : public Error {
public:
    FormatError(const std::string& where, const std::string& what)
        : Error(where.empty() ? what : where + ": " + what), where_(where) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace noisecorr
