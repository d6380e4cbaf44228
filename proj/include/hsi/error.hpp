#pragma once

#include <stdexcept>
#include <string>

namespace hsi {

/// Base class for every error this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Stream/file failures: short reads, unwritable sinks, missing files.
class IoError : public Error {
public:
    using Error::Error;
};

/// Wrong magic bytes or a structurally unreadable file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A domain invariant does not hold (bad dimensions, overlapping regions, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its contract (wrong band count, empty batch, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Non-finite values where the numeric contract forbids them.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace hsi
