#pragma once

#include <stdexcept>
#include <string>

namespace gazeaudit {

// Error taxonomy; mirrored one-to-one by the C API status codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file content (bad number, wrong field count). Message names file and line.
class ParseError : public Error {
public:
    using Error::Error;
};

// Structurally wrong input: missing columns, unknown header, bad magic bytes.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Invalid configuration values (out-of-range schedule, negative rates, bad flags).
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Non-finite values where finite ones are required.
class NumericError : public Error {
public:
    using Error::Error;
};

// Duplicate keys, unpaired windows, inconsistent tables.
class IntegrityError : public Error {
public:
    using Error::Error;
};

// Semantically rejected data (gap too long, insufficient observations).
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace gazeaudit
