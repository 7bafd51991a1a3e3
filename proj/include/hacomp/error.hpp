#pragma once

#include <stdexcept>
#include <string>

namespace hacomp {

// Base for every error the library raises on bad input or configuration.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

// Input data violates a documented contract (bad record, empty dataset, ...).
class ValidationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "validation"; }
};

// Generative or analysis parameters are infeasible.
class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "config"; }
};

// A statistic is undefined for the given samples (e.g. zero pooled SD).
class DegenerateError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "degenerate"; }
};

// Unreadable stream, missing header, unwritable output.
class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io"; }
};

}  // namespace hacomp
