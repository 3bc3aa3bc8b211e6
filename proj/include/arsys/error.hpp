#pragma once

#include <stdexcept>
#include <string>

namespace arsys {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two values from different GroupContexts were combined.
class ContextMismatch : public Error {
public:
    using Error::Error;
};

/// A checked 64-bit operation left the representable range.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// A reflection was requested where some m-value does not exist.
class UndefinedMValue : public Error {
public:
    UndefinedMValue(int i, int j)
        : Error("undefined m-value at vertex pair (" + std::to_string(i + 1) + "," +
                std::to_string(j + 1) + ")"),
          i_(i), j_(j) {}

    int source() const noexcept { return i_; }
    int target() const noexcept { return j_; }

private:
    int i_;
    int j_;
};

/// A catalog parameter assignment violates a side condition of its row.
class ConstraintViolation : public Error {
public:
    explicit ConstraintViolation(std::string clause)
        : Error("constraint violated: " + clause), clause_(std::move(clause)) {}

    const std::string& clause() const noexcept { return clause_; }

private:
    std::string clause_;
};

/// Malformed user input (JSON, label words, vectors).
class InputError : public Error {
public:
    using Error::Error;
};

/// A checked postcondition failed. Indicates a bug or a counterexample.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace arsys
