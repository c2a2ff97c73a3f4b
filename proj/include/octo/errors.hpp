#pragma once

#include <stdexcept>
#include <string>

namespace octo {

/// Base of every error raised by the library. `code()` is module-qualified,
/// e.g. "geometry.domain" or "operators.contract", and is what the CLI prints.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    [[nodiscard]] const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Input outside an operation's mathematical domain (pole, zero divisor, |a| too close to 1, ...).
class DomainError : public Error {
public:
    DomainError(const std::string& module, const std::string& what) : Error(module + ".domain", what) {}
};

/// A documented precondition of a composite check was not met (unclosed form, sublevel set
/// touching the boundary, boundary domination unverified, ...).
class ContractError : public Error {
public:
    ContractError(const std::string& module, const std::string& what) : Error(module + ".contract", what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("catalog.parse", what) {}
};

} // namespace octo
