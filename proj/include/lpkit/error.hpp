#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpkit {

/// Raised for arguments outside an operation's mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised by the sequence mini-language and formula parser.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)), position_(position)
    {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A floating classification could not be certified at the requested precision.
class Uncertifiable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical scan ended without a certified answer; the caller should refine.
class Inconclusive : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lpkit
