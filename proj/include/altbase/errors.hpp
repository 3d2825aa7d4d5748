#pragma once

#include <stdexcept>
#include <string>

namespace altbase {

// Input outside the domain of a transformation or an ill-formed base.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A digit exceeds the alphabet bound of its slot.
class AlphabetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An exhaustive enumeration would exceed its configured bound.
class SearchTooLarge : public std::length_error {
public:
    using std::length_error::length_error;
};

// 1 is (numerically) an eigenvalue of the Gora correction matrix S.
class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The truncated geometric series would discard more than the requested tolerance.
class TruncationTooShallow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A digit set fails the allowability condition max gap <= d_m / (beta - 1).
class NotAllowable : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed base expression; position is the 0-based column of the offending character.
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace altbase
