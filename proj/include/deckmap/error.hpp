#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace deckmap {

enum class ErrorKind {
    InvalidArgument,
    NumericFailure,
    DegreeOverflow,
    NotRepresentable,
    SearchFailure,
    NumericFalsePositive,
    HypothesisViolation,
    InternalError,
    ParseError,
    UnboundParameter,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Syntax errors from the map-expression parser carry the byte offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(ErrorKind::ParseError, what + " at position " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace deckmap
