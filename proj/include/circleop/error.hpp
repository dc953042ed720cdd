#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace circleop {

/// Raised when an operation's preconditions do not hold (bad window, bad grid size, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Symbol literal could not be parsed; `position` is the 0-based offset of the offending character.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class WindingError : public std::runtime_error {
 public:
  enum class Kind { CurveTouchesPoint, GridTooCoarse };

  WindingError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace circleop
