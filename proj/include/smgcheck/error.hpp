#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smgcheck {

enum class ErrorKind {
  DanglingReference,
  BadDistribution,
  DuplicateName,
  UndefinedChoice,
  DisabledAction,
  SyntaxError,
  UnknownPlayer,
  UnknownLabel,
  UnknownReward,
  BadBound,
  BadTarget,
  NonConvergence,
  BadProvider,
  BadParameter,
  StateExplosion,
  WrongScheme,
  TooLarge,
  SingularSystem,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure with the byte offset where it was detected.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& expected, const std::string& found)
      : Error(ErrorKind::SyntaxError, "at position " + std::to_string(position) + ": expected " +
                                          expected + ", found " + found),
        position_(position),
        expected_(expected) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

}  // namespace smgcheck
