#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace locrep {

enum class ErrorKind {
  kDivisionByZero,
  kSingularMatrix,
  kDimensionMismatch,
  kInvalidArgument,
  kUnrecoverable,
  kPlanStale,
  kFormat,
  kIo,
  kInternal,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when the surviving blocks of a stripe no longer determine the data.
class UnrecoverableError : public Error {
 public:
  UnrecoverableError(std::vector<std::size_t> erased, const std::string& what);

  const std::vector<std::size_t>& erased() const noexcept { return erased_; }

 private:
  std::vector<std::size_t> erased_;
};

std::string format_positions(const std::vector<std::size_t>& positions);

}  // namespace locrep
