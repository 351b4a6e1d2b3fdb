#include "locrep/error.hpp"

#include <sstream>

namespace locrep {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDivisionByZero: return "division by zero";
    case ErrorKind::kSingularMatrix: return "singular matrix";
    case ErrorKind::kDimensionMismatch: return "dimension mismatch";
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kUnrecoverable: return "unrecoverable";
    case ErrorKind::kPlanStale: return "stale repair plan";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kIo: return "i/o error";
    case ErrorKind::kInternal: return "internal error";
  }
  return "unknown";
}

std::string format_positions(const std::vector<std::size_t>& positions) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i) os << ',';
    os << positions[i];
  }
  os << '}';
  return os.str();
}

UnrecoverableError::UnrecoverableError(std::vector<std::size_t> erased,
                                       const std::string& what)
    : Error(ErrorKind::kUnrecoverable, what + " erased=" + format_positions(erased)),
      erased_(std::move(erased)) {}

}  // namespace locrep
