#pragma once
#include <stdexcept>
#include <string>

namespace weaktraj {

/// Error categories; the numeric values double as CLI exit codes.
enum class ErrorCategory : int {
  validation = 2,  ///< bad configuration or arguments
  data = 3,        ///< malformed or inconsistent input data
  numeric = 4,     ///< numerical failure (non-convergence, aliasing, ...)
  io = 5,          ///< filesystem problems
};

class Error : public std::runtime_error {
public:
  Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg), category_(cat) {}
  ErrorCategory category() const { return category_; }

private:
  ErrorCategory category_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(ErrorCategory::validation, msg) {}
};
struct DataError : Error {
  explicit DataError(const std::string& msg) : Error(ErrorCategory::data, msg) {}
};
struct NumericError : Error {
  explicit NumericError(const std::string& msg) : Error(ErrorCategory::numeric, msg) {}
};
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(ErrorCategory::io, msg) {}
};

}  // namespace weaktraj
