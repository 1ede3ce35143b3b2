#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace ripg {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateGeometry,
  kNotSpd,
  kSingular,
  kNotConverged,
  kNonFinite,
  kOutsideDomain,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::kInvalidArgument, what);
}

using WarningHandler = std::function<void(const std::string&)>;

/// Replaces the sink for non-fatal diagnostics (default: stderr). Returns the
/// previous handler. An empty handler silences warnings.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace ripg
