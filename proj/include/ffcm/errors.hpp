#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ffcm {

// Process-level outcome classes. The CLI maps these directly to exit codes:
//   0 success, 2 validation failure, 3 budget exceeded,
//   4 internal identity violation (an exact identity failed -- a bug, fatal).
enum class ErrorKind : int {
    Validation = 2,
    Budget     = 3,
    Identity   = 4,
};

// Every failure carries a stable machine-readable name (e.g. "SpecialRange",
// "BudgetExceeded", "NonRationalValue") plus a human-readable detail string.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), kind_(kind), name_(std::move(name)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    int exit_code() const { return static_cast<int>(kind_); }

  private:
    ErrorKind kind_;
    std::string name_;
};

[[noreturn]] inline void fail_validation(const std::string& name, const std::string& detail) {
    throw Error(ErrorKind::Validation, name, detail);
}

[[noreturn]] inline void fail_budget(const std::string& detail) {
    throw Error(ErrorKind::Budget, "BudgetExceeded", detail);
}

[[noreturn]] inline void fail_identity(const std::string& name, const std::string& detail) {
    throw Error(ErrorKind::Identity, name, detail);
}

} // namespace ffcm
