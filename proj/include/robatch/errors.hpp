#pragma once

#include <stdexcept>
#include <string>

namespace robatch {

/// Error category, mapped onto CLI exit codes (schema/io -> 3,
/// budget_infeasible -> 2, oracle_cap -> 4).
enum class ErrorKind {
    schema,
    budget_infeasible,
    oracle_cap,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    int exit_code() const {
        switch (kind_) {
        case ErrorKind::budget_infeasible: return 2;
        case ErrorKind::schema: return 3;
        case ErrorKind::oracle_cap: return 4;
        }
        return 1;
    }

  private:
    ErrorKind kind_;
};

inline Error schema_error(const std::string& what) { return Error(ErrorKind::schema, what); }

} // namespace robatch
