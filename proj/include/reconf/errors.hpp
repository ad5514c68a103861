#pragma once

#include <stdexcept>
#include <string>

namespace reconf {

enum class ErrorKind {
  kMalformedInput,
  kPrecondition,
  kCapExceeded,
  kInfeasible,
  kPromiseViolation,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error malformed(const std::string& what) { return {ErrorKind::kMalformedInput, what}; }
inline Error precondition(const std::string& what) { return {ErrorKind::kPrecondition, what}; }
inline Error cap_exceeded(const std::string& what) { return {ErrorKind::kCapExceeded, what}; }
inline Error infeasible(const std::string& what) { return {ErrorKind::kInfeasible, what}; }

}  // namespace reconf
