#pragma once

#include <stdexcept>
#include <string>

namespace reflow {

enum class ErrorKind {
  Domain,     // argument outside the function's mathematical domain
  Config,     // configuration cannot be resolved to a valid run
  Parse,      // malformed input file
  Io,         // file could not be opened / written
  Undefined,  // quantity is undefined for the given data (zero variance, no crossing)
  Internal,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace reflow
