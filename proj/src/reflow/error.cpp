#include "reflow/error.hpp"

namespace reflow {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Undefined: return "undefined quantity";
    case ErrorKind::Internal: return "internal error";
  }
  return "unknown error";
}

}  // namespace reflow
