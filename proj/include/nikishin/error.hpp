#ifndef NIKISHIN_ERROR_HPP_
#define NIKISHIN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace nikishin {

// Category tag carried by every library failure; the CLI reports it verbatim
// in its machine-readable error record.
enum class ErrorKind {
  kDomain,      // input violates an invariant of a domain type
  kNumerics,    // a computation could not reach the requested accuracy
  kEvaluation,  // evaluation point on a support or pole
  kParse,       // malformed configuration text
  kValidation,  // well-formed configuration with inconsistent content
  kIo,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kNumerics: return "numerics";
    case ErrorKind::kEvaluation: return "evaluation";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nikishin

#endif  // NIKISHIN_ERROR_HPP_
