#ifndef LOVESIM_ERRORS_HPP
#define LOVESIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lovesim {

// Error taxonomy shared by the C++ core and the C API status codes.
enum class ErrorCode {
  Config = 2,       // malformed configuration / usage
  Diverged = 3,     // NaN/Inf detected during time stepping
  Domain = 4,       // argument outside mathematical domain
  Unsupported = 5,  // operation undefined for this family combination
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorCode::Config, w) {}
};
struct DivergedError : Error {
  explicit DivergedError(const std::string& w) : Error(ErrorCode::Diverged, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorCode::Domain, w) {}
};
struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& w)
      : Error(ErrorCode::Unsupported, w) {}
};

}  // namespace lovesim

#endif
