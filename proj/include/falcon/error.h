#ifndef FALCON_ERROR_H_
#define FALCON_ERROR_H_

#include <stdexcept>
#include <string>

namespace falcon {

// Base class for all domain errors raised by the library. The CLI maps these
// to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or record. Carries the 1-based line number when known.
class FormatError : public Error {
 public:
  FormatError(const std::string &what, long line = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Request rejected before any work was done (empty text, bad pattern, ...).
class InvalidRequest : public Error {
 public:
  using Error::Error;
};

}  // namespace falcon

#endif  // FALCON_ERROR_H_
