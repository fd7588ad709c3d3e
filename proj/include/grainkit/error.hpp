#pragma once

#include <stdexcept>
#include <string>

namespace grainkit {

// Base of every exception thrown by the library. The CLI maps the subclasses
// onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or truncated container data, sink/source failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// Structurally valid input that is outside what the toolchain supports
// (chroma format, bit depth, frame/format mismatch).
class FormatError : public Error {
 public:
  using Error::Error;
};

// FGC parameter constraint violations and SEI payload decode failures.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace grainkit
