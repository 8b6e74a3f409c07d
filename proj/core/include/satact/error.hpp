#pragma once

#include <stdexcept>
#include <string>

namespace satact {

// Base for every error raised by the library. Subclasses let callers (and the
// CLI exit-code table) distinguish failure categories without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes are incompatible.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A scalar or count argument is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

// Base for malformed on-disk data (IDX files, saved networks).
class FormatError : public Error {
 public:
  using Error::Error;
};

class BadMagicError : public FormatError {
 public:
  using FormatError::FormatError;
};

class TruncatedFileError : public FormatError {
 public:
  using FormatError::FormatError;
};

class CountMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace satact
