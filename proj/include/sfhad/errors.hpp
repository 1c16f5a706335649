#pragma once

#include <stdexcept>
#include <string>

namespace sfhad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A multi-index or flat index fell outside its layout.
class IndexBoundsError : public Error {
public:
  using Error::Error;
};

/// Arguments have inconsistent shapes or otherwise violate a precondition.
class InvalidInputError : public Error {
public:
  using Error::Error;
};

/// An iterative or direct numerical procedure did not produce a usable result.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// A requested size exceeds the index type or a configured cap.
class CapacityError : public Error {
public:
  using Error::Error;
};

/// A structure that must be impossible to build was observed.
class InternalConsistencyError : public Error {
public:
  using Error::Error;
};

class InsufficientDataError : public Error {
public:
  using Error::Error;
};

/// A benchmark point failed its correctness check and was not timed.
class CorrectnessGateError : public Error {
public:
  using Error::Error;
};

/// File I/O failed; the message names the path.
class IoError : public Error {
public:
  IoError(const std::string& path, const std::string& what);
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

} // namespace sfhad
