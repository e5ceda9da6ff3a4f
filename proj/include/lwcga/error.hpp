#pragma once

#include <stdexcept>
#include <string>

namespace lwcga {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual or binary input (addresses, blobs, config files).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace lwcga
