#pragma once

#include <stdexcept>
#include <string>

namespace hotspot {

// Root of every exception the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller handed us something that breaks a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A dataset row could not be turned into an image (missing or unreadable file).
class IngestionError : public Error {
 public:
  using Error::Error;
};

// Math outside its domain: zero-norm vectors, non-finite values.
class NumericDomainError : public Error {
 public:
  using Error::Error;
};

// A segmenter could not produce a meaningful partition of the input.
class SegmentationFailure : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hotspot
