#pragma once

#include <stdexcept>
#include <string>

namespace clustergeo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON shape, rational syntax, CLI arguments).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A point or parameter that does not belong to the object it was used with.
class InvalidPoint : public Error {
 public:
  using Error::Error;
};

// An operation needed a point of a line beyond its stored finite range.
class SegmentOverflow : public Error {
 public:
  explicit SegmentOverflow(const std::string& what, int edge = -1)
      : Error(what), edge_(edge) {}

  // Bass-Serre edge of the offending wall, or -1 when not known at the throw site.
  int edge() const { return edge_; }

 private:
  int edge_;
};

class NonConvexError : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace clustergeo
