#pragma once

#include <stdexcept>
#include <string>

namespace fcs {

// Base for everything the library throws on bad input or refused work.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Thrown when a request would exceed a configured size cap (window length,
// Hilbert-space dimension, Gram basis size).
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// The invariant state has a (numerically) zero eigenvalue, so modular data and
// the GNS transfer operator are undefined.
class NotFaithful : public Error {
 public:
  using Error::Error;
};

}  // namespace fcs
