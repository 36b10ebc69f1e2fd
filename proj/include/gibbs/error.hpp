#pragma once

#include <stdexcept>
#include <string>

namespace gibbs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A dense operator would exceed the configured site cap.
class DimensionCapError : public Error {
 public:
  DimensionCapError(int n_sites, int cap)
      : Error("dense representation of " + std::to_string(n_sites) +
              " sites exceeds the cap of " + std::to_string(cap)),
        n_sites_(n_sites),
        cap_(cap) {}

  int n_sites() const noexcept { return n_sites_; }
  int cap() const noexcept { return cap_; }

 private:
  int n_sites_;
  int cap_;
};

/// A computed object violates one of its stated invariants
/// (non-Hermitian state, negative eigenvalue below the floor, wrong trace).
class DataIntegrityError : public Error {
 public:
  using Error::Error;
};

/// A requested operation is not available for the given model or factor.
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace gibbs
