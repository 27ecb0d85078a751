#pragma once

#include <stdexcept>
#include <string>

namespace zsq {

/// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The protocol parameters are degenerate: the projected evolution operator
/// has no spectral gap, its eigenstates are not normalizable, and repeated
/// measurements do not drive the field towards a pure state.
class NoDistillation : public Error {
 public:
  using Error::Error;
};

/// A truncated state constructor would discard more probability mass than
/// the requested tolerance allows. Increase the Fock dimension.
class TailTooLarge : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class DimMismatch : public Error {
 public:
  using Error::Error;
};

class SingularDenominator : public Error {
 public:
  using Error::Error;
};

class BranchAmbiguity : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  using Error::Error;
};

class UnknownFigure : public Error {
 public:
  using Error::Error;
};

}  // namespace zsq
