#pragma once

#include <stdexcept>
#include <string>

namespace workstats {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied inputs that violate a precondition.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class NotHermitian : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class NotUnitary : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class InvalidState : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class BasisNotOrthonormal : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

/// The energy eigenbasis is not unique where the computation needs it to be.
class DegenerateBasis : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

/// A computed quantity broke one of its numerical invariants.
class NumericalError : public Error {
public:
  using Error::Error;
};

class ImaginaryResidue : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class GridTooNarrow : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class GridTooCoarse : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class Overflow : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace workstats
