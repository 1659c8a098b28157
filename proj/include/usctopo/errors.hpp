#pragma once

#include <stdexcept>
#include <string>

namespace usctopo {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid physical parameter (non-positive omega0, negative coupling, |eps| > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Chain size outside what dense diagonalization supports.
class SizeError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Sector-restricted work requested on an operator that does not conserve excitation number.
class SectorError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Requested a plot of data that has no line-series or heatmap form.
class UnplottableError : public Error {
 public:
  using Error::Error;
};

}  // namespace usctopo
