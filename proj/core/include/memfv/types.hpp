#ifndef MEMFV_TYPES_HPP
#define MEMFV_TYPES_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace memfv {

// Cell-wise scalar field; one value per mesh cell, mesh ordering.
using Field = std::vector<double>;

// One Field per species.
using MultiField = std::vector<Field>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidGeometryError : Error {
  using Error::Error;
};

struct InvalidParameterError : Error {
  using Error::Error;
};

struct InvalidDataError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct NoConvergenceError : Error {
  NoConvergenceError(const std::string& msg, double residual_)
      : Error(msg), residual(residual_) {}
  double residual;
};

struct PositivityError : Error {
  PositivityError(const std::string& msg, int cell_, double value_)
      : Error(msg), cell(cell_), value(value_) {}
  int cell;
  double value;
};

struct InsufficientDataError : Error {
  using Error::Error;
};

}  // namespace memfv

#endif
