#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace infogeo {

template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;

/// Values of a real function at the nodes of a TensorGrid, in row-major node
/// order (axis 0 slowest).
using GridFunction = Vector;

/// A point of the sample space R^d, d <= 2. Fixed capacity, no heap.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;

/// Base of everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative or time-stepping procedure failed (bracket lost, blow-up).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace infogeo
