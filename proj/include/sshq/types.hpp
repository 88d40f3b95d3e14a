// types.hpp: dense Eigen aliases shared by the whole library

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sshq {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

// Double precision is what every experiment runs in.
using cplx = Complex<double>;
using MatrixXr = RMatrix<double>;
using MatrixXc = CMatrix<double>;
using VectorXr = RVector<double>;
using VectorXc = CVector<double>;

using Index = Eigen::Index;

/// Thrown for violated preconditions on user-supplied parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical run leaves its validity envelope (unitarity drift, domain overrun).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

/// Largest absolute entry of (A - A^dagger).
template <typename Derived>
auto hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Largest absolute entry of (U^dagger U - I).
template <typename Derived>
auto unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Plain = typename Derived::PlainObject;
  return (u.adjoint() * u - Plain::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace sshq
