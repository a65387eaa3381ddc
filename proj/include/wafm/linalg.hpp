#pragma once

#include <complex>

#include <Eigen/Dense>

namespace wafm::linalg {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Ascending eigenvalues of a symmetric / hermitian matrix (lower triangle
// is read). The argument is consumed.
template <class Scalar>
Eigen::VectorXd eigenvalues(Matrix<Scalar> a);

// Full decomposition; on return `a` holds orthonormal eigenvectors as columns.
template <class Scalar>
Eigen::VectorXd eigh(Matrix<Scalar>& a);

// OpenBLAS 0.3.20 dispatches to Cooperlake kernels on recent Xeons and
// those return wrong dgemm results above n ~ 300. When OPENBLAS_CORETYPE is
// unset this pins a known-good kernel family and re-executes the program
// (the variable is only read when the library loads). Call first in main.
void pin_blas_kernel(int argc, char** argv);

// Diagonalizes a random 384 x 384 matrix through both routines and throws
// if the results are not an orthonormal eigensystem. Runs once per process.
void verify_backend();

}  // namespace wafm::linalg
