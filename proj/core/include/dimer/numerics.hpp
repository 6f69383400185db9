#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <vector>

#include "dimer/errors.hpp"
#include "dimer/model.hpp"

namespace dimer {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cplx>;  // column-major
using Triplet = Eigen::Triplet<cplx>;

// Dense LU solve with a verified residual: ||Ax - b||_inf must not exceed
// 1e-10 (||A||_inf ||x||_inf + ||b||_inf).  Throws SingularMatrix when the
// factorization pivots collapse, NoConvergence when the residual bound fails.
Vec solve_dense(const Mat& A, const Vec& b);

// All eigenvalues of a general complex square matrix.
Vec eig_general(const Mat& A);

struct Eigensystem {
    Vec values;
    Mat vectors;  // columns
};
Eigensystem eig_general_full(const Mat& A);

// Eigenvalues of a Hermitian matrix (ascending, real).
Eigen::VectorXd eig_hermitian(const Mat& A);

// Sparse LU solve (exact, with fill-reducing ordering).
Vec solve_sparse(const SpMat& A, const Vec& b);

// Mean magnitude of the nonzero entries; the scale used for kernel
// tolerances and the trace-augmentation weight.
double sparse_scale(const SpMat& A);

// A unit vector v with ||Lv|| <= tol ||v||, for a matrix known to have an
// eigenvalue of magnitude <= tol: shifted inverse iteration.  A second,
// deflated iteration probes for a degenerate kernel; if it also converges
// below tol the kernel is ambiguous and reported as such.  The phase is
// fixed by making the largest-magnitude component real positive.
Vec null_vector(const SpMat& L, double tol);

}  // namespace dimer
