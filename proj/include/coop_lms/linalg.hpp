#pragma once

#include <Eigen/Dense>

#include <vector>

namespace coop_lms::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigenvalues of a symmetric matrix, ascending. The input is symmetrized as
/// (A + A^T) / 2 before decomposition. Throws NumericError on NaN/Inf or a
/// non-square input.
std::vector<double> sym_eigvals(const Matrix& a);

/// Real eigenvalues (ascending) of the product S1 * S2 with both factors
/// symmetric positive definite. Uses the similarity
///   S1 S2 ~ S2^{1/2} S1 S2^{1/2},
/// which is symmetric, so no complex arithmetic is needed.
///
/// Throws NumericError carrying the minimum eigenvalue when either factor is
/// not positive definite.
std::vector<double> eigvals_general(const Matrix& s1, const Matrix& s2);

/// Symmetric positive semidefinite square root through eigendecomposition.
Matrix sym_sqrt(const Matrix& a);

/// LU solve of a square system. Throws NumericError carrying the condition
/// estimate when it exceeds `max_condition`.
Vector solve_linear(const Matrix& a, const Vector& b, double max_condition = 1e12);

/// Minimum-norm minimizer of 0.5 * ||y - h x||^2 (pseudoinverse solution).
Vector min_norm_lstsq(const Matrix& h, const Vector& y);

/// lambda_max(h^T h), i.e. the squared largest singular value of h.
double gram_lambda_max(const Matrix& h);

bool all_finite(const Matrix& a);

}  // namespace coop_lms::linalg
