#pragma once

// Reference computations used only by tests. None of these call into the
// library's own numerical routines.

#include <Eigen/Dense>

#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Coefficients of det(t I - A), highest degree first (leading 1), by the
/// Faddeev-LeVerrier recursion.
std::vector<double> characteristic_polynomial(const Matrix& a);

double evaluate_polynomial(const std::vector<double>& coeffs, double t);

/// Number of distinct real roots in (lo, hi] from a Sturm sequence.
int sturm_root_count(const std::vector<double>& coeffs, double lo, double hi);

/// Largest real root by bisection on the Sturm count.
double largest_real_root(const std::vector<double>& coeffs);

/// Spectral radius of a nonnegative matrix as the largest real root of its
/// characteristic polynomial. Intended for n <= 6.
double perron_root(const Matrix& a);

/// Floyd-Warshall transitive closure of the nonzero pattern.
bool strongly_connected_by_closure(const Matrix& a);

/// Largest eigenvalue of a symmetric matrix by bisection on Cholesky
/// success of t I - S.
double lambda_max_by_cholesky(const Matrix& symmetric);

/// True iff -S admits a Cholesky factorization (S negative definite).
bool negative_definite(const Matrix& symmetric);

/// Root of (1 - 2x)(1 - x) = 1/r0 on (0, 1/2) by bisection, r0 > 1.
double endemic_level_by_bisection(double r0);

/// One controlled step written out entrywise from M - B A.
Vector m_hat_step(const Matrix& a, double beta, double gamma, double dt, const Vector& x);

}  // namespace oracle
