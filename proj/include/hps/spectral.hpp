#pragma once

#include <vector>

#include "hps/types.hpp"

namespace hps::spectral {

/// Chebyshev points of the second kind mapped to [a, b], ascending:
/// x_k = a + (b - a) (1 - cos(k pi / (n-1))) / 2, k = 0 .. n-1.
struct NodeSet1D {
  std::vector<double> points;
  double a = -1.0, b = 1.0;
  int size() const { return static_cast<int>(points.size()); }
};

NodeSet1D cheb_nodes(int n, double a, double b);

/// Barycentric weights for arbitrary pairwise-distinct points (product
/// formula, rescaled against under/overflow). Weights are defined up to a
/// common factor.
std::vector<double> bary_weights(const std::vector<double>& pts);

/// Analytic second-kind weights (-1)^k with halved endpoints, ascending order.
std::vector<double> cheb_bary_weights(int n);

/// Spectral differentiation matrix: (D v)_j is the derivative at node j of
/// the degree-(n-1) interpolant through v. Exact on polynomials of degree
/// <= n-1 up to roundoff; row sums vanish by construction.
Eigen::MatrixXd diff_matrix(const NodeSet1D& nodes);

/// Differentiation matrix for arbitrary distinct points.
Eigen::MatrixXd diff_matrix_points(const std::vector<double>& pts);

/// Barycentric Lagrange interpolation operator src -> dst (|dst| x |src|).
/// Rows sum to one; a dst point equal to a src point yields a unit row.
Eigen::MatrixXd interp_matrix(const std::vector<double>& src,
                              const std::vector<double>& dst);

/// Values at the n ascending second-kind nodes -> Chebyshev coefficients
/// c_0..c_{n-1} of the interpolant, sum c_k T_k. The transform matrix is
/// precomputed and cached per n.
const Eigen::MatrixXd& cheb_coeff_matrix(int n);

Eigen::VectorXd cheb_coeffs(const Eigen::VectorXd& values);
Eigen::VectorXcd cheb_coeffs(const Eigen::VectorXcd& values);

/// Cached reference differentiation matrix on [-1, 1]; diff_matrix rescales
/// it by 2 / (b - a).
const Eigen::MatrixXd& ref_diff_matrix(int n);

}  // namespace hps::spectral
