#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "hps/errors.hpp"
#include "hps/types.hpp"

namespace hps::detail {

/// Dense LU with partial pivoting plus a cheap rank check on the U diagonal.
template <typename T>
Eigen::PartialPivLU<Matrix<T>> checked_lu(const Matrix<T>& m, ErrorCode code,
                                          const char* what, int node = -1,
                                          int level = -1,
                                          const char* stage = "") {
  Eigen::PartialPivLU<Matrix<T>> lu(m);
  const auto& u = lu.matrixLU();
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double a = std::abs(u(i, i));
    dmin = std::min(dmin, a);
    dmax = std::max(dmax, a);
  }
  if (!std::isfinite(dmax) || !(dmin > dmax * 1e-14))
    throw Error(code, what, node, level, stage);
  return lu;
}

}  // namespace hps::detail
