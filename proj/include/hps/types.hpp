#pragma once

#include <Eigen/Dense>
#include <complex>

namespace hps {

using Complex = std::complex<double>;

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

enum class Formulation { DtN, ItI };

/// Axis-aligned box. `level` counts binary tree levels below the root;
/// one quadrant split of a leaf adds two.
struct Rect {
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;
  int level = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double xmid() const { return 0.5 * (x0 + x1); }
  double ymid() const { return 0.5 * (y0 + y1); }
  double area() const { return width() * height(); }
  bool contains(double x, double y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
  bool operator==(const Rect& o) const {
    return x0 == o.x0 && x1 == o.x1 && y0 == o.y0 && y1 == o.y1;
  }
};

}  // namespace hps
