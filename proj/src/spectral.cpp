#include "hps/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "hps/errors.hpp"

namespace hps::spectral {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::mutex cache_mutex;
std::map<int, Eigen::MatrixXd> diff_cache;
std::map<int, Eigen::MatrixXd> coeff_cache;
}  // namespace

NodeSet1D cheb_nodes(int n, double a, double b) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "cheb_nodes: n < 2");
  if (!(a < b)) throw Error(ErrorCode::invalid_argument, "cheb_nodes: a >= b");
  NodeSet1D ns;
  ns.a = a;
  ns.b = b;
  ns.points.resize(n);
  const double half = 0.5 * (b - a);
  for (int k = 0; k < n; ++k) {
    ns.points[k] = a + half * (1.0 - std::cos(k * kPi / (n - 1)));
  }
  ns.points.front() = a;
  ns.points.back() = b;
  if (n % 2 == 1) ns.points[n / 2] = a + half;
  return ns;
}

std::vector<double> bary_weights(const std::vector<double>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n == 1) return {1.0};
  // Rescale each factor by 4/(b-a) to keep products near unit scale on
  // short intervals (Berrut & Trefethen).
  const double scale = 4.0 / (pts.back() - pts.front());
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    double p = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = pts[i] - pts[j];
      if (d == 0.0)
        throw Error(ErrorCode::invalid_argument,
                    "bary_weights: duplicate points");
      p *= d * scale;
    }
    w[i] = 1.0 / p;
  }
  return w;
}

std::vector<double> cheb_bary_weights(int n) {
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) {
    w[k] = (k % 2 == 0) ? 1.0 : -1.0;
    if (k == 0 || k == n - 1) w[k] *= 0.5;
  }
  return w;
}

namespace {

Eigen::MatrixXd diff_from_weights(const std::vector<double>& pts,
                                  const std::vector<double>& w) {
  const int n = static_cast<int>(pts.size());
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double v = (w[j] / w[i]) / (pts[i] - pts[j]);
      d(i, j) = v;
      rowsum += v;
    }
    d(i, i) = -rowsum;  // negative-sum trick: constants annihilated exactly
  }
  return d;
}

Eigen::MatrixXd build_ref_diff(int n) {
  auto ns = cheb_nodes(n, -1.0, 1.0);
  return diff_from_weights(ns.points, cheb_bary_weights(n));
}

// Values at ascending second-kind nodes -> Chebyshev coefficients. Ascending
// node k sits at -cos(k pi / N), i.e. standard DCT-I index j = N - k.
Eigen::MatrixXd build_coeff_matrix(int n) {
  const int N = n - 1;
  Eigen::MatrixXd m(n, n);
  for (int k = 0; k < n; ++k) {
    const double qk = (k == 0 || k == N) ? 2.0 : 1.0;
    for (int col = 0; col < n; ++col) {
      const int j = N - col;
      const double qj = (j == 0 || j == N) ? 2.0 : 1.0;
      m(k, col) = 2.0 / (N * qk * qj) * std::cos(k * j * kPi / N);
    }
  }
  return m;
}

}  // namespace

const Eigen::MatrixXd& ref_diff_matrix(int n) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "ref_diff_matrix: n < 2");
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = diff_cache.find(n);
  if (it == diff_cache.end()) it = diff_cache.emplace(n, build_ref_diff(n)).first;
  return it->second;
}

Eigen::MatrixXd diff_matrix(const NodeSet1D& nodes) {
  const int n = nodes.size();
  if (n < 2) throw Error(ErrorCode::invalid_argument, "diff_matrix: n < 2");
  return ref_diff_matrix(n) * (2.0 / (nodes.b - nodes.a));
}

Eigen::MatrixXd diff_matrix_points(const std::vector<double>& pts) {
  if (pts.size() < 2)
    throw Error(ErrorCode::invalid_argument, "diff_matrix_points: n < 2");
  return diff_from_weights(pts, bary_weights(pts));
}

Eigen::MatrixXd interp_matrix(const std::vector<double>& src,
                              const std::vector<double>& dst) {
  const int ns = static_cast<int>(src.size());
  const int nd = static_cast<int>(dst.size());
  const auto w = bary_weights(src);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(nd, ns);
  for (int d = 0; d < nd; ++d) {
    int hit = -1;
    for (int j = 0; j < ns; ++j) {
      if (dst[d] == src[j]) {
        hit = j;
        break;
      }
    }
    if (hit >= 0) {
      l(d, hit) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (int j = 0; j < ns; ++j) {
      const double t = w[j] / (dst[d] - src[j]);
      l(d, j) = t;
      denom += t;
    }
    l.row(d) /= denom;
  }
  return l;
}

const Eigen::MatrixXd& cheb_coeff_matrix(int n) {
  if (n < 2)
    throw Error(ErrorCode::invalid_argument, "cheb_coeff_matrix: n < 2");
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = coeff_cache.find(n);
  if (it == coeff_cache.end())
    it = coeff_cache.emplace(n, build_coeff_matrix(n)).first;
  return it->second;
}

Eigen::VectorXd cheb_coeffs(const Eigen::VectorXd& values) {
  return cheb_coeff_matrix(static_cast<int>(values.size())) * values;
}

Eigen::VectorXcd cheb_coeffs(const Eigen::VectorXcd& values) {
  return cheb_coeff_matrix(static_cast<int>(values.size())) * values;
}

}  // namespace hps::spectral
