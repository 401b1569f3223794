#include <doctest.h>

#include <cmath>
#include <random>

#include "hps/errors.hpp"
#include "hps/spectral.hpp"

using namespace hps;
using spectral::cheb_coeffs;
using spectral::cheb_nodes;
using spectral::diff_matrix;
using spectral::interp_matrix;

namespace {
constexpr double kPi = 3.14159265358979323846;

double cheb_t(int k, double x) { return std::cos(k * std::acos(std::clamp(x, -1.0, 1.0))); }
}  // namespace

TEST_CASE("cheb_nodes basic layouts") {
  const auto n3 = cheb_nodes(3, -1.0, 1.0);
  CHECK(n3.points[0] == -1.0);
  CHECK(n3.points[1] == 0.0);
  CHECK(n3.points[2] == 1.0);

  const auto n2 = cheb_nodes(2, 0.0, 5.0);
  CHECK(n2.points[0] == 0.0);
  CHECK(n2.points[1] == 5.0);

  // closed form x_k = (1 - cos(k pi / 4)) / 2 on [0, 1]
  const auto n5 = cheb_nodes(5, 0.0, 1.0);
  const double c = std::cos(kPi / 4.0);
  CHECK(n5.points[0] == doctest::Approx(0.0));
  CHECK(n5.points[1] == doctest::Approx((1.0 - c) / 2.0).epsilon(1e-15));
  CHECK(n5.points[2] == doctest::Approx(0.5));
  CHECK(n5.points[3] == doctest::Approx((1.0 + c) / 2.0).epsilon(1e-15));
  CHECK(n5.points[4] == doctest::Approx(1.0));

  for (int n : {2, 5, 9, 16, 33}) {
    const auto ns = cheb_nodes(n, -2.5, 0.75);
    CHECK(ns.points.front() == -2.5);
    CHECK(ns.points.back() == 0.75);
    for (int k = 1; k < n; ++k) CHECK(ns.points[k] > ns.points[k - 1]);
  }

  CHECK_THROWS_AS(cheb_nodes(1, 0.0, 1.0), Error);
  CHECK_THROWS_AS(cheb_nodes(4, 1.0, 1.0), Error);
  CHECK_THROWS_AS(cheb_nodes(4, 2.0, 1.0), Error);
}

TEST_CASE("diff_matrix annihilates constants and differentiates x") {
  for (int n : {4, 8, 16, 32}) {
    const auto ns = cheb_nodes(n, -1.0, 1.0);
    const Eigen::MatrixXd d = diff_matrix(ns);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    CHECK((d * ones).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) x[k] = ns.points[k];
    CHECK(((d * x) - ones).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("diff_matrix exact on cubic at n=8") {
  const auto ns = cheb_nodes(8, -1.0, 1.0);
  Eigen::VectorXd v(8), want(8);
  for (int k = 0; k < 8; ++k) {
    const double x = ns.points[k];
    v[k] = x * x * x;
    want[k] = 3.0 * x * x;
  }
  const Eigen::VectorXd got = diff_matrix(ns) * v;
  CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("diff_matrix exact on all monomials up to degree n-1") {
  std::mt19937 rng(7);
  for (int n : {6, 12, 24, 32}) {
    std::uniform_real_distribution<double> ab(-1.5, 1.5);
    const double a = ab(rng);
    const double b = a + 1.0 + std::abs(ab(rng));
    const auto ns = cheb_nodes(n, a, b);
    const Eigen::MatrixXd d = diff_matrix(ns);
    for (int deg = 0; deg < n; ++deg) {
      Eigen::VectorXd v(n), want(n);
      double scale = 0.0;
      for (int k = 0; k < n; ++k) {
        const double x = ns.points[k];
        v[k] = std::pow(x, deg);
        want[k] = deg == 0 ? 0.0 : deg * std::pow(x, deg - 1);
        scale = std::max(scale, std::abs(want[k]));
      }
      const double tol = 1e-10 * std::max(1.0, scale);
      CHECK((d * v - want).cwiseAbs().maxCoeff() <= tol);
    }
  }
}

TEST_CASE("interp_matrix identity, partition of unity, coincident points") {
  const auto src = cheb_nodes(9, 0.0, 2.0).points;
  const Eigen::MatrixXd eye = interp_matrix(src, src);
  CHECK((eye - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> in(0.0, 2.0);
  std::vector<double> dst(25);
  for (auto& t : dst) t = in(rng);
  dst.push_back(src[4]);  // coincident point
  const Eigen::MatrixXd l = interp_matrix(src, dst);
  const Eigen::VectorXd rowsums = l.rowwise().sum();
  CHECK((rowsums.array() - 1.0).abs().maxCoeff() <= 1e-13);
  CHECK(l(25, 4) == 1.0);
  CHECK(l.row(25).cwiseAbs().sum() == 1.0);

  CHECK_THROWS_AS(interp_matrix({0.5, 0.5, 1.0}, {0.7}), Error);
}

TEST_CASE("interp_matrix degree-13 panel exactness") {
  // one parent edge panel (14 interior nodes of nc=16) onto two child panels
  const auto parent = cheb_nodes(16, 0.0, 1.0).points;
  const std::vector<double> src(parent.begin() + 1, parent.end() - 1);
  const auto kid_a = cheb_nodes(16, 0.0, 0.5).points;
  const auto kid_b = cheb_nodes(16, 0.5, 1.0).points;
  std::vector<double> dst(kid_a.begin() + 1, kid_a.end() - 1);
  dst.insert(dst.end(), kid_b.begin() + 1, kid_b.end() - 1);
  REQUIRE(src.size() == 14);
  REQUIRE(dst.size() == 28);

  const Eigen::MatrixXd l = interp_matrix(src, dst);
  Eigen::VectorXd v(14), want(28);
  for (int k = 0; k < 14; ++k) v[k] = std::pow(src[k], 13);
  for (int k = 0; k < 28; ++k) want[k] = std::pow(dst[k], 13);
  CHECK((l * v - want).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("interp_matrix reproduces monomials up to degree |src|-1") {
  for (int n : {5, 16, 32}) {
    const auto src = cheb_nodes(n, -1.0, 1.0).points;
    std::mt19937 rng(n);
    std::uniform_real_distribution<double> in(-1.0, 1.0);
    std::vector<double> dst(40);
    for (auto& t : dst) t = in(rng);
    const Eigen::MatrixXd l = interp_matrix(src, dst);
    for (int deg = 0; deg < n; ++deg) {
      Eigen::VectorXd v(n);
      Eigen::VectorXd want(40);
      for (int k = 0; k < n; ++k) v[k] = std::pow(src[k], deg);
      for (size_t k = 0; k < dst.size(); ++k) want[k] = std::pow(dst[k], deg);
      CHECK((l * v - want).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("cheb_coeffs trivial expansions") {
  for (int n : {2, 6, 16}) {
    const auto ns = cheb_nodes(n, -1.0, 1.0);
    Eigen::VectorXd c7 = Eigen::VectorXd::Constant(n, 7.0);
    const Eigen::VectorXd cc = cheb_coeffs(c7);
    CHECK(cc[0] == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(cc.tail(n - 1).cwiseAbs().maxCoeff() <= 1e-13);

    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) x[k] = ns.points[k];
    const Eigen::VectorXd cx = cheb_coeffs(x);
    CHECK(cx[1] == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k < n; ++k)
      if (k != 1) CHECK(std::abs(cx[k]) <= 1e-13);
  }
}

TEST_CASE("cheb_coeffs against Chebyshev-Vandermonde oracle") {
  // oracle: solve the Vandermonde system V c = f with V_jk = T_k(x_j)
  const int n = 8;
  const auto ns = cheb_nodes(n, -1.0, 1.0);
  Eigen::MatrixXd vand(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) vand(j, k) = cheb_t(k, ns.points[j]);

  Eigen::VectorXd t3(n);
  for (int j = 0; j < n; ++j) t3[j] = cheb_t(3, ns.points[j]);
  const Eigen::VectorXd got = cheb_coeffs(t3);
  const Eigen::VectorXd oracle = vand.partialPivLu().solve(t3);
  CHECK((got - oracle).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(got[3] == doctest::Approx(1.0).epsilon(1e-13));
  for (int k = 0; k < n; ++k)
    if (k != 3) CHECK(std::abs(got[k]) <= 1e-13);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> in(-1.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::VectorXd f(n);
    for (int k = 0; k < n; ++k) f[k] = in(rng);
    CHECK((cheb_coeffs(f) - vand.partialPivLu().solve(f)).cwiseAbs().maxCoeff() <=
          1e-12);
  }
}

TEST_CASE("cheb_coeffs round trip at the nodes") {
  for (int n : {4, 12, 32}) {
    const auto ns = cheb_nodes(n, 2.0, 3.0);
    std::mt19937 rng(n);
    std::uniform_real_distribution<double> in(-1.0, 1.0);
    Eigen::VectorXd f(n);
    for (int k = 0; k < n; ++k) f[k] = in(rng);
    const Eigen::VectorXd c = cheb_coeffs(f);
    // evaluate the series at the mapped nodes
    for (int j = 0; j < n; ++j) {
      const double xhat =
          2.0 * (ns.points[j] - ns.a) / (ns.b - ns.a) - 1.0;
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += c[k] * cheb_t(k, xhat);
      CHECK(acc == doctest::Approx(f[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("cheb_coeffs complex input uses the same transform") {
  const int n = 10;
  Eigen::VectorXcd f(n);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> in(-1.0, 1.0);
  for (int k = 0; k < n; ++k) f[k] = Complex(in(rng), in(rng));
  const Eigen::VectorXcd c = cheb_coeffs(f);
  const Eigen::VectorXd cr = cheb_coeffs(Eigen::VectorXd(f.real()));
  const Eigen::VectorXd ci = cheb_coeffs(Eigen::VectorXd(f.imag()));
  CHECK((c.real() - cr).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((c.imag() - ci).cwiseAbs().maxCoeff() <= 1e-14);
}
