#include <doctest.h>

#include <cmath>
#include <random>

#include "hps/errors.hpp"
#include "hps/leaf.hpp"

using namespace hps;

namespace {

constexpr double kPi = 3.14159265358979323846;

PdeSpec<double> laplace_spec() {
  PdeSpec<double> s;
  s.c11 = [](double, double) { return 1.0; };
  s.c22 = [](double, double) { return 1.0; };
  return s;
}

template <typename F>
Eigen::VectorXd sample(const LeafGrid& g, F&& f) {
  Eigen::VectorXd v(g.nc * g.nc);
  for (int p = 0; p < g.nc * g.nc; ++p) {
    auto [x, y] = g.point(p);
    v[p] = f(x, y);
  }
  return v;
}

template <typename F>
Eigen::VectorXd sample_at(const LeafGrid& g, const std::vector<int>& idx, F&& f) {
  Eigen::VectorXd v(idx.size());
  for (size_t k = 0; k < idx.size(); ++k) {
    auto [x, y] = g.point(idx[k]);
    v[k] = f(x, y);
  }
  return v;
}

}  // namespace

TEST_CASE("leaf grid index partitions") {
  const Rect unit{0.0, 1.0, 0.0, 1.0, 0};
  const LeafGrid g4 = build_leaf_grid(unit, 4);
  CHECK(g4.nb() == 8);
  CHECK(g4.ni() == 4);

  const LeafGrid g16 = build_leaf_grid(unit, 16);
  CHECK(g16.nb() == 56);
  CHECK(g16.ni() == 196);
  CHECK(g16.idx_corners.size() == 4);

  // boundary + interior + corners partition the tensor indices
  std::vector<int> seen(16 * 16, 0);
  for (int p : g16.idx_boundary) seen[p]++;
  for (int p : g16.idx_interior) seen[p]++;
  for (int p : g16.idx_corners) seen[p]++;
  for (int p = 0; p < 16 * 16; ++p) CHECK(seen[p] == 1);

  // interior points strictly inside
  for (int p : g16.idx_interior) {
    auto [x, y] = g16.point(p);
    CHECK(x > 0.0);
    CHECK(x < 1.0);
    CHECK(y > 0.0);
    CHECK(y < 1.0);
  }

  // edge ordering: [S, E, N, W], ascending within each edge
  const int m = 14;
  for (int k = 0; k < m; ++k) {
    auto [xs, ys_] = g16.point(g16.idx_boundary[k]);
    CHECK(ys_ == 0.0);  // south
    auto [xe, ye] = g16.point(g16.idx_boundary[m + k]);
    CHECK(xe == 1.0);  // east
    auto [xn, yn] = g16.point(g16.idx_boundary[2 * m + k]);
    CHECK(yn == 1.0);  // north
    auto [xw, yw] = g16.point(g16.idx_boundary[3 * m + k]);
    CHECK(xw == 0.0);  // west
  }

  CHECK_THROWS_AS(build_leaf_grid(unit, 3), Error);
}

TEST_CASE("assemble_operator on Laplace and zero-order specs") {
  const Rect unit{0.0, 1.0, 0.0, 1.0, 0};
  const LeafGrid g = build_leaf_grid(unit, 12);
  const auto a = assemble_operator(g, laplace_spec());

  // -Lap(x^2 + y^2) = -4 at interior rows
  const Eigen::VectorXd v = sample(g, [](double x, double y) { return x * x + y * y; });
  const Eigen::VectorXd av = a * v;
  for (int p : g.idx_interior) CHECK(av[p] == doctest::Approx(-4.0).epsilon(1e-10));

  // harmonic polynomial annihilated at interior rows
  const Eigen::VectorXd h = sample(g, [](double x, double y) { return x * x - y * y; });
  const Eigen::VectorXd ah = a * h;
  for (int p : g.idx_interior) CHECK(std::abs(ah[p]) <= 1e-10);

  // zero-order spec is the identity sampling
  PdeSpec<double> zo;
  zo.c0 = [](double, double) { return 1.0; };
  const auto azo = assemble_operator(g, zo);
  CHECK((azo * v - v).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("assemble_operator with all terms matches hand derivative") {
  const Rect r{0.25, 1.0, -0.5, 0.5, 0};
  const LeafGrid g = build_leaf_grid(r, 14);
  PdeSpec<double> s;
  s.c11 = [](double x, double) { return 1.0 + 0.5 * x; };
  s.c12 = [](double, double y) { return 0.25 * y; };
  s.c22 = [](double x, double y) { return 2.0 - 0.1 * x * y; };
  s.c1 = [](double, double y) { return y; };
  s.c2 = [](double x, double) { return -x; };
  s.c0 = [](double x, double y) { return 3.0 + x + y; };
  const auto a = assemble_operator(g, s);

  // u = x^3 y^2: ux = 3x^2 y^2, uy = 2x^3 y, uxx = 6x y^2, uyy = 2x^3, uxy = 6x^2 y
  const Eigen::VectorXd u = sample(g, [](double x, double y) { return x * x * x * y * y; });
  const Eigen::VectorXd au = a * u;
  for (int p : g.idx_interior) {
    auto [x, y] = g.point(p);
    const double want = -s.c11(x, y) * 6.0 * x * y * y -
                        2.0 * s.c12(x, y) * 6.0 * x * x * y -
                        s.c22(x, y) * 2.0 * x * x * x +
                        s.c1(x, y) * 3.0 * x * x * y * y +
                        s.c2(x, y) * 2.0 * x * x * x * y +
                        s.c0(x, y) * x * x * x * y * y;
    CHECK(au[p] == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("flux matrix fixed directions") {
  const Rect unit{0.0, 1.0, 0.0, 1.0, 0};
  const LeafGrid g = build_leaf_grid(unit, 16);
  const Eigen::MatrixXd l = flux_matrix(g);
  const int m = 14;

  const Eigen::VectorXd vy = sample(g, [](double, double y) { return y; });
  const Eigen::VectorXd ly = l * vy;
  for (int k = 0; k < m; ++k) {
    CHECK(ly[k] == doctest::Approx(1.0).epsilon(1e-12));          // S: du/dy
    CHECK(std::abs(ly[m + k]) <= 1e-12);                          // E: du/dx
    CHECK(ly[2 * m + k] == doctest::Approx(1.0).epsilon(1e-12));  // N
    CHECK(std::abs(ly[3 * m + k]) <= 1e-12);                      // W
  }

  const Eigen::VectorXd vx = sample(g, [](double x, double) { return x; });
  const Eigen::VectorXd lx = l * vx;
  for (int k = 0; k < m; ++k) {
    CHECK(std::abs(lx[k]) <= 1e-12);
    CHECK(lx[m + k] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(lx[2 * m + k]) <= 1e-12);
    CHECK(lx[3 * m + k] == doctest::Approx(1.0).epsilon(1e-12));
  }

  // d(xy)/dy = x on the south edge
  const Eigen::VectorXd vxy = sample(g, [](double x, double y) { return x * y; });
  const Eigen::VectorXd lxy = l * vxy;
  for (int k = 0; k < m; ++k) {
    auto [x, y] = g.point(g.idx_boundary[k]);
    CHECK(lxy[k] == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("outward flux matrix signs") {
  const Rect unit{0.0, 1.0, 0.0, 1.0, 0};
  const LeafGrid g = build_leaf_grid(unit, 16);
  const Eigen::MatrixXd n = outward_flux_matrix(g);
  const int m = 14;

  const Eigen::VectorXd vy = sample(g, [](double, double y) { return y; });
  const Eigen::VectorXd ny = n * vy;
  for (int k = 0; k < m; ++k) {
    CHECK(ny[k] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ny[2 * m + k] == doctest::Approx(1.0).epsilon(1e-12));
  }

  const Eigen::VectorXd c = Eigen::VectorXd::Ones(16 * 16);
  CHECK((n * c).cwiseAbs().maxCoeff() <= 1e-11);

  const Eigen::VectorXd vx2 = sample(g, [](double x, double) { return x * x; });
  const Eigen::VectorXd nx2 = n * vx2;
  for (int k = 0; k < m; ++k) {
    CHECK(nx2[m + k] == doctest::Approx(2.0).epsilon(1e-11));   // east, +2x at x=1
    CHECK(std::abs(nx2[3 * m + k]) <= 1e-11);                   // west, -2x at x=0
  }
}

TEST_CASE("leaf DtN reproduces linear harmonic data") {
  const Rect unit{0.0, 1.0, 0.0, 1.0, 0};
  const LeafGrid g = build_leaf_grid(unit, 16);
  const auto ops = build_leaf_dtn(g, laplace_spec());

  const Eigen::VectorXd ub = sample_at(g, g.idx_boundary, [](double x, double) { return x; });
  const Eigen::VectorXd ui = ops.psi * ub;
  const Eigen::VectorXd want = sample_at(g, g.idx_interior, [](double x, double) { return x; });
  CHECK((ui - want).cwiseAbs().maxCoeff() <= 1e-12);

  const Eigen::VectorXd tb = ops.dtn * ub;
  const int m = 14;
  for (int k = 0; k < m; ++k) {
    CHECK(std::abs(tb[k]) <= 1e-10);                               // S: du/dy = 0
    CHECK(tb[m + k] == doctest::Approx(1.0).epsilon(1e-10));       // E: du/dx = 1
    CHECK(std::abs(tb[2 * m + k]) <= 1e-10);                       // N
    CHECK(tb[3 * m + k] == doctest::Approx(1.0).epsilon(1e-10));   // W
  }

  // constant boundary data has zero flux
  const Eigen::VectorXd cb = Eigen::VectorXd::Ones(g.nb());
  CHECK((ops.dtn * cb).cwiseAbs().maxCoeff() <= 1e-10);

  // no body load means zero particular data
  CHECK(ops.z_part.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ops.h_part.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("leaf DtN harmonic polynomial flux consistency") {
  const Rect unit{0.0, 1.0, 0.0, 1.0, 0};
  const LeafGrid g = build_leaf_grid(unit, 16);
  const auto ops = build_leaf_dtn(g, laplace_spec());

  // harmonic polynomial of moderate degree: Re((x+iy)^5)
  auto u = [](double x, double y) {
    const Complex z(x, y);
    return std::pow(z, 5).real();
  };
  auto ux = [](double x, double y) {
    const Complex z(x, y);
    return 5.0 * std::pow(z, 4).real();
  };
  auto uy = [](double x, double y) {
    const Complex z(x, y);
    return -5.0 * std::pow(z, 4).imag();
  };
  const Eigen::VectorXd ub = sample_at(g, g.idx_boundary, u);
  const Eigen::VectorXd tb = ops.dtn * ub;
  const int m = 14;
  for (int k = 0; k < m; ++k) {
    auto [x0, y0] = g.point(g.idx_boundary[k]);
    CHECK(tb[k] == doctest::Approx(uy(x0, y0)).epsilon(1e-9));
    auto [x1, y1] = g.point(g.idx_boundary[m + k]);
    CHECK(tb[m + k] == doctest::Approx(ux(x1, y1)).epsilon(1e-9));
    auto [x2, y2] = g.point(g.idx_boundary[2 * m + k]);
    CHECK(tb[2 * m + k] == doctest::Approx(uy(x2, y2)).epsilon(1e-9));
    auto [x3, y3] = g.point(g.idx_boundary[3 * m + k]);
    CHECK(tb[3 * m + k] == doctest::Approx(ux(x3, y3)).epsilon(1e-9));
  }
}

TEST_CASE("leaf DtN body load: manufactured Poisson solution") {
  const Rect unit{0.0, 1.0, 0.0, 1.0, 0};
  const LeafGrid g = build_leaf_grid(unit, 16);
  PdeSpec<double> s = laplace_spec();
  s.body_load = [](double x, double y) {
    return 2.0 * kPi * kPi * std::sin(kPi * x) * std::sin(kPi * y);
  };
  const auto ops = build_leaf_dtn(g, s);
  const Eigen::VectorXd want = sample_at(g, g.idx_interior, [](double x, double y) {
    return std::sin(kPi * x) * std::sin(kPi * y);
  });
  CHECK((ops.z_part - want).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("leaf exactness on random tensor polynomials") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int nc : {8, 16}) {
    const Rect r{0.0, 0.75, 0.25, 1.0, 0};
    const LeafGrid g = build_leaf_grid(r, nc);
    PdeSpec<double> s;
    s.c11 = [](double x, double) { return 1.0 + 0.25 * x; };
    s.c22 = [](double, double y) { return 1.0 + 0.1 * y * y; };
    s.c1 = [](double, double y) { return 0.5 * y; };
    s.c0 = [](double x, double y) { return 2.0 + x * y; };

    const int deg = nc - 3;
    Eigen::MatrixXd c(deg + 1, deg + 1);
    for (int i = 0; i <= deg; ++i)
      for (int j = 0; j <= deg; ++j) c(i, j) = coef(rng);
    auto u = [&](double x, double y) {
      double acc = 0.0;
      for (int i = 0; i <= deg; ++i)
        for (int j = 0; j <= deg; ++j) acc += c(i, j) * std::pow(x, i) * std::pow(y, j);
      return acc;
    };
    auto ux = [&](double x, double y) {
      double acc = 0.0;
      for (int i = 1; i <= deg; ++i)
        for (int j = 0; j <= deg; ++j) acc += c(i, j) * i * std::pow(x, i - 1) * std::pow(y, j);
      return acc;
    };
    auto uxx = [&](double x, double y) {
      double acc = 0.0;
      for (int i = 2; i <= deg; ++i)
        for (int j = 0; j <= deg; ++j)
          acc += c(i, j) * i * (i - 1) * std::pow(x, i - 2) * std::pow(y, j);
      return acc;
    };
    auto uyy = [&](double x, double y) {
      double acc = 0.0;
      for (int i = 0; i <= deg; ++i)
        for (int j = 2; j <= deg; ++j)
          acc += c(i, j) * j * (j - 1) * std::pow(x, i) * std::pow(y, j - 2);
      return acc;
    };
    PdeSpec<double> sg = s;
    sg.body_load = [&](double x, double y) {
      return -s.c11(x, y) * uxx(x, y) - s.c22(x, y) * uyy(x, y) +
             s.c1(x, y) * ux(x, y) + s.c0(x, y) * u(x, y);
    };
    const auto ops = build_leaf_dtn(g, sg);
    const Eigen::VectorXd ub = sample_at(g, g.idx_boundary, u);
    const Eigen::VectorXd got = ops.psi * ub + ops.z_part;
    const Eigen::VectorXd want = sample_at(g, g.idx_interior, u);
    const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-10 * scale);
  }
}

TEST_CASE("leaf ItI plane wave") {
  // constant-coefficient Helmholtz, eta = omega; leaf resolved at >= 8 ppw
  const double omega = 4.0;  // 25 points per wavelength
  const Rect unit{0.0, 1.0, 0.0, 1.0, 0};
  const LeafGrid g = build_leaf_grid(unit, 16);
  PdeSpec<Complex> s;
  s.c11 = [](double, double) { return Complex(1.0); };
  s.c22 = [](double, double) { return Complex(1.0); };
  s.c0 = [omega](double, double) { return Complex(-omega * omega); };

  const auto ops = build_leaf_iti(g, s, Complex(omega));
  CHECK(ops.iti.rows() == 56);
  CHECK(ops.iti.cols() == 56);
  CHECK(ops.z_part.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ops.h_part.cwiseAbs().maxCoeff() == 0.0);

  // incoming and outgoing impedance traces of u = exp(i omega x)
  const double d1 = 1.0, d2 = 0.0;
  auto uinc = [&](double x, double y) {
    return std::exp(Complex(0.0, omega * (d1 * x + d2 * y)));
  };
  const int m = 14;
  Eigen::VectorXcd tin(g.nb()), gout_want(g.nb());
  for (int k = 0; k < g.nb(); ++k) {
    auto [x, y] = g.point(g.idx_boundary[k]);
    double nx = 0.0, ny = 0.0;
    if (k < m) ny = -1.0;
    else if (k < 2 * m) nx = 1.0;
    else if (k < 3 * m) ny = 1.0;
    else nx = -1.0;
    const Complex dn = Complex(0.0, omega) * (d1 * nx + d2 * ny) * uinc(x, y);
    tin[k] = dn + Complex(0.0, omega) * uinc(x, y);
    gout_want[k] = dn - Complex(0.0, omega) * uinc(x, y);
  }

  const Eigen::VectorXcd ui = ops.psi * tin;
  Eigen::VectorXcd want(g.ni());
  for (int k = 0; k < g.ni(); ++k) {
    auto [x, y] = g.point(g.idx_interior[k]);
    want[k] = uinc(x, y);
  }
  CHECK((ui - want).cwiseAbs().maxCoeff() <= 1e-8);

  // outgoing data round trip
  const Eigen::VectorXcd gout = ops.iti * tin + ops.h_part;
  CHECK((gout - gout_want).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("leaf ItI rejects real eta = 0") {
  const LeafGrid g = build_leaf_grid({0, 1, 0, 1, 0}, 8);
  PdeSpec<Complex> s;
  s.c11 = [](double, double) { return Complex(1.0); };
  s.c22 = [](double, double) { return Complex(1.0); };
  CHECK_THROWS_AS(build_leaf_iti(g, s, Complex(0.0, 1.0)), Error);
}
