#include "hps/leaf.hpp"

#include "hps/errors.hpp"
#include "internal.hpp"

namespace hps {

std::vector<int> LeafGrid::active_indices() const {
  std::vector<int> act;
  act.reserve(nb() + ni());
  act.insert(act.end(), idx_boundary.begin(), idx_boundary.end());
  act.insert(act.end(), idx_interior.begin(), idx_interior.end());
  return act;
}

LeafGrid build_leaf_grid(const Rect& rect, int nc) {
  if (nc < 4) throw Error(ErrorCode::invalid_argument, "build_leaf_grid: nc < 4");
  LeafGrid g;
  g.rect = rect;
  g.nc = nc;
  g.xs = spectral::cheb_nodes(nc, rect.x0, rect.x1).points;
  g.ys = spectral::cheb_nodes(nc, rect.y0, rect.y1).points;

  g.idx_interior.reserve((nc - 2) * (nc - 2));
  for (int i = 1; i < nc - 1; ++i)
    for (int j = 1; j < nc - 1; ++j) g.idx_interior.push_back(i * nc + j);

  g.idx_boundary.reserve(4 * nc - 8);
  for (int i = 1; i < nc - 1; ++i) g.idx_boundary.push_back(i * nc);            // S
  for (int j = 1; j < nc - 1; ++j) g.idx_boundary.push_back((nc - 1) * nc + j); // E
  for (int i = 1; i < nc - 1; ++i) g.idx_boundary.push_back(i * nc + nc - 1);   // N
  for (int j = 1; j < nc - 1; ++j) g.idx_boundary.push_back(j);                 // W

  g.idx_corners = {0, nc - 1, (nc - 1) * nc, nc * nc - 1};
  return g;
}

template <typename T>
Matrix<T> assemble_operator(const LeafGrid& g, const PdeSpec<T>& pde) {
  const int nc = g.nc;
  const int n2 = nc * nc;
  const Eigen::MatrixXd dx =
      spectral::ref_diff_matrix(nc) * (2.0 / g.rect.width());
  const Eigen::MatrixXd dy =
      spectral::ref_diff_matrix(nc) * (2.0 / g.rect.height());
  const Eigen::MatrixXd d2x = dx * dx;
  const Eigen::MatrixXd d2y = dy * dy;

  Matrix<T> a = Matrix<T>::Zero(n2, n2);
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) {
      const int p = i * nc + j;
      const double x = g.xs[i];
      const double y = g.ys[j];
      const T v11 = pde.c11 ? pde.c11(x, y) : T(0);
      const T v12 = pde.c12 ? pde.c12(x, y) : T(0);
      const T v22 = pde.c22 ? pde.c22(x, y) : T(0);
      const T v1 = pde.c1 ? pde.c1(x, y) : T(0);
      const T v2 = pde.c2 ? pde.c2(x, y) : T(0);
      if (v11 != T(0) || v1 != T(0))
        for (int i2 = 0; i2 < nc; ++i2)
          a(p, i2 * nc + j) += -v11 * d2x(i, i2) + v1 * dx(i, i2);
      if (v22 != T(0) || v2 != T(0))
        for (int j2 = 0; j2 < nc; ++j2)
          a(p, i * nc + j2) += -v22 * d2y(j, j2) + v2 * dy(j, j2);
      if (v12 != T(0)) {
        const T s = T(-2) * v12;
        for (int i2 = 0; i2 < nc; ++i2)
          for (int j2 = 0; j2 < nc; ++j2)
            a(p, i2 * nc + j2) += s * dx(i, i2) * dy(j, j2);
      }
      if (pde.c0) a(p, p) += pde.c0(x, y);
    }
  }
  return a;
}

namespace {

Eigen::MatrixXd edge_derivative_matrix(const LeafGrid& g, double ss, double se,
                                       double sn, double sw) {
  const int nc = g.nc;
  const Eigen::MatrixXd dx =
      spectral::ref_diff_matrix(nc) * (2.0 / g.rect.width());
  const Eigen::MatrixXd dy =
      spectral::ref_diff_matrix(nc) * (2.0 / g.rect.height());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(g.nb(), nc * nc);
  int row = 0;
  for (int i = 1; i < nc - 1; ++i, ++row)  // S: du/dy at (i, 0)
    for (int j2 = 0; j2 < nc; ++j2) l(row, i * nc + j2) = ss * dy(0, j2);
  for (int j = 1; j < nc - 1; ++j, ++row)  // E: du/dx at (nc-1, j)
    for (int i2 = 0; i2 < nc; ++i2) l(row, i2 * nc + j) = se * dx(nc - 1, i2);
  for (int i = 1; i < nc - 1; ++i, ++row)  // N: du/dy at (i, nc-1)
    for (int j2 = 0; j2 < nc; ++j2) l(row, i * nc + j2) = sn * dy(nc - 1, j2);
  for (int j = 1; j < nc - 1; ++j, ++row)  // W: du/dx at (0, j)
    for (int i2 = 0; i2 < nc; ++i2) l(row, i2 * nc + j) = sw * dx(0, i2);
  return l;
}

}  // namespace

Eigen::MatrixXd flux_matrix(const LeafGrid& g) {
  return edge_derivative_matrix(g, 1.0, 1.0, 1.0, 1.0);
}

Eigen::MatrixXd outward_flux_matrix(const LeafGrid& g) {
  return edge_derivative_matrix(g, -1.0, 1.0, 1.0, -1.0);
}

template <typename T>
LeafOpsDtN<T> build_leaf_dtn(const LeafGrid& g, const PdeSpec<T>& pde,
                             int node_id) {
  const Matrix<T> a = assemble_operator(g, pde);
  const Matrix<T> aii = a(g.idx_interior, g.idx_interior);
  const Matrix<T> aib = a(g.idx_interior, g.idx_boundary);
  auto lu = detail::checked_lu<T>(aii, ErrorCode::leaf_factorization_failure,
                                  "interior collocation block is singular",
                                  node_id, g.rect.level, "leaf");
  const Eigen::MatrixXd l = flux_matrix(g);
  const Matrix<T> lb = l(Eigen::all, g.idx_boundary).template cast<T>();
  const Matrix<T> li = l(Eigen::all, g.idx_interior).template cast<T>();

  LeafOpsDtN<T> ops;
  ops.psi = -lu.solve(aib);
  ops.dtn = lb + li * ops.psi;
  if (pde.has_body_load()) {
    Vector<T> gi(g.ni());
    for (int k = 0; k < g.ni(); ++k) {
      auto [x, y] = g.point(g.idx_interior[k]);
      gi[k] = pde.body_load(x, y);
    }
    ops.z_part = lu.solve(gi);
    ops.h_part = li * ops.z_part;
  } else {
    ops.z_part = Vector<T>::Zero(g.ni());
    ops.h_part = Vector<T>::Zero(g.nb());
  }
  return ops;
}

LeafOpsItI build_leaf_iti(const LeafGrid& g, const PdeSpec<Complex>& pde,
                          Complex eta, int node_id) {
  if (eta.real() == 0.0)
    throw Error(ErrorCode::invalid_argument, "build_leaf_iti: Re(eta) == 0");
  const int nb = g.nb();
  const int ni = g.ni();
  const int nm = nb + ni;
  const auto act = g.active_indices();

  const Matrix<Complex> a = assemble_operator(g, pde);
  const Eigen::MatrixXd n = outward_flux_matrix(g);
  Matrix<Complex> f = n.cast<Complex>();
  Matrix<Complex> gout = n.cast<Complex>();
  const Complex ie(0.0, 1.0);
  for (int r = 0; r < nb; ++r) {
    f(r, g.idx_boundary[r]) += ie * eta;
    gout(r, g.idx_boundary[r]) -= ie * eta;
  }

  Matrix<Complex> b(nm, nm);
  b.topRows(nb) = f(Eigen::all, act);
  b.bottomRows(ni) = a(g.idx_interior, act);
  auto lu = detail::checked_lu<Complex>(
      b, ErrorCode::leaf_factorization_failure,
      "impedance leaf system is singular", node_id, g.rect.level, "leaf");

  Matrix<Complex> rhs = Matrix<Complex>::Zero(nm, nb);
  rhs.topRows(nb).setIdentity();
  const Matrix<Complex> psi_full = lu.solve(rhs);
  const Matrix<Complex> gsub = gout(Eigen::all, act);

  LeafOpsItI ops;
  ops.eta = eta;
  ops.psi = psi_full.bottomRows(ni);
  ops.iti = gsub * psi_full;
  if (pde.has_body_load()) {
    Vector<Complex> v = Vector<Complex>::Zero(nm);
    for (int k = 0; k < ni; ++k) {
      auto [x, y] = g.point(g.idx_interior[k]);
      v[nb + k] = pde.body_load(x, y);
    }
    const Vector<Complex> zfull = lu.solve(v);
    ops.z_part = zfull.tail(ni);
    ops.h_part = gsub * zfull;
  } else {
    ops.z_part = Vector<Complex>::Zero(ni);
    ops.h_part = Vector<Complex>::Zero(nb);
  }
  return ops;
}

template Matrix<double> assemble_operator(const LeafGrid&,
                                          const PdeSpec<double>&);
template Matrix<Complex> assemble_operator(const LeafGrid&,
                                           const PdeSpec<Complex>&);
template LeafOpsDtN<double> build_leaf_dtn(const LeafGrid&,
                                           const PdeSpec<double>&, int);
template LeafOpsDtN<Complex> build_leaf_dtn(const LeafGrid&,
                                            const PdeSpec<Complex>&, int);

}  // namespace hps
