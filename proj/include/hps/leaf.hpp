#pragma once

#include <array>
#include <functional>
#include <vector>

#include "hps/spectral.hpp"
#include "hps/types.hpp"

namespace hps {

/// Coefficient functions of the operator
///   A u = -c11 u_xx - 2 c12 u_xy - c22 u_yy + c1 u_x + c2 u_y + c0 u
/// plus the body load g. A null function means identically zero. For
/// Helmholtz problems c0(x) = -omega^2 c(x) with c11 = c22 = 1.
template <typename T>
struct PdeSpec {
  using Fn = std::function<T(double, double)>;
  Fn c11, c12, c22, c1, c2, c0;
  Fn body_load;

  bool has_body_load() const { return static_cast<bool>(body_load); }
};

/// Corner-free tensor grid on a leaf box. Tensor index p = i * nc + j maps
/// to the point (xs[i], ys[j]). Boundary index order is [S, E, N, W], each
/// edge ascending in its tangential coordinate; the four corners are
/// excluded from both boundary and interior sets.
struct LeafGrid {
  Rect rect;
  int nc = 0;
  std::vector<double> xs, ys;
  std::vector<int> idx_interior;  // (nc-2)^2, row-major over interior (i,j)
  std::vector<int> idx_boundary;  // 4 nc - 8
  std::array<int, 4> idx_corners{};

  int ni() const { return static_cast<int>(idx_interior.size()); }
  int nb() const { return static_cast<int>(idx_boundary.size()); }
  std::pair<double, double> point(int p) const {
    return {xs[p / nc], ys[p % nc]};
  }
  /// Indices [idx_boundary, idx_interior] — the n_c^2 - 4 active points.
  std::vector<int> active_indices() const;
};

LeafGrid build_leaf_grid(const Rect& rect, int nc);

/// Full collocation operator on the nc^2 tensor grid (corner columns kept;
/// leaf builders drop them by taking submatrices).
template <typename T>
Matrix<T> assemble_operator(const LeafGrid& grid, const PdeSpec<T>& pde);

/// Edge-derivative matrix in fixed coordinate directions: south/north rows
/// evaluate du/dy, east/west rows du/dx, no sign flips. Rows ordered like
/// idx_boundary.
Eigen::MatrixXd flux_matrix(const LeafGrid& grid);

/// Same rows with outward-normal orientation: -d/dy south, +d/dx east,
/// +d/dy north, -d/dx west.
Eigen::MatrixXd outward_flux_matrix(const LeafGrid& grid);

template <typename T>
struct LeafOpsDtN {
  Matrix<T> psi;     // ni x nb: boundary values -> interior values
  Matrix<T> dtn;     // nb x nb: boundary values -> fixed-direction fluxes
  Vector<T> z_part;  // ni: particular solution (zero Dirichlet data)
  Vector<T> h_part;  // nb: its outgoing flux
};

template <typename T>
LeafOpsDtN<T> build_leaf_dtn(const LeafGrid& grid, const PdeSpec<T>& pde,
                             int node_id = -1);

struct LeafOpsItI {
  Matrix<Complex> iti;     // nb x nb: incoming -> outgoing impedance data
  Matrix<Complex> psi;     // ni x nb: incoming data -> interior values
  Vector<Complex> z_part;  // ni
  Vector<Complex> h_part;  // nb: outgoing data of the particular solution
  Complex eta;
};

LeafOpsItI build_leaf_iti(const LeafGrid& grid, const PdeSpec<Complex>& pde,
                          Complex eta, int node_id = -1);

}  // namespace hps
