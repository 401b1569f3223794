#pragma once

#include "hps/mesh.hpp"
#include "hps/types.hpp"

namespace hps {

/// Operators stored at an internal tree node after merging its children.
/// psi maps parent-boundary data to the interface (DtN: solution values u3;
/// ItI: incoming data t3 on the alpha side); bop is the parent boundary
/// operator T or R. w_part / h_part carry the body-load particular data on
/// the interface / parent boundary.
template <typename T>
struct NodeOps {
  Formulation form = Formulation::DtN;
  Matrix<T> psi;
  Matrix<T> bop;
  Vector<T> w_part;
  Vector<T> h_part;
  /// Interface alignment for non-matching merges: maps alpha-side values to
  /// beta-side points (empty when the point sets match).
  Matrix<T> interp_down;
  /// ItI downward blocks: t3_beta = -(dn_a31 t1 + dn_a33 t3_alpha + ha3_down).
  Matrix<T> dn_a31, dn_a33;
  Vector<T> ha3_down;

  bool has_interp() const { return interp_down.size() > 0; }
};

/// Piecewise-panel barycentric interpolation between two panel partitions of
/// the same interface segment. Each target point is interpolated from the
/// source panel containing it; level restriction guarantees overlapping
/// panels differ by at most one refinement level (checked).
Eigen::MatrixXd panel_interp(const std::vector<Panel>& src,
                             const std::vector<Panel>& dst, int node_id = -1);

template <typename T>
NodeOps<T> merge_dtn_full(const Matrix<T>& ta, const Matrix<T>& tb,
                          const Vector<T>& ha, const Vector<T>& hb,
                          const InterfaceMaps& maps,
                          const Eigen::MatrixXd* l2t1,
                          const Eigen::MatrixXd* l1t2, int node_id = -1);

template <typename T>
NodeOps<T> merge_dtn(const Matrix<T>& ta, const Matrix<T>& tb,
                     const InterfaceMaps& maps, int node_id = -1);

template <typename T>
NodeOps<T> merge_dtn_nonuniform(const Matrix<T>& ta, const Matrix<T>& tb,
                                const InterfaceMaps& maps,
                                const Eigen::MatrixXd& l2t1,
                                const Eigen::MatrixXd& l1t2, int node_id = -1);

template <typename T>
NodeOps<T> merge_dtn_bodyload(const Matrix<T>& ta, const Matrix<T>& tb,
                              const Vector<T>& ha, const Vector<T>& hb,
                              const InterfaceMaps& maps, int node_id = -1);

NodeOps<Complex> merge_iti(const Matrix<Complex>& ra, const Matrix<Complex>& rb,
                           const Vector<Complex>& ha, const Vector<Complex>& hb,
                           const InterfaceMaps& maps,
                           const Eigen::MatrixXd* l2t1 = nullptr,
                           const Eigen::MatrixXd* l1t2 = nullptr,
                           int node_id = -1);

}  // namespace hps
