#include "hps/merge.hpp"

#include <cmath>

#include "hps/errors.hpp"
#include "hps/spectral.hpp"
#include "internal.hpp"

namespace hps {

Eigen::MatrixXd panel_interp(const std::vector<Panel>& src,
                             const std::vector<Panel>& dst, int node_id) {
  int ns = 0, nd = 0;
  std::vector<int> soff(src.size());
  for (size_t k = 0; k < src.size(); ++k) {
    soff[k] = ns;
    ns += src[k].size();
  }
  for (const auto& p : dst) nd += p.size();

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nd, ns);
  int row = 0;
  for (const auto& dp : dst) {
    for (int k = 0; k < dp.size(); ++k, ++row) {
      const double t = dp.pts[k];
      int hit = -1;
      for (size_t s = 0; s < src.size(); ++s) {
        if (t >= src[s].t0 && t <= src[s].t1) {
          hit = static_cast<int>(s);
          break;
        }
      }
      if (hit < 0)
        throw Error(ErrorCode::corrupt_tree,
                    "interface panel partitions do not cover each other",
                    node_id);
      const Panel& sp = src[hit];
      const double ratio = (sp.t1 - sp.t0) / (dp.t1 - dp.t0);
      if (ratio > 2.0001 || ratio < 0.4999)
        throw Error(ErrorCode::precondition_violation,
                    "interface level gap exceeds one (mesh not level-restricted)",
                    node_id);
      const Eigen::MatrixXd l = spectral::interp_matrix(sp.pts, {t});
      m.block(row, soff[hit], 1, sp.size()) = l;
    }
  }
  return m;
}

namespace {

template <typename T>
Vector<T> gather(const Vector<T>& v, const std::vector<int>& idx) {
  Vector<T> out(idx.size());
  for (size_t k = 0; k < idx.size(); ++k) out[k] = v[idx[k]];
  return out;
}

}  // namespace

template <typename T>
NodeOps<T> merge_dtn_full(const Matrix<T>& ta, const Matrix<T>& tb,
                          const Vector<T>& ha, const Vector<T>& hb,
                          const InterfaceMaps& maps,
                          const Eigen::MatrixXd* l2t1,
                          const Eigen::MatrixXd* l1t2, int node_id) {
  const auto& i1 = maps.i1;
  const auto& i2 = maps.i2;
  const int n1 = static_cast<int>(i1.size());
  const int n2 = static_cast<int>(i2.size());
  const int n3 = static_cast<int>(maps.i3a.size());

  const Matrix<T> ta33 = ta(maps.i3a, maps.i3a);
  const Matrix<T> ta31 = ta(maps.i3a, i1);
  const Matrix<T> ta13 = ta(i1, maps.i3a);
  Matrix<T> tb33 = tb(maps.i3b, maps.i3b);
  Matrix<T> tb32 = tb(maps.i3b, i2);
  Matrix<T> tb23 = tb(i2, maps.i3b);

  Vector<T> ha3 = gather(ha, maps.i3a);
  Vector<T> hb3 = gather(hb, maps.i3b);

  const bool interp = l2t1 != nullptr;
  Matrix<T> l12;
  if (interp) {
    const Matrix<T> l21 = l2t1->cast<T>();
    l12 = l1t2->cast<T>();
    tb33 = l21 * tb33 * l12;
    tb32 = l21 * tb32;
    tb23 = tb23 * l12;
    hb3 = l21 * hb3;
  }

  auto lu = detail::checked_lu<T>(
      ta33 - tb33, ErrorCode::merge_failure,
      "interface Schur complement is singular (for Helmholtz this can signal "
      "an artificial resonance; consider the ItI formulation)",
      node_id, -1, "merge");

  NodeOps<T> ops;
  ops.form = Formulation::DtN;

  Matrix<T> rhs(n3, n1 + n2);
  rhs.leftCols(n1) = -ta31;
  rhs.rightCols(n2) = tb32;
  ops.psi = lu.solve(rhs);

  Matrix<T> bcol(n1 + n2, n3);
  bcol.topRows(n1) = ta13;
  bcol.bottomRows(n2) = tb23;

  ops.bop = Matrix<T>::Zero(n1 + n2, n1 + n2);
  ops.bop.topLeftCorner(n1, n1) = ta(i1, i1);
  ops.bop.bottomRightCorner(n2, n2) = tb(i2, i2);
  ops.bop += bcol * ops.psi;

  ops.w_part = lu.solve((hb3 - ha3).eval());
  ops.h_part = Vector<T>(n1 + n2);
  ops.h_part.head(n1) = gather(ha, i1);
  ops.h_part.tail(n2) = gather(hb, i2);
  ops.h_part += bcol * ops.w_part;

  if (interp) ops.interp_down = l12;
  return ops;
}

template <typename T>
NodeOps<T> merge_dtn(const Matrix<T>& ta, const Matrix<T>& tb,
                     const InterfaceMaps& maps, int node_id) {
  const Vector<T> ha = Vector<T>::Zero(ta.rows());
  const Vector<T> hb = Vector<T>::Zero(tb.rows());
  return merge_dtn_full(ta, tb, ha, hb, maps, nullptr, nullptr, node_id);
}

template <typename T>
NodeOps<T> merge_dtn_nonuniform(const Matrix<T>& ta, const Matrix<T>& tb,
                                const InterfaceMaps& maps,
                                const Eigen::MatrixXd& l2t1,
                                const Eigen::MatrixXd& l1t2, int node_id) {
  const Vector<T> ha = Vector<T>::Zero(ta.rows());
  const Vector<T> hb = Vector<T>::Zero(tb.rows());
  return merge_dtn_full(ta, tb, ha, hb, maps, &l2t1, &l1t2, node_id);
}

template <typename T>
NodeOps<T> merge_dtn_bodyload(const Matrix<T>& ta, const Matrix<T>& tb,
                              const Vector<T>& ha, const Vector<T>& hb,
                              const InterfaceMaps& maps, int node_id) {
  return merge_dtn_full(ta, tb, ha, hb, maps, nullptr, nullptr, node_id);
}

NodeOps<Complex> merge_iti(const Matrix<Complex>& ra, const Matrix<Complex>& rb,
                           const Vector<Complex>& ha, const Vector<Complex>& hb,
                           const InterfaceMaps& maps,
                           const Eigen::MatrixXd* l2t1,
                           const Eigen::MatrixXd* l1t2, int node_id) {
  using M = Matrix<Complex>;
  using V = Vector<Complex>;
  const auto& i1 = maps.i1;
  const auto& i2 = maps.i2;
  const int n1 = static_cast<int>(i1.size());
  const int n2 = static_cast<int>(i2.size());
  const int n3a = static_cast<int>(maps.i3a.size());

  const M ra33 = ra(maps.i3a, maps.i3a);
  const M ra31 = ra(maps.i3a, i1);
  const M ra13 = ra(i1, maps.i3a);
  M rb33 = rb(maps.i3b, maps.i3b);
  M rb32 = rb(maps.i3b, i2);
  M rb23 = rb(i2, maps.i3b);
  const V ha3 = gather(ha, maps.i3a);
  V hb3 = gather(hb, maps.i3b);

  const bool interp = l2t1 != nullptr;
  M l12;
  if (interp) {
    const M l21 = l2t1->cast<Complex>();
    l12 = l1t2->cast<Complex>();
    rb33 = l21 * rb33 * l12;
    rb32 = l21 * rb32;
    rb23 = rb23 * l12;
    hb3 = l21 * hb3;
  }

  M w = M::Identity(n3a, n3a) - rb33 * ra33;
  auto lu = detail::checked_lu<Complex>(
      w, ErrorCode::merge_failure, "impedance interface operator is singular",
      node_id, -1, "merge");

  NodeOps<Complex> ops;
  ops.form = Formulation::ItI;

  M rhs(n3a, n1 + n2);
  rhs.leftCols(n1) = rb33 * ra31;
  rhs.rightCols(n2) = -rb32;
  ops.psi = lu.solve(rhs);
  ops.w_part = lu.solve((rb33 * ha3 - hb3).eval());

  ops.bop = M::Zero(n1 + n2, n1 + n2);
  ops.bop.topLeftCorner(n1, n1) = ra(i1, i1);
  ops.bop.bottomRightCorner(n2, n2) = rb(i2, i2);
  ops.bop.topRows(n1) += ra13 * ops.psi;
  ops.bop.bottomRows(n2) -= (rb23 * ra33) * ops.psi;
  ops.bop.bottomLeftCorner(n2, n1) -= rb23 * ra31;

  ops.h_part = V(n1 + n2);
  ops.h_part.head(n1) = gather(ha, i1) + ra13 * ops.w_part;
  ops.h_part.tail(n2) = gather(hb, i2) - rb23 * (ra33 * ops.w_part + ha3);

  if (interp) {
    ops.interp_down = l12;
    ops.dn_a31 = l12 * ra31;
    ops.dn_a33 = l12 * ra33;
    ops.ha3_down = l12 * ha3;
  } else {
    ops.dn_a31 = ra31;
    ops.dn_a33 = ra33;
    ops.ha3_down = ha3;
  }
  return ops;
}

template NodeOps<double> merge_dtn_full(const Matrix<double>&,
                                        const Matrix<double>&,
                                        const Vector<double>&,
                                        const Vector<double>&,
                                        const InterfaceMaps&,
                                        const Eigen::MatrixXd*,
                                        const Eigen::MatrixXd*, int);
template NodeOps<Complex> merge_dtn_full(const Matrix<Complex>&,
                                         const Matrix<Complex>&,
                                         const Vector<Complex>&,
                                         const Vector<Complex>&,
                                         const InterfaceMaps&,
                                         const Eigen::MatrixXd*,
                                         const Eigen::MatrixXd*, int);
template NodeOps<double> merge_dtn(const Matrix<double>&, const Matrix<double>&,
                                   const InterfaceMaps&, int);
template NodeOps<Complex> merge_dtn(const Matrix<Complex>&,
                                    const Matrix<Complex>&,
                                    const InterfaceMaps&, int);
template NodeOps<double> merge_dtn_nonuniform(const Matrix<double>&,
                                              const Matrix<double>&,
                                              const InterfaceMaps&,
                                              const Eigen::MatrixXd&,
                                              const Eigen::MatrixXd&, int);
template NodeOps<Complex> merge_dtn_nonuniform(const Matrix<Complex>&,
                                               const Matrix<Complex>&,
                                               const InterfaceMaps&,
                                               const Eigen::MatrixXd&,
                                               const Eigen::MatrixXd&, int);
template NodeOps<double> merge_dtn_bodyload(const Matrix<double>&,
                                            const Matrix<double>&,
                                            const Vector<double>&,
                                            const Vector<double>&,
                                            const InterfaceMaps&, int);
template NodeOps<Complex> merge_dtn_bodyload(const Matrix<Complex>&,
                                             const Matrix<Complex>&,
                                             const Vector<Complex>&,
                                             const Vector<Complex>&,
                                             const InterfaceMaps&, int);

}  // namespace hps
