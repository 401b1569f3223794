#include "hps/adaptive.hpp"

#include <chrono>
#include <cmath>

#include "hps/errors.hpp"
#include "hps/spectral.hpp"

namespace hps {

namespace {

Eigen::VectorXd apply_real(const Eigen::MatrixXd& m, const Eigen::VectorXd& v) {
  return m * v;
}

Eigen::VectorXcd apply_real(const Eigen::MatrixXd& m, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out(m.rows());
  out.real() = m * v.real();
  out.imag() = m * v.imag();
  return out;
}

}  // namespace

template <typename T>
double leaf_indicator(const Vector<T>& values, int nc) {
  if (values.size() != nc * nc)
    throw Error(ErrorCode::invalid_argument, "leaf_indicator: size mismatch");
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (!std::isfinite(std::abs(values[k])))
      throw Error(ErrorCode::invalid_argument,
                  "leaf_indicator: non-finite field value");
  }
  const Eigen::MatrixXd& m = spectral::cheb_coeff_matrix(nc);
  Vector<T> line(nc);
  double sy = 0.0, sx = 0.0;
  for (int j = 1; j <= nc - 2; ++j) {  // y-expansions along x = x_j
    for (int k = 0; k < nc; ++k) line[k] = values[j * nc + k];
    const Vector<T> c = apply_real(m, line);
    sy = std::max(sy, std::abs(c[nc - 2]) + std::abs(c[nc - 1] - c[nc - 3]));
  }
  for (int j = 1; j <= nc - 2; ++j) {  // x-expansions along y = y_j
    for (int k = 0; k < nc; ++k) line[k] = values[k * nc + j];
    const Vector<T> c = apply_real(m, line);
    sx = std::max(sx, std::abs(c[nc - 2]) + std::abs(c[nc - 1] - c[nc - 3]));
  }
  return std::max(sx, sy);
}

template <typename T>
RefinementReport mark_leaves(const Field<T>& field, const MeshTree& tree) {
  if (field.blocks.empty() || tree.leaf_count() == 0)
    throw Error(ErrorCode::invalid_argument, "mark_leaves: empty field or tree");
  RefinementReport rep;
  rep.s_per_leaf.reserve(field.blocks.size());
  double smax = 0.0;
  for (const auto& b : field.blocks) {
    const double s = leaf_indicator(b.values, b.nc);
    rep.s_per_leaf.emplace_back(b.leaf_id, s);
    smax = std::max(smax, s);
  }
  rep.s_div = 0.25 * smax;
  for (const auto& [id, s] : rep.s_per_leaf)
    if (s > rep.s_div) rep.marked.push_back(id);
  return rep;
}

namespace {

/// Active (non-corner) point list of a block's tensor grid.
template <typename T>
void gather_active(const LeafBlock<T>& b, std::vector<int>& idx,
                   std::vector<std::pair<double, double>>& pts) {
  const int nc = b.nc;
  const auto xs = spectral::cheb_nodes(nc, b.rect.x0, b.rect.x1).points;
  const auto ys = spectral::cheb_nodes(nc, b.rect.y0, b.rect.y1).points;
  idx.clear();
  pts.clear();
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) {
      const bool corner = (i == 0 || i == nc - 1) && (j == 0 || j == nc - 1);
      if (corner) continue;
      idx.push_back(i * nc + j);
      pts.emplace_back(xs[i], ys[j]);
    }
  }
}

}  // namespace

template <typename T>
ConvergenceReport convergence_error(const Field<T>& older,
                                    const Field<T>& newer,
                                    const MeshTree& new_tree, double eps) {
  ConvergenceReport rep;
  std::vector<int> idx;
  std::vector<std::pair<double, double>> pts;
  double sum = 0.0;
  for (const auto& ob : older.blocks) {
    const LeafBlock<T>* nb = newer.find(ob.leaf_id);
    double num = 0.0, den = 0.0;
    if (nb && nb->rect == ob.rect) {
      gather_active(ob, idx, pts);
      for (int k : idx) {
        num += std::norm(Complex(ob.values[k]) - Complex(nb->values[k]));
        den += std::norm(Complex(ob.values[k]) + Complex(nb->values[k]));
      }
    } else {
      gather_active(ob, idx, pts);
      for (size_t k = 0; k < idx.size(); ++k) {
        const T vo = ob.values[idx[k]];
        const T vn = eval_field(new_tree, newer, pts[k].first, pts[k].second);
        num += std::norm(Complex(vo) - Complex(vn));
        den += std::norm(Complex(vo) + Complex(vn));
      }
    }
    num = std::sqrt(num);
    den = std::sqrt(den);
    double e;
    if (den < 1e-300) {
      if (num > 1e-300)
        throw Error(ErrorCode::degenerate_field,
                    "convergence denominator vanished on leaf", ob.leaf_id);
      e = 0.0;
    } else {
      e = num / den;
    }
    rep.per_leaf.emplace_back(ob.leaf_id, e);
    sum += e;
  }
  rep.e_rel = older.blocks.empty() ? 0.0 : sum / older.blocks.size();
  rep.converged = rep.e_rel <= eps;
  return rep;
}

template <typename T>
AdaptiveResult<T> adaptive_solve(
    const PdeSpec<T>& pde, Formulation form,
    const std::function<T(double, double)>& dirichlet_data,
    const std::function<T(double, double, double, double)>& incoming_data,
    T eta, const AdaptiveOptions& opts) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  // Step 1: mesh capturing the coefficient functions and body load.
  std::vector<std::function<Complex(double, double)>> funcs;
  for (const auto& fn :
       {pde.c11, pde.c12, pde.c22, pde.c1, pde.c2, pde.c0, pde.body_load}) {
    if (!fn) continue;
    funcs.push_back([fn](double x, double y) { return Complex(fn(x, y)); });
  }
  if (funcs.empty())
    funcs.push_back([](double, double) { return Complex(0.0); });
  InterpMeshOptions iopts;
  iopts.max_depth = opts.interp_max_depth;
  if (opts.seed_depth > 0)
    iopts.seed = MeshTree::uniform(opts.domain, opts.nc, opts.seed_depth);
  MeshTree mesh =
      adaptive_interp_mesh(funcs, opts.epsilon, opts.nc, opts.domain, iopts);
  mesh.level_restrict();

  AdaptiveResult<T> result{
      SolverTree<T>(std::move(mesh), pde, form, eta), {}, {}, false, 0, 0.0, 0.0};
  result.n_initial_leaves = result.tree.mesh().leaf_count();
  result.t_interp = std::chrono::duration<double>(clock::now() - t0).count();

  // Step 2: initial solver and solve.
  const auto t1 = clock::now();
  BuildOptions bopts = opts.build;
  bopts.retain_boundary_ops = true;  // incremental updates need the T/R ops
  result.tree.build(bopts);
  auto solve_once = [&]() {
    return form == Formulation::DtN
               ? result.tree.solve_dirichlet(dirichlet_data)
               : result.tree.solve_impedance(incoming_data);
  };
  Field<T> u_old = solve_once();

  // Steps 3-7: mark, split, update, check convergence.
  for (int it = 1; it <= opts.max_iterations; ++it) {
    RefinementReport marks = mark_leaves(u_old, result.tree.mesh());
    marks.iteration = it;
    if (marks.marked.empty()) {
      result.log.push_back(
          {it, result.tree.mesh().leaf_count(), 0, marks.s_div, 0.0});
      result.converged = true;
      break;
    }
    std::vector<int> refined = marks.marked;
    for (int id : marks.marked) result.tree.mesh().split_leaf(id);
    for (int id : result.tree.mesh().level_restrict()) refined.push_back(id);
    result.tree.update_after_refinement(refined);
    Field<T> u_new = solve_once();
    const ConvergenceReport conv =
        convergence_error(u_old, u_new, result.tree.mesh(), opts.epsilon);
    result.log.push_back({it, result.tree.mesh().leaf_count(),
                          static_cast<int>(marks.marked.size()), marks.s_div,
                          conv.e_rel});
    u_old = std::move(u_new);
    if (conv.converged) {
      result.converged = true;
      break;
    }
  }
  result.field = std::move(u_old);
  result.t_refine = std::chrono::duration<double>(clock::now() - t1).count();
  return result;
}

template double leaf_indicator(const Vector<double>&, int);
template double leaf_indicator(const Vector<Complex>&, int);
template RefinementReport mark_leaves(const Field<double>&, const MeshTree&);
template RefinementReport mark_leaves(const Field<Complex>&, const MeshTree&);
template ConvergenceReport convergence_error(const Field<double>&,
                                             const Field<double>&,
                                             const MeshTree&, double);
template ConvergenceReport convergence_error(const Field<Complex>&,
                                             const Field<Complex>&,
                                             const MeshTree&, double);
template AdaptiveResult<double> adaptive_solve(
    const PdeSpec<double>&, Formulation,
    const std::function<double(double, double)>&,
    const std::function<double(double, double, double, double)>&, double,
    const AdaptiveOptions&);
template AdaptiveResult<Complex> adaptive_solve(
    const PdeSpec<Complex>&, Formulation,
    const std::function<Complex(double, double)>&,
    const std::function<Complex(double, double, double, double)>&, Complex,
    const AdaptiveOptions&);

}  // namespace hps
