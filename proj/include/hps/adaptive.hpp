#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "hps/solver.hpp"

namespace hps {

/// Chebyshev-tail decay indicator S_tau of one leaf field (nc^2 tensor
/// values). Along every interior grid line the values are expanded in
/// Chebyshev polynomials; the indicator combines the top three coefficients
/// |c_{nc-2}| + |c_{nc-1} - c_{nc-3}| per line, maximized over both
/// directions. Complex fields use coefficient moduli.
template <typename T>
double leaf_indicator(const Vector<T>& values, int nc);

struct RefinementReport {
  std::vector<std::pair<int, double>> s_per_leaf;  // (leaf id, S_tau)
  double s_div = 0.0;                              // max S_tau / 4
  std::vector<int> marked;                         // leaves with S_tau > s_div
  int iteration = 0;
};

template <typename T>
RefinementReport mark_leaves(const Field<T>& field, const MeshTree& tree);

struct ConvergenceReport {
  std::vector<std::pair<int, double>> per_leaf;  // old leaf id -> E_rel
  double e_rel = 0.0;                            // mean over old leaves
  bool converged = false;
};

/// Relative convergence error between successive solves. Old leaves that
/// were refined compare against the new field interpolated back to the old
/// grid points.
template <typename T>
ConvergenceReport convergence_error(const Field<T>& older,
                                    const Field<T>& newer,
                                    const MeshTree& new_tree, double eps);

struct AdaptiveOptions {
  Rect domain;
  int nc = 16;
  double epsilon = 1e-5;
  int max_iterations = 20;
  int interp_max_depth = 30;
  int seed_depth = 0;  // uniform quadrant levels seeding the interpolation mesh
  BuildOptions build;
};

struct IterationLog {
  int iter = 0;
  int n_leaves = 0;
  int n_marked = 0;
  double s_div = 0.0;
  double e_rel = 0.0;
};

template <typename T>
struct AdaptiveResult {
  SolverTree<T> tree;
  Field<T> field;
  std::vector<IterationLog> log;
  bool converged = false;
  int n_initial_leaves = 0;
  double t_interp = 0.0;  // seconds, mesh generation
  double t_refine = 0.0;  // seconds, build + refinement loop
};

/// The full adaptive driver: interpolation mesh over the coefficient
/// functions and body load, level restriction, then solve / mark / split /
/// update until the relative convergence error drops below epsilon.
/// Non-convergence within the iteration cap is reported, not thrown.
template <typename T>
AdaptiveResult<T> adaptive_solve(
    const PdeSpec<T>& pde, Formulation form,
    const std::function<T(double, double)>& dirichlet_data,
    const std::function<T(double, double, double, double)>& incoming_data,
    T eta, const AdaptiveOptions& opts);

}  // namespace hps
