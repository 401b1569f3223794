#pragma once

#include <optional>
#include <string>

#include "hps/field.hpp"
#include "hps/leaf.hpp"

namespace hps {

struct ProblemOverrides {
  std::optional<double> alpha;
  std::optional<double> omega;
  std::optional<Complex> eta;
};

/// One of the five benchmark problems. Real elliptic problems carry pde_d
/// with Dirichlet data; Helmholtz problems carry pde_z with incoming
/// impedance data t = (d/dnu + i eta) u_inc for the incident wave
/// u_inc = exp(i omega d.x), d = (1, 0), plus Dirichlet data from u_inc for
/// DtN runs.
struct BenchmarkProblem {
  std::string name;
  Rect domain;
  Formulation default_form = Formulation::DtN;
  bool complex_valued = false;

  PdeSpec<double> pde_d;
  PdeSpec<Complex> pde_z;
  std::function<double(double, double)> dirichlet_d;
  std::function<Complex(double, double)> dirichlet_z;
  std::function<Complex(double, double, double, double)> incoming;
  std::function<double(double, double)> exact_d;
  std::function<Complex(double, double)> exact_z;

  double alpha = 0.0;
  double omega = 0.0;
  Complex eta = 0.0;

  /// Problems whose manufactured data is singular somewhere on the closed
  /// domain cap the interpolation-mesh depth (see locally_oscillatory).
  int interp_max_depth = 30;
  int default_seed_depth = 0;

  bool has_exact() const {
    return complex_valued ? static_cast<bool>(exact_z)
                          : static_cast<bool>(exact_d);
  }
};

/// Names: boundary_layer, locally_oscillatory, wave_front,
/// helmholtz_constant, helmholtz_variable.
BenchmarkProblem catalog(const std::string& name,
                         const ProblemOverrides& overrides = {});

/// Mean over leaves of the per-leaf relative l2 error against an exact
/// solution, over the leaf's discretization points (corners excluded).
template <typename T>
double relative_error(const Field<T>& field,
                      const std::function<T(double, double)>& exact);

/// Same metric against a reference field on a finer mesh; the reference is
/// interpolated to this field's points.
template <typename T>
double relative_error(const Field<T>& field, const MeshTree& ref_tree,
                      const Field<T>& ref);

}  // namespace hps
