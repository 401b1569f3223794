#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hps/field.hpp"
#include "hps/leaf.hpp"
#include "hps/merge.hpp"
#include "hps/mesh.hpp"

namespace hps {

struct BuildOptions {
  /// Keep every node's boundary operator (T or R) so ancestors of locally
  /// refined leaves can be re-merged without rebuilding clean siblings.
  /// Disable to recover the memory profile of a pure one-shot factorization.
  bool retain_boundary_ops = true;
  int threads = 1;
};

struct BuildStats {
  double seconds = 0.0;
  std::uint64_t operator_bytes = 0;
};

struct MemoryReport {
  std::uint64_t total = 0;
  std::uint64_t leaf_bytes = 0;
  std::uint64_t parent_bytes = 0;
  std::vector<std::uint64_t> per_level;  // indexed by binary tree level
};

/// Hierarchical direct solver: leaf operators glued bottom-up by boundary
/// operator merges; solves are downward sweeps through the stored solution
/// operators. Body-load particular data is accumulated during the build so
/// repeated solves reuse the factorization.
template <typename T>
class SolverTree {
 public:
  SolverTree(MeshTree mesh, PdeSpec<T> pde, Formulation form, T eta = T(0));

  void build(const BuildOptions& opts = {});
  bool built() const { return built_; }

  MeshTree& mesh() { return mesh_; }
  const MeshTree& mesh() const { return mesh_; }
  Formulation formulation() const { return form_; }
  const PdeSpec<T>& pde() const { return pde_; }
  const BuildStats& build_stats() const { return stats_; }

  /// Dirichlet solve: root boundary values from f, one downward sweep.
  Field<T> solve_dirichlet(const std::function<T(double, double)>& f) const;

  /// Impedance solve: incoming data t(x, y, nx, ny) on the root boundary
  /// (nx, ny the outward normal), one downward sweep.
  Field<T> solve_impedance(
      const std::function<T(double, double, double, double)>& t) const;

  /// Rebuild only the subtrees under freshly split leaves and their
  /// ancestors; all other operators are reused. The mesh must already
  /// contain the splits (and be re-level-restricted).
  void update_after_refinement(const std::vector<int>& refined_leaf_ids);

  MemoryReport memory_report() const;

  // Introspection (tests, memory accounting)
  const Matrix<T>& node_psi(int id) const { return data_[id].psi; }
  const Matrix<T>& node_boundary_op(int id) const;
  const LeafGrid& leaf_grid(int id) const;
  const InterfaceMaps& node_maps(int id) const { return data_[id].maps; }

 private:
  struct NodeData {
    std::vector<Panel> panels;
    int nb = 0;
    InterfaceMaps maps;
    LeafGrid grid;
    Matrix<T> psi;
    Matrix<T> bop;
    Vector<T> z_part;  // leaf interior particular solution
    Vector<T> w_part;  // parent interface particular data
    Vector<T> h_part;  // outgoing particular data on the node boundary
    Matrix<T> interp_down, dn_a31, dn_a33;
    Vector<T> ha3_down;
    bool built = false;
  };

  void build_node(int id);
  void build_range(const std::vector<int>& ids);
  void fill_leaf_block(int id, const Vector<T>& boundary_values,
                       LeafBlock<T>& out) const;

  MeshTree mesh_;
  PdeSpec<T> pde_;
  Formulation form_;
  T eta_;
  BuildOptions opts_;
  BuildStats stats_;
  std::vector<NodeData> data_;
  bool built_ = false;
};

using SolverTreeD = SolverTree<double>;
using SolverTreeZ = SolverTree<Complex>;

}  // namespace hps
