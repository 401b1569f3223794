#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hps/types.hpp"

namespace hps {

/// One leaf-edge segment of nc-2 interior Chebyshev points. Boundary data
/// of every tree node is a concatenation of such panels.
struct Panel {
  enum Side { S = 0, E = 1, N = 2, W = 3 };
  Side side;                // edge of the owning leaf
  double line;              // the fixed coordinate (y for S/N, x for E/W)
  double t0, t1;            // tangential interval
  std::vector<double> pts;  // tangential coordinates, ascending

  bool vertical() const { return side == E || side == W; }
  int size() const { return static_cast<int>(pts.size()); }
  /// Outward normal of the owning leaf on this panel.
  std::pair<double, double> normal() const;
  std::pair<double, double> point(int k) const;
};

struct BoxNode {
  int id = 0;  // 1-based; parents precede children
  Rect rect;
  int parent = 0;
  int child_a = 0, child_b = 0;  // 0 = leaf
  int split_axis = -1;           // 0: vertical line (a left, b right); 1: horizontal (a bottom, b top)

  bool is_leaf() const { return child_a == 0; }
};

/// Index bookkeeping for merging two children. Indices address each child's
/// own boundary-point ordering; i3a/i3b are sorted ascending in the
/// tangential coordinate along the shared interface.
struct InterfaceMaps {
  std::vector<int> i1, i2;    // off-interface points of alpha / beta
  std::vector<int> i3a, i3b;  // interface points of alpha / beta
  std::vector<Panel> panels3a, panels3b;  // interface panel structure
  int axis = 0;               // 0: vertical interface; 1: horizontal
  bool matching = true;       // identical interface point sets
};

/// Binary merge tree over leaf boxes. Node ids are 1-based with the root at
/// 1; quadrant refinement of a leaf inserts two binary levels (two halves,
/// four quarter leaves).
class MeshTree {
 public:
  MeshTree() = default;

  static MeshTree single(const Rect& domain, int nc);
  /// Complete uniform tree with 4^quad_levels leaves; ids follow the
  /// breadth-first layout (children of tau are 2 tau and 2 tau + 1).
  static MeshTree uniform(const Rect& domain, int nc, int quad_levels);

  int nc() const { return nc_; }
  int size() const { return static_cast<int>(nodes_.size()) - 1; }
  const BoxNode& node(int id) const { return nodes_[id]; }
  BoxNode& node(int id) { return nodes_[id]; }
  const Rect& domain() const { return nodes_[1].rect; }

  std::vector<int> leaf_ids() const;
  int leaf_count() const;
  /// Quadrant refinement depth of a node (binary level / 2 for leaves).
  int quad_level(int id) const { return nodes_[id].rect.level / 2; }

  /// Split a leaf into four quarter leaves (two binary levels). Returns the
  /// ids of the four new leaves.
  std::vector<int> split_leaf(int id);

  /// Enforce 2:1 balance: edge-adjacent leaves differ by at most one
  /// quadrant level. Returns former-leaf ids that were split. Idempotent.
  std::vector<int> level_restrict();

  /// Deepest leaf whose closed rect contains (x, y); ties resolved toward
  /// child a.
  int find_leaf(double x, double y) const;

  /// Ancestors of id, nearest first, ending at the root.
  std::vector<int> ancestors(int id) const;
  /// All ids in the subtree rooted at id, excluding id itself.
  std::vector<int> descendants(int id) const;

  /// Boundary panels of a node: [S, E, N, W] edges for a leaf; for a parent
  /// the off-interface panels of child a then child b.
  std::vector<Panel> boundary_panels(int id) const;

  void validate(int id_a, int id_b) const;

 private:
  int append_child(int parent_id, const Rect& r);
  void split_binary(int id);

  std::vector<BoxNode> nodes_{BoxNode{}};  // slot 0 unused
  int nc_ = 0;
};

InterfaceMaps interface_maps(const MeshTree& tree, int tau);

/// True when the panel lies on the given split line (axis 0: vertical line).
bool panel_on_line(const Panel& p, int axis, double line);

/// Interface maps from explicit child panel lists (used by the solver so
/// panels are computed once, bottom-up).
InterfaceMaps interface_maps_from_panels(const std::vector<Panel>& pa,
                                         const Rect& ra,
                                         const std::vector<Panel>& pb,
                                         const Rect& rb, int tau);

struct InterpMeshOptions {
  int max_depth = 30;  // quadrant levels
  std::optional<MeshTree> seed;
};

/// Refine until every function is captured on every leaf: a leaf splits when
/// the relative error of interpolating any function from its nc^2 grid to
/// the four grandchild grids exceeds eps.
MeshTree adaptive_interp_mesh(
    const std::vector<std::function<Complex(double, double)>>& funcs,
    double eps, int nc, const Rect& domain, const InterpMeshOptions& opts = {});

/// One record per leaf: id, x0, x1, y0, y1, level.
void export_mesh(const MeshTree& tree, std::ostream& os);
void export_mesh_file(const MeshTree& tree, const std::string& path);

struct MeshRecord {
  int id;
  Rect rect;
};
std::vector<MeshRecord> import_mesh(std::istream& is);

}  // namespace hps
