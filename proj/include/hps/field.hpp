#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hps/mesh.hpp"
#include "hps/types.hpp"

namespace hps {

/// Solution values on one leaf's nc x nc tensor grid, row-major over
/// (x_i, y_j). Corner entries are filled from the edge interpolants for
/// output only; they never enter any operator.
template <typename T>
struct LeafBlock {
  int leaf_id = 0;
  int nc = 0;
  Rect rect;
  Vector<T> values;
};

template <typename T>
struct Field {
  std::vector<LeafBlock<T>> blocks;  // ascending leaf id

  const LeafBlock<T>* find(int leaf_id) const;
  int leaf_count() const { return static_cast<int>(blocks.size()); }
};

/// Tensor barycentric evaluation of a block's interpolant at (x, y).
template <typename T>
T eval_block(const LeafBlock<T>& block, double x, double y);

/// Evaluate the field at (x, y) using the deepest leaf containing the point.
template <typename T>
T eval_field(const MeshTree& tree, const Field<T>& field, double x, double y);

/// Per-leaf blocks: "leaf_id, n_c, x0, x1, y0, y1" header line, then nc^2
/// values in row-major tensor order (one per line; complex as "re,im").
template <typename T>
void export_field(const Field<T>& field, std::ostream& os);
template <typename T>
void export_field_file(const Field<T>& field, const std::string& path);
template <typename T>
Field<T> import_field(std::istream& is);

}  // namespace hps
