#include "hps/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "hps/errors.hpp"
#include "hps/spectral.hpp"

namespace hps {

std::pair<double, double> Panel::normal() const {
  switch (side) {
    case S: return {0.0, -1.0};
    case E: return {1.0, 0.0};
    case N: return {0.0, 1.0};
    case W: return {-1.0, 0.0};
  }
  return {0.0, 0.0};
}

std::pair<double, double> Panel::point(int k) const {
  return vertical() ? std::make_pair(line, pts[k]) : std::make_pair(pts[k], line);
}

MeshTree MeshTree::single(const Rect& domain, int nc) {
  if (!(domain.x0 < domain.x1 && domain.y0 < domain.y1))
    throw Error(ErrorCode::invalid_argument, "root_tree: empty rect");
  MeshTree t;
  t.nc_ = nc;
  BoxNode root;
  root.id = 1;
  root.rect = domain;
  root.rect.level = 0;
  t.nodes_.push_back(root);
  return t;
}

namespace {
int binary_depth(int id) {
  int d = 0;
  while (id > 1) {
    id >>= 1;
    ++d;
  }
  return d;
}
}  // namespace

MeshTree MeshTree::uniform(const Rect& domain, int nc, int quad_levels) {
  MeshTree t = single(domain, nc);
  if (quad_levels <= 0) return t;
  const int depth = 2 * quad_levels;
  const int n_internal = (1 << depth) - 1;
  const int n_total = (1 << (depth + 1)) - 1;
  t.nodes_.resize(n_total + 1);
  t.nodes_[1].id = 1;
  t.nodes_[1].rect = domain;
  t.nodes_[1].rect.level = 0;
  for (int tau = 1; tau <= n_internal; ++tau) {
    BoxNode& nd = t.nodes_[tau];
    const Rect r = nd.rect;
    int axis;
    if (binary_depth(tau) % 2 == 0)
      axis = (r.width() >= r.height()) ? 0 : 1;
    else
      axis = 1 - t.nodes_[nd.parent].split_axis;
    nd.split_axis = axis;
    nd.child_a = 2 * tau;
    nd.child_b = 2 * tau + 1;
    Rect ra = r, rb = r;
    if (axis == 0)
      ra.x1 = rb.x0 = r.xmid();
    else
      ra.y1 = rb.y0 = r.ymid();
    ra.level = rb.level = r.level + 1;
    t.nodes_[2 * tau] = BoxNode{2 * tau, ra, tau, 0, 0, -1};
    t.nodes_[2 * tau + 1] = BoxNode{2 * tau + 1, rb, tau, 0, 0, -1};
  }
  return t;
}

std::vector<int> MeshTree::leaf_ids() const {
  std::vector<int> out;
  for (int id = 1; id <= size(); ++id)
    if (nodes_[id].is_leaf()) out.push_back(id);
  return out;
}

int MeshTree::leaf_count() const {
  int n = 0;
  for (int id = 1; id <= size(); ++id)
    if (nodes_[id].is_leaf()) ++n;
  return n;
}

int MeshTree::append_child(int parent_id, const Rect& r) {
  BoxNode nd;
  nd.id = static_cast<int>(nodes_.size());
  nd.rect = r;
  nd.parent = parent_id;
  nodes_.push_back(nd);
  return nd.id;
}

void MeshTree::split_binary(int id) {
  // callers pass the axis via split_axis already set on the node
  BoxNode& nd = nodes_[id];
  const Rect r = nd.rect;
  Rect ra = r, rb = r;
  if (nd.split_axis == 0)
    ra.x1 = rb.x0 = r.xmid();
  else
    ra.y1 = rb.y0 = r.ymid();
  ra.level = rb.level = r.level + 1;
  const int a = append_child(id, ra);
  const int b = append_child(id, rb);
  nodes_[id].child_a = a;
  nodes_[id].child_b = b;
}

std::vector<int> MeshTree::split_leaf(int id) {
  if (id < 1 || id > size() || !nodes_[id].is_leaf())
    throw Error(ErrorCode::invalid_argument, "split_leaf: not a leaf", id);
  const Rect r = nodes_[id].rect;
  const int axis = (r.width() >= r.height()) ? 0 : 1;
  nodes_[id].split_axis = axis;
  split_binary(id);
  const int a = nodes_[id].child_a;
  const int b = nodes_[id].child_b;
  nodes_[a].split_axis = 1 - axis;
  nodes_[b].split_axis = 1 - axis;
  split_binary(a);
  split_binary(b);
  return {nodes_[a].child_a, nodes_[a].child_b, nodes_[b].child_a,
          nodes_[b].child_b};
}

namespace {

struct EdgeEntry {
  int id;
  double t0, t1;
  int qlevel;
};

void scan_line(const std::vector<EdgeEntry>& lo, const std::vector<EdgeEntry>& hi,
               std::set<int>& to_split) {
  for (const auto& p : lo) {
    for (const auto& q : hi) {
      if (std::max(p.t0, q.t0) >= std::min(p.t1, q.t1)) continue;
      if (p.qlevel <= q.qlevel - 2) to_split.insert(p.id);
      if (q.qlevel <= p.qlevel - 2) to_split.insert(q.id);
    }
  }
}

}  // namespace

std::vector<int> MeshTree::level_restrict() {
  std::vector<int> split_ids;
  while (true) {
    std::unordered_map<double, std::pair<std::vector<EdgeEntry>, std::vector<EdgeEntry>>> vlines, hlines;
    for (int id = 1; id <= size(); ++id) {
      const BoxNode& nd = nodes_[id];
      if (!nd.is_leaf()) continue;
      const Rect& r = nd.rect;
      const int ql = quad_level(id);
      vlines[r.x1].first.push_back({id, r.y0, r.y1, ql});
      vlines[r.x0].second.push_back({id, r.y0, r.y1, ql});
      hlines[r.y1].first.push_back({id, r.x0, r.x1, ql});
      hlines[r.y0].second.push_back({id, r.x0, r.x1, ql});
    }
    std::set<int> to_split;
    for (const auto& [line, sides] : vlines) scan_line(sides.first, sides.second, to_split);
    for (const auto& [line, sides] : hlines) scan_line(sides.first, sides.second, to_split);
    if (to_split.empty()) break;
    for (int id : to_split) {
      split_leaf(id);
      split_ids.push_back(id);
    }
  }
  return split_ids;
}

int MeshTree::find_leaf(double x, double y) const {
  if (!nodes_[1].rect.contains(x, y))
    throw Error(ErrorCode::invalid_argument, "find_leaf: point outside domain");
  int id = 1;
  while (!nodes_[id].is_leaf()) {
    const BoxNode& nd = nodes_[id];
    const Rect& ra = nodes_[nd.child_a].rect;
    const bool in_a = (nd.split_axis == 0) ? (x <= ra.x1) : (y <= ra.y1);
    id = in_a ? nd.child_a : nd.child_b;
  }
  return id;
}

std::vector<int> MeshTree::ancestors(int id) const {
  std::vector<int> out;
  int p = nodes_[id].parent;
  while (p != 0) {
    out.push_back(p);
    p = nodes_[p].parent;
  }
  return out;
}

std::vector<int> MeshTree::descendants(int id) const {
  std::vector<int> out;
  std::vector<int> stack{id};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    const BoxNode& nd = nodes_[cur];
    if (nd.is_leaf()) continue;
    for (int c : {nd.child_a, nd.child_b}) {
      out.push_back(c);
      stack.push_back(c);
    }
  }
  return out;
}

namespace {

std::vector<Panel> leaf_panels(const Rect& r, int nc) {
  const auto xs = spectral::cheb_nodes(nc, r.x0, r.x1).points;
  const auto ys = spectral::cheb_nodes(nc, r.y0, r.y1).points;
  std::vector<double> xi(xs.begin() + 1, xs.end() - 1);
  std::vector<double> yi(ys.begin() + 1, ys.end() - 1);
  std::vector<Panel> out;
  out.push_back({Panel::S, r.y0, r.x0, r.x1, xi});
  out.push_back({Panel::E, r.x1, r.y0, r.y1, yi});
  out.push_back({Panel::N, r.y1, r.x0, r.x1, xi});
  out.push_back({Panel::W, r.x0, r.y0, r.y1, yi});
  return out;
}

}  // namespace

bool panel_on_line(const Panel& p, int axis, double line) {
  return (axis == 0) == p.vertical() && p.line == line;
}

namespace {

bool on_interface(const Panel& p, int axis, double line) {
  return panel_on_line(p, axis, line);
}

}  // namespace

std::vector<Panel> MeshTree::boundary_panels(int id) const {
  const BoxNode& nd = nodes_[id];
  if (nd.is_leaf()) return leaf_panels(nd.rect, nc_);
  const auto pa = boundary_panels(nd.child_a);
  const auto pb = boundary_panels(nd.child_b);
  const double line = (nd.split_axis == 0) ? nodes_[nd.child_a].rect.x1
                                           : nodes_[nd.child_a].rect.y1;
  std::vector<Panel> out;
  for (const auto& p : pa)
    if (!on_interface(p, nd.split_axis, line)) out.push_back(p);
  for (const auto& p : pb)
    if (!on_interface(p, nd.split_axis, line)) out.push_back(p);
  return out;
}

InterfaceMaps interface_maps_from_panels(const std::vector<Panel>& pa,
                                         const Rect& ra,
                                         const std::vector<Panel>& pb,
                                         const Rect& rb, int tau) {
  int axis;
  if (ra.x1 == rb.x0 && ra.y0 == rb.y0 && ra.y1 == rb.y1)
    axis = 0;
  else if (ra.y1 == rb.y0 && ra.x0 == rb.x0 && ra.x1 == rb.x1)
    axis = 1;
  else
    throw Error(ErrorCode::corrupt_tree,
                "children are not edge-adjacent sibling boxes", tau);
  const double line = (axis == 0) ? ra.x1 : ra.y1;

  InterfaceMaps m;
  m.axis = axis;

  struct Tagged {
    Panel panel;
    int start;
  };
  auto classify = [&](const std::vector<Panel>& panels, std::vector<int>& off,
                      std::vector<int>& iface, std::vector<Panel>& ppanels) {
    std::vector<Tagged> on;
    int pos = 0;
    for (const auto& p : panels) {
      if (on_interface(p, axis, line))
        on.push_back({p, pos});
      else
        for (int k = 0; k < p.size(); ++k) off.push_back(pos + k);
      pos += p.size();
    }
    std::sort(on.begin(), on.end(),
              [](const Tagged& a, const Tagged& b) { return a.panel.t0 < b.panel.t0; });
    for (const auto& t : on) {
      for (int k = 0; k < t.panel.size(); ++k) iface.push_back(t.start + k);
      ppanels.push_back(t.panel);
    }
  };
  classify(pa, m.i1, m.i3a, m.panels3a);
  classify(pb, m.i2, m.i3b, m.panels3b);
  if (m.i3a.empty() || m.i3b.empty())
    throw Error(ErrorCode::corrupt_tree, "empty merge interface", tau);

  m.matching = m.panels3a.size() == m.panels3b.size();
  if (m.matching)
    for (size_t k = 0; k < m.panels3a.size(); ++k)
      if (m.panels3a[k].t0 != m.panels3b[k].t0 ||
          m.panels3a[k].t1 != m.panels3b[k].t1)
        m.matching = false;
  return m;
}

InterfaceMaps interface_maps(const MeshTree& tree, int tau) {
  const BoxNode& nd = tree.node(tau);
  if (nd.is_leaf())
    throw Error(ErrorCode::invalid_argument, "interface_maps: not a parent", tau);
  return interface_maps_from_panels(
      tree.boundary_panels(nd.child_a), tree.node(nd.child_a).rect,
      tree.boundary_panels(nd.child_b), tree.node(nd.child_b).rect, tau);
}

namespace {

Eigen::MatrixXcd sample_grid(const std::function<Complex(double, double)>& f,
                             const std::vector<double>& xs,
                             const std::vector<double>& ys) {
  Eigen::MatrixXcd m(xs.size(), ys.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t j = 0; j < ys.size(); ++j) {
      const Complex v = f(xs[i], ys[j]);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "non-finite sample at (" << xs[i] << ", " << ys[j] << ")";
        throw Error(ErrorCode::evaluation_error, os.str());
      }
      m(i, j) = v;
    }
  }
  return m;
}

bool needs_split(const std::function<Complex(double, double)>& f,
                 const Rect& r, int nc, double eps) {
  const auto xs = spectral::cheb_nodes(nc, r.x0, r.x1).points;
  const auto ys = spectral::cheb_nodes(nc, r.y0, r.y1).points;
  const Eigen::MatrixXcd parent = sample_grid(f, xs, ys);
  double resid2 = 0.0, kids2 = 0.0;
  const double xm = r.xmid(), ym = r.ymid();
  const double qx[2][2] = {{r.x0, xm}, {xm, r.x1}};
  const double qy[2][2] = {{r.y0, ym}, {ym, r.y1}};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const auto kx = spectral::cheb_nodes(nc, qx[a][0], qx[a][1]).points;
      const auto ky = spectral::cheb_nodes(nc, qy[b][0], qy[b][1]).points;
      const Eigen::MatrixXcd kids = sample_grid(f, kx, ky);
      const Eigen::MatrixXd lx = spectral::interp_matrix(xs, kx);
      const Eigen::MatrixXd ly = spectral::interp_matrix(ys, ky);
      const Eigen::MatrixXcd app = lx * parent * ly.transpose();
      resid2 += (kids - app).squaredNorm();
      kids2 += kids.squaredNorm();
    }
  }
  const double resid = std::sqrt(resid2);
  const double kidsn = std::sqrt(kids2);
  if (kidsn <= 1e-300) return resid > 1e-300;
  return resid / kidsn > eps;
}

}  // namespace

MeshTree adaptive_interp_mesh(
    const std::vector<std::function<Complex(double, double)>>& funcs,
    double eps, int nc, const Rect& domain, const InterpMeshOptions& opts) {
  if (!(eps > 0.0))
    throw Error(ErrorCode::invalid_argument, "adaptive_interp_mesh: eps <= 0");
  if (funcs.empty())
    throw Error(ErrorCode::invalid_argument, "adaptive_interp_mesh: no functions");
  MeshTree tree;
  if (opts.seed) {
    if (!(opts.seed->domain() == domain) || opts.seed->nc() != nc)
      throw Error(ErrorCode::invalid_argument,
                  "adaptive_interp_mesh: seed mesh domain/nc mismatch");
    tree = *opts.seed;
  } else {
    tree = MeshTree::single(domain, nc);
  }
  std::vector<int> work = tree.leaf_ids();
  while (!work.empty()) {
    const int id = work.back();
    work.pop_back();
    const Rect r = tree.node(id).rect;
    bool split = false;
    for (const auto& f : funcs) {
      if (needs_split(f, r, nc, eps)) {
        split = true;
        break;
      }
    }
    if (!split) continue;
    if (tree.quad_level(id) >= opts.max_depth)
      throw Error(ErrorCode::depth_exceeded,
                  "adaptive_interp_mesh: refinement exceeded max_depth", id,
                  tree.node(id).rect.level);
    for (int kid : tree.split_leaf(id)) work.push_back(kid);
  }
  return tree;
}

void export_mesh(const MeshTree& tree, std::ostream& os) {
  os << "# id, x0, x1, y0, y1, level\n";
  char buf[160];
  for (int id = 1; id <= tree.size(); ++id) {
    const BoxNode& nd = tree.node(id);
    if (!nd.is_leaf()) continue;
    std::snprintf(buf, sizeof(buf), "%d, %.17g, %.17g, %.17g, %.17g, %d\n",
                  nd.id, nd.rect.x0, nd.rect.x1, nd.rect.y0, nd.rect.y1,
                  nd.rect.level);
    os << buf;
  }
}

void export_mesh_file(const MeshTree& tree, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::io_error, "cannot write " + path);
  export_mesh(tree, os);
}

std::vector<MeshRecord> import_mesh(std::istream& is) {
  std::vector<MeshRecord> out;
  std::string lineS;
  while (std::getline(is, lineS)) {
    if (lineS.empty() || lineS[0] == '#') continue;
    std::replace(lineS.begin(), lineS.end(), ',', ' ');
    std::istringstream ls(lineS);
    MeshRecord rec{};
    if (!(ls >> rec.id >> rec.rect.x0 >> rec.rect.x1 >> rec.rect.y0 >>
          rec.rect.y1 >> rec.rect.level))
      throw Error(ErrorCode::io_error, "malformed mesh record: " + lineS);
    out.push_back(rec);
  }
  return out;
}

}  // namespace hps
