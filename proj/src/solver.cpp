#include "hps/solver.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>
#include <type_traits>

#include "hps/errors.hpp"
#include "internal.hpp"

namespace hps {

namespace {

template <typename Fn>
void parallel_for_ids(const std::vector<int>& ids, int threads, Fn&& fn) {
  if (threads <= 1 || ids.size() < 4) {
    for (int id : ids) fn(id);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  auto worker = [&] {
    while (true) {
      const size_t k = next.fetch_add(1);
      if (k >= ids.size()) break;
      try {
        fn(ids[k]);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mutex);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int extra = std::min<int>(threads, static_cast<int>(ids.size())) - 1;
  pool.reserve(extra);
  for (int t = 0; t < extra; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

template <typename T>
std::uint64_t matrix_bytes(const Matrix<T>& m) {
  return static_cast<std::uint64_t>(m.size()) * sizeof(T);
}

}  // namespace

template <typename T>
SolverTree<T>::SolverTree(MeshTree mesh, PdeSpec<T> pde, Formulation form,
                          T eta)
    : mesh_(std::move(mesh)), pde_(std::move(pde)), form_(form), eta_(eta) {
  if (form_ == Formulation::ItI && !std::is_same_v<T, Complex>)
    throw Error(ErrorCode::invalid_argument,
                "ItI formulation requires complex scalars");
}

template <typename T>
void SolverTree<T>::build_node(int id) {
  const BoxNode& nd = mesh_.node(id);
  NodeData d;
  if (nd.is_leaf()) {
    d.grid = build_leaf_grid(nd.rect, mesh_.nc());
    d.panels = mesh_.boundary_panels(id);
    d.nb = d.grid.nb();
    if (form_ == Formulation::DtN) {
      auto ops = build_leaf_dtn(d.grid, pde_, id);
      d.psi = std::move(ops.psi);
      d.bop = std::move(ops.dtn);
      d.z_part = std::move(ops.z_part);
      d.h_part = std::move(ops.h_part);
    } else {
      if constexpr (std::is_same_v<T, Complex>) {
        auto ops = build_leaf_iti(d.grid, pde_, eta_, id);
        d.psi = std::move(ops.psi);
        d.bop = std::move(ops.iti);
        d.z_part = std::move(ops.z_part);
        d.h_part = std::move(ops.h_part);
      }
    }
  } else {
    NodeData& da = data_[nd.child_a];
    NodeData& db = data_[nd.child_b];
    if (!da.built || !db.built)
      throw Error(ErrorCode::corrupt_tree, "child operators missing", id,
                  nd.rect.level, "merge");
    const Rect& ra = mesh_.node(nd.child_a).rect;
    const Rect& rb = mesh_.node(nd.child_b).rect;
    d.maps = interface_maps_from_panels(da.panels, ra, db.panels, rb, id);

    const double line = (d.maps.axis == 0) ? ra.x1 : ra.y1;
    for (const auto& p : da.panels)
      if (!panel_on_line(p, d.maps.axis, line)) d.panels.push_back(p);
    for (const auto& p : db.panels)
      if (!panel_on_line(p, d.maps.axis, line)) d.panels.push_back(p);
    d.nb = static_cast<int>(d.maps.i1.size() + d.maps.i2.size());

    Eigen::MatrixXd l2t1, l1t2;
    const bool interp = !d.maps.matching;
    if (interp) {
      l2t1 = panel_interp(d.maps.panels3b, d.maps.panels3a, id);
      l1t2 = panel_interp(d.maps.panels3a, d.maps.panels3b, id);
    }
    NodeOps<T> ops;
    if (form_ == Formulation::DtN) {
      ops = merge_dtn_full<T>(da.bop, db.bop, da.h_part, db.h_part, d.maps,
                              interp ? &l2t1 : nullptr,
                              interp ? &l1t2 : nullptr, id);
    } else {
      if constexpr (std::is_same_v<T, Complex>) {
        ops = merge_iti(da.bop, db.bop, da.h_part, db.h_part, d.maps,
                        interp ? &l2t1 : nullptr, interp ? &l1t2 : nullptr, id);
      }
    }
    d.psi = std::move(ops.psi);
    d.bop = std::move(ops.bop);
    d.w_part = std::move(ops.w_part);
    d.h_part = std::move(ops.h_part);
    d.interp_down = std::move(ops.interp_down);
    d.dn_a31 = std::move(ops.dn_a31);
    d.dn_a33 = std::move(ops.dn_a33);
    d.ha3_down = std::move(ops.ha3_down);

    if (!opts_.retain_boundary_ops) {
      // ItI leaves keep R: the downward sweep converts incoming data to
      // boundary values through it.
      if (!(form_ == Formulation::ItI && mesh_.node(nd.child_a).is_leaf()))
        da.bop.resize(0, 0);
      if (!(form_ == Formulation::ItI && mesh_.node(nd.child_b).is_leaf()))
        db.bop.resize(0, 0);
    }
  }
  d.built = true;
  data_[id] = std::move(d);
}

template <typename T>
void SolverTree<T>::build_range(const std::vector<int>& ids) {
  // group by binary level; children complete strictly before parents
  int max_level = 0;
  for (int id : ids) max_level = std::max(max_level, mesh_.node(id).rect.level);
  std::vector<std::vector<int>> by_level(max_level + 1);
  for (int id : ids) by_level[mesh_.node(id).rect.level].push_back(id);
  for (int lvl = max_level; lvl >= 0; --lvl)
    parallel_for_ids(by_level[lvl], opts_.threads,
                     [this](int id) { build_node(id); });
}

template <typename T>
void SolverTree<T>::build(const BuildOptions& opts) {
  opts_ = opts;
  const auto t0 = std::chrono::steady_clock::now();
  data_.assign(mesh_.size() + 1, NodeData{});
  std::vector<int> ids(mesh_.size());
  for (int id = 1; id <= mesh_.size(); ++id) ids[id - 1] = id;
  build_range(ids);
  built_ = true;
  stats_.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0).count();
  stats_.operator_bytes = memory_report().total;
}

template <typename T>
const Matrix<T>& SolverTree<T>::node_boundary_op(int id) const {
  if (data_[id].bop.size() == 0)
    throw Error(ErrorCode::invalid_argument,
                "boundary operator was deleted (retain_boundary_ops=false)", id);
  return data_[id].bop;
}

template <typename T>
const LeafGrid& SolverTree<T>::leaf_grid(int id) const {
  if (!mesh_.node(id).is_leaf())
    throw Error(ErrorCode::invalid_argument, "not a leaf", id);
  return data_[id].grid;
}

template <typename T>
void SolverTree<T>::fill_leaf_block(int id, const Vector<T>& bdata,
                                    LeafBlock<T>& out) const {
  const NodeData& d = data_[id];
  const LeafGrid& g = d.grid;
  const int nc = g.nc;
  out.leaf_id = id;
  out.nc = nc;
  out.rect = g.rect;
  out.values.resize(nc * nc);

  Vector<T> ub;
  Vector<T> ui = d.psi * bdata + d.z_part;
  if (form_ == Formulation::DtN) {
    ub = bdata;
  } else {
    if constexpr (std::is_same_v<T, Complex>) {
      const Complex two_i_eta = Complex(0.0, 2.0) * eta_;
      ub = (bdata - d.bop * bdata - d.h_part) / two_i_eta;
    }
  }
  for (int k = 0; k < g.nb(); ++k) out.values[g.idx_boundary[k]] = ub[k];
  for (int k = 0; k < g.ni(); ++k) out.values[g.idx_interior[k]] = ui[k];

  // corner values for export: average of the two adjacent edge interpolants
  const std::vector<double> xi(g.xs.begin() + 1, g.xs.end() - 1);
  const std::vector<double> yi(g.ys.begin() + 1, g.ys.end() - 1);
  const Eigen::MatrixXd lx =
      spectral::interp_matrix(xi, {g.rect.x0, g.rect.x1});
  const Eigen::MatrixXd ly =
      spectral::interp_matrix(yi, {g.rect.y0, g.rect.y1});
  auto edge_val = [&](const Eigen::MatrixXd& l, int row, auto&& value_at) {
    T acc(0);
    for (int k = 0; k < nc - 2; ++k) acc += l(row, k) * value_at(k);
    return acc;
  };
  auto south = [&](int k) { return out.values[(k + 1) * nc]; };
  auto north = [&](int k) { return out.values[(k + 1) * nc + nc - 1]; };
  auto west = [&](int k) { return out.values[k + 1]; };
  auto east = [&](int k) { return out.values[(nc - 1) * nc + k + 1]; };
  out.values[0] =
      (edge_val(lx, 0, south) + edge_val(ly, 0, west)) / 2.0;  // (x0, y0)
  out.values[(nc - 1) * nc] =
      (edge_val(lx, 1, south) + edge_val(ly, 0, east)) / 2.0;  // (x1, y0)
  out.values[nc - 1] =
      (edge_val(lx, 0, north) + edge_val(ly, 1, west)) / 2.0;  // (x0, y1)
  out.values[nc * nc - 1] =
      (edge_val(lx, 1, north) + edge_val(ly, 1, east)) / 2.0;  // (x1, y1)
}

namespace {

template <typename T, typename LeafFill, typename ParentStep>
Field<T> sweep_down(const MeshTree& mesh, int n, const LeafFill& leaf_fill,
                    std::vector<Vector<T>>& bvals,
                    const ParentStep& parent_step) {
  Field<T> field;
  field.blocks.reserve(mesh.leaf_count());
  for (int id = 1; id <= n; ++id) {
    const BoxNode& nd = mesh.node(id);
    if (nd.is_leaf()) {
      leaf_fill(id, bvals[id], field);
    } else {
      Vector<T> va, vb;
      parent_step(id, bvals[id], va, vb);
      bvals[nd.child_a] = std::move(va);
      bvals[nd.child_b] = std::move(vb);
    }
    bvals[id].resize(0);
  }
  return field;
}

}  // namespace

template <typename T>
Field<T> SolverTree<T>::solve_dirichlet(
    const std::function<T(double, double)>& f) const {
  if (!built_)
    throw Error(ErrorCode::unbuilt_tree, "solve on unbuilt tree", -1, -1,
                "solve");
  if (form_ != Formulation::DtN)
    throw Error(ErrorCode::invalid_argument,
                "solve_dirichlet on a tree built with the ItI formulation",
                -1, -1, "solve");
  const int n = mesh_.size();
  std::vector<Vector<T>> bvals(n + 1);
  bvals[1].resize(data_[1].nb);
  int k = 0;
  for (const auto& p : data_[1].panels)
    for (int i = 0; i < p.size(); ++i) {
      auto [x, y] = p.point(i);
      bvals[1][k++] = f(x, y);
    }

  auto leaf_fill = [this](int id, const Vector<T>& bd, Field<T>& out) {
    LeafBlock<T> b;
    fill_leaf_block(id, bd, b);
    out.blocks.push_back(std::move(b));
  };
  auto step =
      [this](int id, const Vector<T>& u12, Vector<T>& ua, Vector<T>& ub) {
        const NodeData& d = data_[id];
        const auto& m = d.maps;
        const int n1 = static_cast<int>(m.i1.size());
        const int n2 = static_cast<int>(m.i2.size());
        const Vector<T> u3a = d.psi * u12 + d.w_part;
        const Vector<T> u3b = d.interp_down.size() > 0
                                  ? Vector<T>(d.interp_down * u3a)
                                  : u3a;
        const BoxNode& nd = mesh_.node(id);
        ua.resize(data_[nd.child_a].nb);
        ub.resize(data_[nd.child_b].nb);
        for (int i = 0; i < n1; ++i) ua[m.i1[i]] = u12[i];
        for (int i = 0; i < n2; ++i) ub[m.i2[i]] = u12[n1 + i];
        for (size_t i = 0; i < m.i3a.size(); ++i) ua[m.i3a[i]] = u3a[i];
        for (size_t i = 0; i < m.i3b.size(); ++i) ub[m.i3b[i]] = u3b[i];
      };
  return sweep_down<T>(mesh_, n, leaf_fill, bvals, step);
}

template <typename T>
Field<T> SolverTree<T>::solve_impedance(
    const std::function<T(double, double, double, double)>& t) const {
  if (!built_)
    throw Error(ErrorCode::unbuilt_tree, "solve on unbuilt tree", -1, -1,
                "solve");
  if (form_ != Formulation::ItI)
    throw Error(ErrorCode::invalid_argument,
                "solve_impedance on a tree built with the DtN formulation",
                -1, -1, "solve");
  const int n = mesh_.size();
  std::vector<Vector<T>> bvals(n + 1);
  bvals[1].resize(data_[1].nb);
  int k = 0;
  for (const auto& p : data_[1].panels) {
    const auto [nx, ny] = p.normal();
    for (int i = 0; i < p.size(); ++i) {
      auto [x, y] = p.point(i);
      bvals[1][k++] = t(x, y, nx, ny);
    }
  }

  auto leaf_fill = [this](int id, const Vector<T>& bd, Field<T>& out) {
    LeafBlock<T> b;
    fill_leaf_block(id, bd, b);
    out.blocks.push_back(std::move(b));
  };
  auto step =
      [this](int id, const Vector<T>& t12, Vector<T>& ta, Vector<T>& tb) {
        const NodeData& d = data_[id];
        const auto& m = d.maps;
        const int n1 = static_cast<int>(m.i1.size());
        const int n2 = static_cast<int>(m.i2.size());
        const Vector<T> t3a = d.psi * t12 + d.w_part;
        const Vector<T> t3b =
            -(d.dn_a31 * t12.head(n1) + d.dn_a33 * t3a + d.ha3_down);
        const BoxNode& nd = mesh_.node(id);
        ta.resize(data_[nd.child_a].nb);
        tb.resize(data_[nd.child_b].nb);
        for (int i = 0; i < n1; ++i) ta[m.i1[i]] = t12[i];
        for (int i = 0; i < n2; ++i) tb[m.i2[i]] = t12[n1 + i];
        for (size_t i = 0; i < m.i3a.size(); ++i) ta[m.i3a[i]] = t3a[i];
        for (size_t i = 0; i < m.i3b.size(); ++i) tb[m.i3b[i]] = t3b[i];
      };
  return sweep_down<T>(mesh_, n, leaf_fill, bvals, step);
}

template <typename T>
void SolverTree<T>::update_after_refinement(
    const std::vector<int>& refined_leaf_ids) {
  if (!built_)
    throw Error(ErrorCode::unbuilt_tree, "update on unbuilt tree");
  if (refined_leaf_ids.empty()) return;
  if (!opts_.retain_boundary_ops)
    throw Error(ErrorCode::precondition_violation,
                "incremental update requires retain_boundary_ops");
  for (int id : refined_leaf_ids) {
    if (id < 1 || id > mesh_.size() || mesh_.node(id).is_leaf())
      throw Error(ErrorCode::invalid_argument,
                  "update_after_refinement: id is not a refined leaf", id);
  }
  data_.resize(mesh_.size() + 1);
  std::set<int> dirty;
  for (int id : refined_leaf_ids) {
    dirty.insert(id);
    for (int d : mesh_.descendants(id)) dirty.insert(d);
    for (int a : mesh_.ancestors(id)) dirty.insert(a);
  }
  std::vector<int> order(dirty.begin(), dirty.end());
  build_range(order);
  stats_.operator_bytes = memory_report().total;
}

template <typename T>
MemoryReport SolverTree<T>::memory_report() const {
  if (!built_) throw Error(ErrorCode::unbuilt_tree, "memory report on unbuilt tree");
  MemoryReport rep;
  int max_level = 0;
  for (int id = 1; id <= mesh_.size(); ++id)
    max_level = std::max(max_level, mesh_.node(id).rect.level);
  rep.per_level.assign(max_level + 1, 0);
  for (int id = 1; id <= mesh_.size(); ++id) {
    const NodeData& d = data_[id];
    const std::uint64_t bytes = matrix_bytes(d.psi) + matrix_bytes(d.bop) +
                                matrix_bytes(d.interp_down) +
                                matrix_bytes(d.dn_a31) + matrix_bytes(d.dn_a33);
    rep.total += bytes;
    rep.per_level[mesh_.node(id).rect.level] += bytes;
    if (mesh_.node(id).is_leaf())
      rep.leaf_bytes += bytes;
    else
      rep.parent_bytes += bytes;
  }
  return rep;
}

template class SolverTree<double>;
template class SolverTree<Complex>;

}  // namespace hps
