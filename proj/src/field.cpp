#include "hps/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hps/errors.hpp"
#include "hps/spectral.hpp"

namespace hps {

template <typename T>
const LeafBlock<T>* Field<T>::find(int leaf_id) const {
  auto it = std::lower_bound(
      blocks.begin(), blocks.end(), leaf_id,
      [](const LeafBlock<T>& b, int id) { return b.leaf_id < id; });
  if (it == blocks.end() || it->leaf_id != leaf_id) return nullptr;
  return &*it;
}

namespace {

std::vector<double> bary_row(const std::vector<double>& nodes,
                             const std::vector<double>& w, double x) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> row(n, 0.0);
  for (int k = 0; k < n; ++k) {
    if (x == nodes[k]) {
      row[k] = 1.0;
      return row;
    }
  }
  double denom = 0.0;
  for (int k = 0; k < n; ++k) {
    row[k] = w[k] / (x - nodes[k]);
    denom += row[k];
  }
  for (int k = 0; k < n; ++k) row[k] /= denom;
  return row;
}

}  // namespace

template <typename T>
T eval_block(const LeafBlock<T>& block, double x, double y) {
  const int nc = block.nc;
  const auto xs = spectral::cheb_nodes(nc, block.rect.x0, block.rect.x1).points;
  const auto ys = spectral::cheb_nodes(nc, block.rect.y0, block.rect.y1).points;
  const auto w = spectral::cheb_bary_weights(nc);
  const auto lx = bary_row(xs, w, x);
  const auto ly = bary_row(ys, w, y);
  T out(0);
  for (int i = 0; i < nc; ++i) {
    if (lx[i] == 0.0) continue;
    T acc(0);
    for (int j = 0; j < nc; ++j) acc += ly[j] * block.values[i * nc + j];
    out += lx[i] * acc;
  }
  return out;
}

template <typename T>
T eval_field(const MeshTree& tree, const Field<T>& field, double x, double y) {
  const int id = tree.find_leaf(x, y);
  const LeafBlock<T>* block = field.find(id);
  if (!block)
    throw Error(ErrorCode::invalid_argument, "field has no block for leaf", id);
  return eval_block(*block, x, y);
}

namespace {

void write_value(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

void write_value(std::ostream& os, const Complex& v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.17g,%.17g", v.real(), v.imag());
  os << buf;
}

bool read_value(std::istream& is, double& v) {
  return static_cast<bool>(is >> v);
}

bool read_value(std::istream& is, Complex& v) {
  std::string tok;
  if (!(is >> tok)) return false;
  const auto comma = tok.find(',');
  if (comma == std::string::npos) return false;
  v = Complex(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
  return true;
}

}  // namespace

template <typename T>
void export_field(const Field<T>& field, std::ostream& os) {
  char buf[200];
  for (const auto& b : field.blocks) {
    std::snprintf(buf, sizeof(buf), "%d, %d, %.17g, %.17g, %.17g, %.17g\n",
                  b.leaf_id, b.nc, b.rect.x0, b.rect.x1, b.rect.y0, b.rect.y1);
    os << buf;
    for (Eigen::Index k = 0; k < b.values.size(); ++k) {
      write_value(os, b.values[k]);
      os << '\n';
    }
  }
}

template <typename T>
void export_field_file(const Field<T>& field, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::io_error, "cannot write " + path);
  export_field(field, os);
}

template <typename T>
Field<T> import_field(std::istream& is) {
  Field<T> f;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::string hdr = line;
    std::replace(hdr.begin(), hdr.end(), ',', ' ');
    std::istringstream hs(hdr);
    LeafBlock<T> b;
    if (!(hs >> b.leaf_id >> b.nc >> b.rect.x0 >> b.rect.x1 >> b.rect.y0 >>
          b.rect.y1))
      throw Error(ErrorCode::io_error, "malformed field header: " + line);
    b.values.resize(b.nc * b.nc);
    for (int k = 0; k < b.nc * b.nc; ++k) {
      if (!read_value(is, b.values[k]))
        throw Error(ErrorCode::io_error, "truncated field block");
    }
    is.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    f.blocks.push_back(std::move(b));
  }
  return f;
}

template struct Field<double>;
template struct Field<Complex>;
template double eval_block(const LeafBlock<double>&, double, double);
template Complex eval_block(const LeafBlock<Complex>&, double, double);
template double eval_field(const MeshTree&, const Field<double>&, double, double);
template Complex eval_field(const MeshTree&, const Field<Complex>&, double, double);
template void export_field(const Field<double>&, std::ostream&);
template void export_field(const Field<Complex>&, std::ostream&);
template void export_field_file(const Field<double>&, const std::string&);
template void export_field_file(const Field<Complex>&, const std::string&);
template Field<double> import_field(std::istream&);
template Field<Complex> import_field(std::istream&);

}  // namespace hps
