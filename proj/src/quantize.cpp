#include "femnet/quantize.hpp"

#include "femnet/error.hpp"

#include <algorithm>
#include <cmath>

namespace femnet {

QuantGrid::QuantGrid(int k, int l) : k_(k), l_(l) {
  if (l < 2 || l > 6) throw Error(ErrorKind::InvalidInput, "grid bit-width l must be in [2, 6]");
  const double scale = std::ldexp(1.0, k);
  const int lowest = 1 - (1 << (l - 2));
  values_.push_back(0.0);
  for (int e = lowest; e <= 0; ++e) {
    values_.push_back(scale * std::ldexp(1.0, e));
    values_.push_back(-scale * std::ldexp(1.0, e));
  }
  std::sort(values_.begin(), values_.end());
}

bool QuantGrid::contains(double w, double tol) const {
  return std::any_of(values_.begin(), values_.end(), [&](double q) { return std::abs(w - q) <= tol; });
}

double project(double w, const QuantGrid& grid) {
  double best = 0.0;
  double best_gap = std::abs(w);
  for (double q : grid.values()) {
    const double gap = std::abs(w - q);
    if (gap < best_gap || (gap == best_gap && std::abs(q) < std::abs(best))) {
      best = q;
      best_gap = gap;
    }
  }
  return best;
}

Mat project_matrix(const Mat& w, const QuantGrid& grid) {
  return w.unaryExpr([&](double x) { return project(x, grid); });
}

ReluNetwork quantize_network(const ReluNetwork& net, const QuantGrid& grid) {
  std::vector<Layer> layers = net.layers();
  for (std::size_t l = 1; l < layers.size(); ++l) {
    auto entries = layers[l].entries();
    for (auto& e : entries) e.value = project(e.value, grid);
    layers[l] = Layer::from_entries(layers[l].rows, layers[l].cols, std::move(entries), layers[l].bias);
  }
  return ReluNetwork(net.input_dim(), std::move(layers));
}

StructuredLowBitReport check_structured(const ReluNetwork& net, double tol) {
  StructuredLowBitReport r;
  r.last_layer_checked = net.depth() - 1;
  if (net.hidden_layers() < 1) {
    r.warning = "network has no hidden layer; the structured form holds vacuously";
    return r;
  }
  static const QuantGrid q03(0, 3);
  for (int l = 1; l < net.depth(); ++l) {
    const Layer& layer = net.layers()[l];
    for (const auto& e : layer.entries())
      if (!q03.contains(e.value, tol)) r.offending.push_back({l, e.row, e.col, e.value});
    for (int i = 0; i < layer.rows; ++i)
      if (std::abs(layer.bias[i]) > tol) r.offending.push_back({l, i, -1, layer.bias[i]});
  }
  r.conforms = r.offending.empty();
  return r;
}

}  // namespace femnet
