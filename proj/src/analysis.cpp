#include "femnet/analysis.hpp"

#include "femnet/error.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace femnet {

VerifyResult verify_points(const ReluNetwork& net, const std::function<double(const Vec&)>& ref,
                           const std::vector<Vec>& points, double tol) {
  VerifyResult r;
  r.samples = static_cast<int>(points.size());
  const auto got = net.eval_points(points);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double want = ref(points[i]);
    const double err = std::abs(got[i] - want);
    const bool bad = !(err <= tol);
    const bool worse = std::isnan(err) ? !std::isnan(r.max_error) : err > r.max_error;
    if (worse || (r.worst_x.size() == 0)) {
      r.max_error = std::isnan(err) ? std::numeric_limits<double>::quiet_NaN() : err;
      r.worst_x = points[i];
      r.worst_net = got[i];
      r.worst_ref = want;
    }
    if (bad) r.ok = false;
  }
  return r;
}

RegionGrid region_plot(const ReluNetwork& net, const Box& box, int resolution) {
  if (net.input_dim() != 2 || box.dim() != 2)
    throw Error(ErrorKind::DimensionMismatch, "region plots need a 2-input network and a 2D box");
  if (resolution < 1) throw Error(ErrorKind::InvalidInput, "resolution must be positive");
  RegionGrid g;
  std::map<std::vector<std::uint8_t>, int> ids;
  for (int iy = 0; iy < resolution; ++iy)
    for (int ix = 0; ix < resolution; ++ix) {
      // Cell centres, so grid points avoid the box boundary.
      Vec x(2);
      x(0) = box.lo(0) + (box.hi(0) - box.lo(0)) * (ix + 0.5) / resolution;
      x(1) = box.lo(1) + (box.hi(1) - box.lo(1)) * (iy + 0.5) / resolution;
      const auto [it, inserted] = ids.emplace(net.activation_pattern(x), static_cast<int>(ids.size()));
      g.xs.push_back(x(0));
      g.ys.push_back(x(1));
      g.labels.push_back(it->second);
    }
  g.num_labels = static_cast<int>(ids.size());
  return g;
}

std::string region_plot_csv(const RegionGrid& g) {
  std::ostringstream os;
  os.precision(17);
  os << "x,y,label\n";
  for (std::size_t i = 0; i < g.labels.size(); ++i) os << g.xs[i] << ',' << g.ys[i] << ',' << g.labels[i] << '\n';
  return os.str();
}

}  // namespace femnet
