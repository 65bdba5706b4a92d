#pragma once

#include "femnet/relu_net.hpp"

#include <functional>
#include <string>
#include <vector>

namespace femnet {

struct VerifyResult {
  bool ok = true;
  int samples = 0;
  double max_error = 0.0;
  Vec worst_x;
  double worst_net = 0.0;
  double worst_ref = 0.0;
};

/// Compares net against ref at every point; ok when max |net - ref| <= tol.
/// A NaN on either side counts as a mismatch.
VerifyResult verify_points(const ReluNetwork& net, const std::function<double(const Vec&)>& ref,
                           const std::vector<Vec>& points, double tol);

/// Activation-pattern labels of a 2-input net on a resolution x resolution grid over box.
/// Labels number distinct patterns in order of first appearance (row-major scan).
struct RegionGrid {
  std::vector<double> xs;  // per point
  std::vector<double> ys;
  std::vector<int> labels;
  int num_labels = 0;
};

/// Throws DimensionMismatch unless the net has two inputs.
RegionGrid region_plot(const ReluNetwork& net, const Box& box, int resolution);
std::string region_plot_csv(const RegionGrid& g);

}  // namespace femnet
