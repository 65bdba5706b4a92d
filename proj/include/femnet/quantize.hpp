#pragma once

#include "femnet/relu_net.hpp"

#include <string>
#include <vector>

namespace femnet {

/// Q_{k,l} = 2^k * {0, +-2^(1 - 2^(l-2)), ..., +-1/2, +-1}, l >= 2.
class QuantGrid {
 public:
  /// Throws InvalidInput for l < 2 or l > 6.
  QuantGrid(int k, int l);

  int k() const { return k_; }
  int l() const { return l_; }
  /// Sorted ascending.
  const std::vector<double>& values() const { return values_; }
  bool contains(double w, double tol = 0.0) const;

 private:
  int k_;
  int l_;
  std::vector<double> values_;
};

/// Nearest grid value; ties go to the smaller magnitude.
double project(double w, const QuantGrid& grid);

/// Entrywise projection, which solves the Frobenius problem exactly.
Mat project_matrix(const Mat& w, const QuantGrid& grid);

/// Projects the weights of layers 1.. onto the grid; layer 0 and all biases are kept.
ReluNetwork quantize_network(const ReluNetwork& net, const QuantGrid& grid);

struct Offender {
  int layer;
  int row;
  int col;  // -1 for a bias entry
  double value;
};

struct StructuredLowBitReport {
  bool conforms = true;
  std::vector<Offender> offending;
  int first_layer_checked = 1;
  int last_layer_checked = 0;
  std::string warning;  // set for the vacuous 0-hidden-layer case
};

/// Every weight of layers 1.. lies in Q_{0,3} and every bias of layers 1.. is zero.
/// tol = 0 is exact membership; externally loaded nets may use 1e-12.
StructuredLowBitReport check_structured(const ReluNetwork& net, double tol = 0.0);

}  // namespace femnet
