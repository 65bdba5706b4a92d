#pragma once

#include "femnet/affine.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace femnet {

/// Row-major matrix: one row per feature, one column per sample.
using BatchMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Affine map y = W x + b with W stored in CSR form (compiled networks are very sparse).
struct Layer {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> bias;

  struct Entry {
    int row;
    int col;
    double value;
  };

  /// Exact zeros are dropped.
  static Layer from_dense(const Mat& w, const Vec& b);
  /// Duplicate (row, col) entries are summed.
  static Layer from_entries(int rows, int cols, std::vector<Entry> entries, std::vector<double> bias);

  Mat dense() const;
  Vec bias_vector() const { return Eigen::Map<const Vec>(bias.data(), rows); }
  double at(int r, int c) const;
  int nnz() const { return static_cast<int>(val.size()); }
  std::vector<Entry> entries() const;
};

struct NetworkStats {
  int hidden_layers = 0;
  long long size = 0;  // total hidden neurons
  long long nonzero_params = 0;
};

/// Theta^k o ReLU o ... o ReLU o Theta^0. The last layer has no activation.
class ReluNetwork {
 public:
  ReluNetwork() = default;
  /// Throws DimensionMismatch when layer shapes do not chain.
  ReluNetwork(int input_dim, std::vector<Layer> layers);

  static ReluNetwork affine(const AffineFunc& f);
  static ReluNetwork affine_map(const Mat& w, const Vec& b);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return layers_.empty() ? input_dim_ : layers_.back().rows; }
  int hidden_layers() const { return static_cast<int>(layers_.size()) - 1; }
  /// Layer count, hidden layers + 1.
  int depth() const { return static_cast<int>(layers_.size()); }
  long long size() const;
  NetworkStats stats() const;

  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }

  std::vector<double> eval(std::span<const double> x) const;
  double eval_scalar(const Vec& x) const;
  /// points: input_dim x batch. Returns output_dim x batch.
  BatchMat eval_batch(const BatchMat& points) const;
  /// Scalar output at each point.
  std::vector<double> eval_points(const std::vector<Vec>& points) const;

  /// Sign pattern of every hidden pre-activation (1 where > 0), layer by layer.
  std::vector<std::uint8_t> activation_pattern(const Vec& x) const;

 private:
  int input_dim_ = 0;
  std::vector<Layer> layers_;
};

/// Networks evaluated side by side on the same input; outputs are
/// concatenated. Shallower members are padded with identity gadgets
/// (x = ReLU(x) - ReLU(-x), two neurons per channel and layer).
ReluNetwork parallel(const std::vector<ReluNetwork>& nets);

/// sum_i coeffs[i] * nets[i](x) + constant, scalar-output members.
ReluNetwork linear_combine(const std::vector<ReluNetwork>& nets, std::span<const double> coeffs, double constant);

/// Appends `extra` identity layers after the output (value preserving).
ReluNetwork pad_depth(const ReluNetwork& net, int extra);

/// Replaces the output map y by g * y (g: k x output_dim).
ReluNetwork compose_output(const ReluNetwork& net, const Mat& g);

/// Treats the current output as a hidden layer and adds y' = w ReLU(y) + b.
ReluNetwork append_layer(const ReluNetwork& net, const Mat& w, const Vec& b);

/// Multiplies the first affine layer by s > 0. Preserves f -> s f when all later biases vanish.
ReluNetwork scale_input_layer(const ReluNetwork& net, double s);

/// The one-hidden-layer, three-neuron hat on nodes a < c < b (peak at c).
ReluNetwork hat_1d_network(double left, double center, double right);

/// Checks the rank of the feature matrix [ReLU(w_i . x_j + b_i)] built at
/// sample_count random points in [-box, box]^d, with box enlarged until every
/// hyperplane w_i . x + b_i = 0 crosses it. Throws PairwiseDependent when
/// two parameter rows (w_i, b_i) are parallel.
struct IndependenceResult {
  bool independent = false;
  int rank = 0;
  std::vector<double> singular_values;
};
IndependenceResult independence_check(const std::vector<AffineFunc>& params, int sample_count, std::mt19937_64& rng,
                                      double box = 10.0);

/// Least-squares fit by a one-hidden-layer network of the given width:
/// random hidden features, linear output solve, then gradient refinement.
/// Best of `restarts` runs, reported as RMS error on the training points.
struct ShallowFitResult {
  double best_rms = 0.0;
  double best_max_error = 0.0;
  std::vector<double> rms_per_restart;
  ReluNetwork best;
};
ShallowFitResult fit_one_hidden_layer(const std::vector<Vec>& points, std::span<const double> targets, int width,
                                      int restarts, int refine_steps, std::mt19937_64& rng);

}  // namespace femnet
