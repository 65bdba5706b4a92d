#include "femnet/relu_net.hpp"

#include "femnet/error.hpp"
#include "femnet/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace femnet {

// ---------------------------------------------------------------------------
// Layer

Layer Layer::from_dense(const Mat& w, const Vec& b) {
  if (b.size() != w.rows()) throw Error(ErrorKind::DimensionMismatch, "bias length must equal row count");
  Layer l;
  l.rows = static_cast<int>(w.rows());
  l.cols = static_cast<int>(w.cols());
  l.row_ptr.assign(1, 0);
  for (int r = 0; r < l.rows; ++r) {
    for (int c = 0; c < l.cols; ++c) {
      if (w(r, c) != 0.0) {
        l.col.push_back(c);
        l.val.push_back(w(r, c));
      }
    }
    l.row_ptr.push_back(static_cast<int>(l.col.size()));
  }
  l.bias.assign(b.data(), b.data() + b.size());
  return l;
}

Layer Layer::from_entries(int rows, int cols, std::vector<Entry> entries, std::vector<double> bias) {
  if (static_cast<int>(bias.size()) != rows) throw Error(ErrorKind::DimensionMismatch, "bias length must equal row count");
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  Layer l;
  l.rows = rows;
  l.cols = cols;
  l.row_ptr.assign(rows + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    const Entry& e = entries[i];
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
      throw Error(ErrorKind::DimensionMismatch, "layer entry out of range");
    double v = e.value;
    std::size_t j = i + 1;
    while (j < entries.size() && entries[j].row == e.row && entries[j].col == e.col) v += entries[j++].value;
    if (v != 0.0) {
      l.col.push_back(e.col);
      l.val.push_back(v);
      ++l.row_ptr[e.row + 1];
    }
    i = j;
  }
  for (int r = 0; r < rows; ++r) l.row_ptr[r + 1] += l.row_ptr[r];
  l.bias = std::move(bias);
  return l;
}

Mat Layer::dense() const {
  Mat w = Mat::Zero(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) w(r, col[k]) = val[k];
  return w;
}

double Layer::at(int r, int c) const {
  for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
    if (col[k] == c) return val[k];
  return 0.0;
}

std::vector<Layer::Entry> Layer::entries() const {
  std::vector<Entry> out;
  out.reserve(val.size());
  for (int r = 0; r < rows; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) out.push_back({r, col[k], val[k]});
  return out;
}

// ---------------------------------------------------------------------------
// ReluNetwork

ReluNetwork::ReluNetwork(int input_dim, std::vector<Layer> layers) : input_dim_(input_dim), layers_(std::move(layers)) {
  if (input_dim_ < 1) throw Error(ErrorKind::DimensionMismatch, "input dimension must be positive");
  if (layers_.empty()) throw Error(ErrorKind::DimensionMismatch, "network needs at least one affine layer");
  int prev = input_dim_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    if (layer.cols != prev)
      throw Error(ErrorKind::DimensionMismatch, "layer " + std::to_string(l) + " expects " + std::to_string(layer.cols) +
                                                    " inputs, previous layer gives " + std::to_string(prev));
    if (static_cast<int>(layer.bias.size()) != layer.rows || static_cast<int>(layer.row_ptr.size()) != layer.rows + 1)
      throw Error(ErrorKind::DimensionMismatch, "malformed layer " + std::to_string(l));
    prev = layer.rows;
  }
}

ReluNetwork ReluNetwork::affine(const AffineFunc& f) {
  Mat w = f.gradient.transpose();
  Vec b(1);
  b(0) = f.offset;
  return ReluNetwork(f.dim(), {Layer::from_dense(w, b)});
}

ReluNetwork ReluNetwork::affine_map(const Mat& w, const Vec& b) {
  return ReluNetwork(static_cast<int>(w.cols()), {Layer::from_dense(w, b)});
}

long long ReluNetwork::size() const {
  long long s = 0;
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) s += layers_[l].rows;
  return s;
}

NetworkStats ReluNetwork::stats() const {
  NetworkStats st;
  st.hidden_layers = hidden_layers();
  st.size = size();
  for (const auto& l : layers_) {
    st.nonzero_params += l.nnz();
    st.nonzero_params += std::count_if(l.bias.begin(), l.bias.end(), [](double b) { return b != 0.0; });
  }
  return st;
}

BatchMat ReluNetwork::eval_batch(const BatchMat& points) const {
  if (points.rows() != input_dim_) throw Error(ErrorKind::DimensionMismatch, "input dimension mismatch");
  const std::size_t n = static_cast<std::size_t>(points.cols());
  BatchMat result(output_dim(), static_cast<Eigen::Index>(n));
  int widest = input_dim_;
  for (const auto& l : layers_) widest = std::max(widest, l.rows);
  const std::size_t chunk = std::clamp<std::size_t>((std::size_t{1} << 21) / static_cast<std::size_t>(widest), 4, 512);

  std::vector<double> a, b;
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t batch = std::min(chunk, n - start);
    a.resize(static_cast<std::size_t>(input_dim_) * batch);
    for (int c = 0; c < input_dim_; ++c)
      for (std::size_t s = 0; s < batch; ++s) a[c * batch + s] = points(c, static_cast<Eigen::Index>(start + s));
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const Layer& layer = layers_[l];
      b.resize(static_cast<std::size_t>(layer.rows) * batch);
      const kernels::CsrView view{layer.rows, layer.row_ptr.data(), layer.col.data(), layer.val.data(), layer.bias.data()};
      kernels::apply_layer(view, a.data(), b.data(), batch, l + 1 < layers_.size());
      std::swap(a, b);
    }
    for (int r = 0; r < output_dim(); ++r)
      for (std::size_t s = 0; s < batch; ++s) result(r, static_cast<Eigen::Index>(start + s)) = a[r * batch + s];
  }
  return result;
}

std::vector<double> ReluNetwork::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != input_dim_) throw Error(ErrorKind::DimensionMismatch, "input dimension mismatch");
  BatchMat p(input_dim_, 1);
  for (int i = 0; i < input_dim_; ++i) p(i, 0) = x[i];
  const BatchMat out = eval_batch(p);
  return std::vector<double>(out.data(), out.data() + out.size());
}

double ReluNetwork::eval_scalar(const Vec& x) const {
  const auto out = eval(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  return out.at(0);
}

std::vector<double> ReluNetwork::eval_points(const std::vector<Vec>& points) const {
  BatchMat p(input_dim_, static_cast<Eigen::Index>(points.size()));
  for (std::size_t s = 0; s < points.size(); ++s) {
    if (points[s].size() != input_dim_) throw Error(ErrorKind::DimensionMismatch, "input dimension mismatch");
    p.col(static_cast<Eigen::Index>(s)) = points[s];
  }
  const BatchMat out = eval_batch(p);
  std::vector<double> v(points.size());
  for (std::size_t s = 0; s < points.size(); ++s) v[s] = out(0, static_cast<Eigen::Index>(s));
  return v;
}

std::vector<std::uint8_t> ReluNetwork::activation_pattern(const Vec& x) const {
  if (x.size() != input_dim_) throw Error(ErrorKind::DimensionMismatch, "input dimension mismatch");
  std::vector<std::uint8_t> pattern;
  std::vector<double> a(x.data(), x.data() + x.size()), b;
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    b.resize(layer.rows);
    const kernels::CsrView view{layer.rows, layer.row_ptr.data(), layer.col.data(), layer.val.data(), layer.bias.data()};
    kernels::apply_layer_scalar(view, a.data(), b.data(), 1, false);
    for (double v : b) pattern.push_back(v > 0.0 ? 1 : 0);
    for (double& v : b) v = v > 0.0 ? v : 0.0;
    std::swap(a, b);
  }
  return pattern;
}

// ---------------------------------------------------------------------------
// Composition

ReluNetwork compose_output(const ReluNetwork& net, const Mat& g) {
  const Layer& last = net.layers().back();
  if (g.cols() != last.rows) throw Error(ErrorKind::DimensionMismatch, "output map has wrong input size");
  std::vector<Layer::Entry> entries;
  std::vector<double> bias(g.rows(), 0.0);
  for (int r2 = 0; r2 < g.rows(); ++r2) {
    for (int r = 0; r < last.rows; ++r) {
      const double gv = g(r2, r);
      if (gv == 0.0) continue;
      for (int k = last.row_ptr[r]; k < last.row_ptr[r + 1]; ++k) entries.push_back({r2, last.col[k], gv * last.val[k]});
      bias[r2] += gv * last.bias[r];
    }
  }
  std::vector<Layer> layers = net.layers();
  layers.back() = Layer::from_entries(static_cast<int>(g.rows()), last.cols, std::move(entries), std::move(bias));
  return ReluNetwork(net.input_dim(), std::move(layers));
}

ReluNetwork append_layer(const ReluNetwork& net, const Mat& w, const Vec& b) {
  std::vector<Layer> layers = net.layers();
  layers.push_back(Layer::from_dense(w, b));
  return ReluNetwork(net.input_dim(), std::move(layers));
}

ReluNetwork pad_depth(const ReluNetwork& net, int extra) {
  ReluNetwork out = net;
  const int o = net.output_dim();
  if (extra <= 0) return out;
  Mat split(2 * o, o);
  split << Mat::Identity(o, o), -Mat::Identity(o, o);
  Mat merge(o, 2 * o);
  merge << Mat::Identity(o, o), -Mat::Identity(o, o);
  for (int i = 0; i < extra; ++i) out = append_layer(compose_output(out, split), merge, Vec::Zero(o));
  return out;
}

ReluNetwork parallel(const std::vector<ReluNetwork>& nets) {
  if (nets.empty()) throw Error(ErrorKind::EmptyList, "parallel of zero networks");
  const int d = nets.front().input_dim();
  int depth = 0;
  for (const auto& n : nets) {
    if (n.input_dim() != d) throw Error(ErrorKind::DimensionMismatch, "parallel members need equal input dimension");
    depth = std::max(depth, n.depth());
  }
  if (nets.size() == 1) return pad_depth(nets.front(), depth - nets.front().depth());

  std::vector<ReluNetwork> padded;
  padded.reserve(nets.size());
  for (const auto& n : nets) padded.push_back(pad_depth(n, depth - n.depth()));

  std::vector<Layer> layers;
  for (int l = 0; l < depth; ++l) {
    int rows = 0;
    std::size_t nnz = 0;
    for (const auto& n : padded) {
      rows += n.layers()[l].rows;
      nnz += n.layers()[l].val.size();
    }
    Layer out;
    out.rows = rows;
    out.cols = (l == 0) ? d : layers.back().rows;
    out.row_ptr.assign(1, 0);
    out.col.reserve(nnz);
    out.val.reserve(nnz);
    out.bias.reserve(rows);
    int col_offset = 0;
    for (const auto& n : padded) {
      const Layer& src = n.layers()[l];
      for (int r = 0; r < src.rows; ++r) {
        for (int k = src.row_ptr[r]; k < src.row_ptr[r + 1]; ++k) {
          out.col.push_back(src.col[k] + col_offset);
          out.val.push_back(src.val[k]);
        }
        out.row_ptr.push_back(static_cast<int>(out.col.size()));
        out.bias.push_back(src.bias[r]);
      }
      if (l > 0) col_offset += src.cols;
    }
    layers.push_back(std::move(out));
  }
  return ReluNetwork(d, std::move(layers));
}

ReluNetwork linear_combine(const std::vector<ReluNetwork>& nets, std::span<const double> coeffs, double constant) {
  if (nets.size() != coeffs.size()) throw Error(ErrorKind::DimensionMismatch, "one coefficient per network expected");
  for (const auto& n : nets)
    if (n.output_dim() != 1) throw Error(ErrorKind::DimensionMismatch, "linear_combine needs scalar networks");
  ReluNetwork p = parallel(nets);
  Mat row(1, static_cast<Eigen::Index>(coeffs.size()));
  for (std::size_t i = 0; i < coeffs.size(); ++i) row(0, static_cast<Eigen::Index>(i)) = coeffs[i];
  ReluNetwork out = compose_output(p, row);
  out.mutable_layers().back().bias[0] += constant;
  return out;
}

ReluNetwork scale_input_layer(const ReluNetwork& net, double s) {
  ReluNetwork out = net;
  Layer& first = out.mutable_layers().front();
  for (double& v : first.val) v *= s;
  for (double& b : first.bias) b *= s;
  return out;
}

ReluNetwork hat_1d_network(double left, double center, double right) {
  if (!(left < center && center < right)) throw Error(ErrorKind::InvalidInput, "hat nodes must be increasing");
  const double h0 = center - left;
  const double h1 = right - center;
  Mat w1(3, 1);
  w1 << 1.0, 1.0, 1.0;
  Vec b1(3);
  b1 << -left, -center, -right;
  Mat w2(1, 3);
  w2 << 1.0 / h0, -(1.0 / h0 + 1.0 / h1), 1.0 / h1;
  return ReluNetwork(1, {Layer::from_dense(w1, b1), Layer::from_dense(w2, Vec::Zero(1))});
}

// ---------------------------------------------------------------------------
// One-hidden-layer space

IndependenceResult independence_check(const std::vector<AffineFunc>& params, int sample_count, std::mt19937_64& rng,
                                      double box) {
  const int m = static_cast<int>(params.size());
  if (m == 0) throw Error(ErrorKind::EmptyList, "no features");
  const int d = params.front().dim();
  std::vector<Vec> rows;
  for (const auto& p : params) {
    if (p.dim() != d) throw Error(ErrorKind::DimensionMismatch, "feature dimension mismatch");
    Vec r(d + 1);
    r.head(d) = p.gradient;
    r(d) = p.offset;
    if (r.norm() == 0.0) throw Error(ErrorKind::PreconditionViolated, "zero parameter row");
    rows.push_back(r);
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Mat pair(2, d + 1);
      pair.row(0) = rows[i].transpose() / rows[i].norm();
      pair.row(1) = rows[j].transpose() / rows[j].norm();
      Eigen::JacobiSVD<Mat> svd(pair);
      if (svd.singularValues()(1) < 1e-10 * svd.singularValues()(0))
        throw Error(ErrorKind::PairwiseDependent,
                    "parameters " + std::to_string(i) + " and " + std::to_string(j) + " are parallel");
    }

  // Every hyperplane must cross the sampling box, otherwise its feature is affine there.
  for (const auto& p : params)
    if (p.gradient.norm() > 0) box = std::max(box, 2.0 * std::abs(p.offset) / p.gradient.norm() + 1.0);
  std::uniform_real_distribution<double> unif(-box, box);
  Mat feat(sample_count, m);
  for (int s = 0; s < sample_count; ++s) {
    Vec x(d);
    for (int c = 0; c < d; ++c) x(c) = unif(rng);
    for (int i = 0; i < m; ++i) feat(s, i) = std::max(0.0, params[i](x));
  }
  Eigen::JacobiSVD<Mat> svd(feat);
  const Vec& sv = svd.singularValues();
  IndependenceResult res;
  res.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double thresh = 1e-8 * (sv.size() ? sv(0) : 0.0);
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++res.rank;
  res.independent = res.rank == m;
  return res;
}

ShallowFitResult fit_one_hidden_layer(const std::vector<Vec>& points, std::span<const double> targets, int width,
                                      int restarts, int refine_steps, std::mt19937_64& rng) {
  const int n = static_cast<int>(points.size());
  if (n == 0 || static_cast<int>(targets.size()) != n) throw Error(ErrorKind::DimensionMismatch, "points/targets mismatch");
  const int d = static_cast<int>(points.front().size());
  Mat x(d, n);
  for (int s = 0; s < n; ++s) x.col(s) = points[s];
  const Eigen::Map<const Vec> y(targets.data(), n);

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  ShallowFitResult result;
  result.best_rms = std::numeric_limits<double>::infinity();

  for (int rep = 0; rep < restarts; ++rep) {
    Mat w(width, d);
    Vec b(width);
    for (int i = 0; i < width; ++i) {
      Vec dir(d);
      for (int c = 0; c < d; ++c) dir(c) = gauss(rng);
      dir.normalize();
      w.row(i) = dir.transpose();
      b(i) = -dir.dot(points[pick(rng)]);  // breakline through a data point
    }
    Vec v(width);
    double c0 = 0.0;

    auto solve_output = [&]() {
      Mat h(n, width + 1);
      h.leftCols(width) = ((w * x).colwise() + b).cwiseMax(0.0).transpose();
      h.col(width).setOnes();
      Vec sol = h.completeOrthogonalDecomposition().solve(y);
      v = sol.head(width);
      c0 = sol(width);
    };
    solve_output();

    // Adam on all parameters, full batch.
    const double lr = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    Mat mw = Mat::Zero(width, d), vw = Mat::Zero(width, d);
    Vec mb = Vec::Zero(width), vb = Vec::Zero(width), mv = Vec::Zero(width), vv = Vec::Zero(width);
    double mc = 0.0, vc = 0.0;
    for (int step = 1; step <= refine_steps; ++step) {
      const Mat pre = (w * x).colwise() + b;
      const Mat act = pre.cwiseMax(0.0);
      const Vec pred = (v.transpose() * act).transpose().array() + c0;
      const Vec r = (pred - y) * (2.0 / n);
      const Vec gv = act * r;
      const double gc = r.sum();
      Mat delta = (v * r.transpose()).array() * (pre.array() > 0.0).cast<double>();
      const Mat gw = delta * x.transpose();
      const Vec gb = delta.rowwise().sum();
      const double c1 = 1.0 - std::pow(beta1, step), c2 = 1.0 - std::pow(beta2, step);
      auto adam = [&](auto& param, auto& m1, auto& m2, const auto& g) {
        m1 = beta1 * m1 + (1 - beta1) * g;
        m2 = beta2 * m2 + (1 - beta2) * g.cwiseProduct(g);
        param -= (lr * (m1 / c1).array() / ((m2 / c2).array().sqrt() + eps)).matrix();
      };
      adam(w, mw, vw, gw);
      adam(b, mb, vb, gb);
      adam(v, mv, vv, gv);
      mc = beta1 * mc + (1 - beta1) * gc;
      vc = beta2 * vc + (1 - beta2) * gc * gc;
      c0 -= lr * (mc / c1) / (std::sqrt(vc / c2) + eps);
    }
    solve_output();

    const Vec pred = (v.transpose() * ((w * x).colwise() + b).cwiseMax(0.0)).transpose().array() + c0;
    const double rms = std::sqrt((pred - y).squaredNorm() / n);
    result.rms_per_restart.push_back(rms);
    if (rms < result.best_rms) {
      result.best_rms = rms;
      result.best_max_error = (pred - y).cwiseAbs().maxCoeff();
      Vec cb(1);
      cb(0) = c0;
      result.best = ReluNetwork(d, {Layer::from_dense(w, b), Layer::from_dense(v.transpose(), cb)});
    }
  }
  return result;
}

}  // namespace femnet
