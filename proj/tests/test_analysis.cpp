#include <doctest.h>

#include "femnet/analysis.hpp"
#include "femnet/compiler.hpp"
#include "femnet/error.hpp"
#include "support/corpus.hpp"

#include <cmath>
#include <limits>
#include <set>

using namespace femnet;
using namespace femnet::testing;

namespace {

ReluNetwork random_net(const std::vector<int>& widths, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Layer> layers;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i)
    layers.push_back(Layer::from_dense(Mat::NullaryExpr(widths[i + 1], widths[i], [&] { return nd(rng); }),
                                       Vec::NullaryExpr(widths[i + 1], [&] { return nd(rng); })));
  return ReluNetwork(widths.front(), std::move(layers));
}

std::vector<std::uint8_t> pattern_at(const ReluNetwork& net, const SimplicialMesh& mesh, int k, int corner) {
  Vec x = Vec::Zero(mesh.dim());
  for (int j = 0; j <= mesh.dim(); ++j) x += (j == corner ? 0.6 : 0.4 / mesh.dim()) * mesh.vertex(mesh.simplex(k)[j]);
  return net.activation_pattern(x);
}

}  // namespace

TEST_CASE("verify_points finds the worst sample and treats NaN as a mismatch") {
  const auto net = hat_1d_network(0, 1, 2);
  std::vector<Vec> pts;
  for (double x : {0.25, 0.5, 1.5}) pts.push_back(Vec::Constant(1, x));
  auto r = verify_points(net, [](const Vec& x) { return x(0) <= 1 ? x(0) : 2 - x(0); }, pts, 1e-12);
  CHECK(r.ok);
  CHECK(r.max_error == 0.0);
  r = verify_points(net, [](const Vec& x) { return x(0) == 0.5 ? 0.75 : (x(0) <= 1 ? x(0) : 2 - x(0)); }, pts, 1e-12);
  CHECK(!r.ok);
  CHECK(r.worst_x(0) == 0.5);
  CHECK(r.max_error == doctest::Approx(0.25));
  r = verify_points(net, [](const Vec&) { return std::numeric_limits<double>::quiet_NaN(); }, pts, 1.0);
  CHECK(!r.ok);
}

TEST_CASE("random (2,5,5,1) nets have at most 2^10 pattern labels") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = region_plot(random_net({2, 5, 5, 1}, rng), {Vec::Constant(2, -3), Vec::Constant(2, 3)}, 150);
    CHECK(g.num_labels >= 1);
    CHECK(g.num_labels <= 1024);
    CHECK(std::set<int>(g.labels.begin(), g.labels.end()).size() == static_cast<std::size_t>(g.num_labels));
  }
}

TEST_CASE("an affine net has a single label and 1D nets are rejected") {
  std::mt19937_64 rng(2);
  const auto g = region_plot(ReluNetwork::affine(random_affine(2, rng)), {Vec::Constant(2, -1), Vec::Constant(2, 1)}, 20);
  CHECK(g.num_labels == 1);
  CHECK_THROWS_AS(region_plot(hat_1d_network(0, 1, 2), {Vec::Constant(2, 0), Vec::Constant(2, 1)}, 10), Error);
}

TEST_CASE("compiled hat patterns on simplex interiors") {
  // On the criss-cross cell every min gadget compares pieces that do not
  // cross inside any simplex, so patterns are constant per simplex.
  auto cc = criss_cross_grid(1, 1);
  for (int v = 0; v < cc.num_vertices(); ++v) {
    const auto net = compile_basis_deep(cc, vertex_star(cc, v));
    for (int k = 0; k < cc.num_simplices(); ++k) {
      CHECK(pattern_at(net, cc, k, 0) == pattern_at(net, cc, k, 1));
      CHECK(pattern_at(net, cc, k, 1) == pattern_at(net, cc, k, 2));
    }
  }
  // On the diagonal grid extended pieces cross inside simplices: the pattern
  // may change while the value stays affine.
  auto dg = diagonal_grid(2, 2);
  const auto star = vertex_star(dg, 4);
  const auto net = compile_basis_deep(dg, star);
  int varying = 0;
  std::mt19937_64 rng(3);
  for (int k = 0; k < dg.num_simplices(); ++k) {
    if (pattern_at(net, dg, k, 0) != pattern_at(net, dg, k, 1) || pattern_at(net, dg, k, 1) != pattern_at(net, dg, k, 2))
      ++varying;
    for (int s = 0; s < 50; ++s) {
      std::exponential_distribution<double> ex(1.0);
      Vec w(3);
      for (int j = 0; j < 3; ++j) w(j) = ex(rng);
      w /= w.sum();
      Vec x = Vec::Zero(2);
      double want = 0;
      for (int j = 0; j < 3; ++j) {
        x += w(j) * dg.vertex(dg.simplex(k)[j]);
        want += w(j) * (dg.simplex(k)[j] == 4 ? 1.0 : 0.0);
      }
      CHECK(net.eval_scalar(x) == doctest::Approx(want).epsilon(1e-12));
    }
  }
  MESSAGE("diagonal-grid hat: " << varying << " of " << dg.num_simplices() << " simplices show more than one pattern");
}
