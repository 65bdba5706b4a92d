#include <doctest.h>

#include "femnet/compiler.hpp"
#include "femnet/error.hpp"
#include "femnet/quantize.hpp"
#include "support/corpus.hpp"

#include <cmath>
#include <set>

using namespace femnet;
using namespace femnet::testing;

TEST_CASE("grid values") {
  CHECK(QuantGrid(0, 3).values() == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(QuantGrid(0, 2).values() == std::vector<double>{-1.0, 0.0, 1.0});
  const QuantGrid g(2, 4);
  CHECK(g.values().size() == 9);
  CHECK(g.values().front() == -4.0);
  CHECK(g.contains(0.5));
  CHECK(!g.contains(0.25));
  for (std::size_t i = 0; i < g.values().size(); ++i) CHECK(g.values()[i] == -g.values()[g.values().size() - 1 - i]);
  CHECK_THROWS_AS(QuantGrid(0, 1), Error);
}

TEST_CASE("scalar projection examples") {
  const QuantGrid g(0, 3);
  CHECK(project(0.6, g) == 0.5);
  CHECK(project(0.75, g) == 0.5);
  CHECK(project(-0.75, g) == -0.5);
  CHECK(project(0.25, g) == 0.0);
  CHECK(project(0.0, g) == 0.0);
  CHECK(project(7.0, g) == 1.0);
}

TEST_CASE("projection minimizes the distance and is idempotent") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto& g : {QuantGrid(0, 3), QuantGrid(-1, 4), QuantGrid(1, 2)}) {
    for (int i = 0; i < 10000; ++i) {
      const double w = u(rng);
      const double p = project(w, g);
      double best = 1e300;
      for (double q : g.values()) best = std::min(best, std::abs(w - q));
      CHECK(std::abs(w - p) == best);
      CHECK(project(p, g) == p);
    }
  }
}

TEST_CASE("matrix projection is entrywise") {
  std::mt19937_64 rng(2);
  const QuantGrid g(0, 3);
  const Mat w = Mat::NullaryExpr(3, 3, [&] { return std::uniform_real_distribution<double>(-2, 2)(rng); });
  const Mat p = project_matrix(w, g);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(p(i, j) == project(w(i, j), g));
  CHECK(project_matrix(p, g) == p);
  CHECK(project_matrix(Mat::Zero(2, 4), g).isZero(0.0));
}

TEST_CASE("compiled networks have the structured low-bit form") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& [name, mesh] : mesh_corpus(rng)) {
    INFO(name);
    std::vector<double> c(mesh.num_vertices());
    for (auto& x : c) x = u(rng);
    const auto r = check_structured(compile_fem_deep(mesh, c));
    CHECK(r.conforms);
    CHECK(r.warning.empty());
    for (int i = 0; i < std::min(mesh.num_vertices(), 4); ++i)
      CHECK(check_structured(compile_basis_deep(mesh, vertex_star(mesh, i))).conforms);
  }
  std::vector<ReluNetwork> nets;
  for (int i = 0; i < 6; ++i) nets.push_back(ReluNetwork::affine(random_affine(2, rng, 3.0)));
  CHECK(check_structured(compile_max_of_m(nets)).conforms);
  LatticeForm l{{random_affine(2, rng), random_affine(2, rng), random_affine(2, rng), random_affine(2, rng)},
                {{0, 1, 2}, {3}, {1, 3}}};
  CHECK(check_structured(compile_lattice_shallow(l, 2)).conforms);
  for (int trial = 0; trial < 5; ++trial)
    CHECK(check_structured(compile_cpwl_shallow(random_cpwl(1 + trial % 2, 4, rng)).net).conforms);
  auto grid = diagonal_grid(2, 2);
  CHECK(check_structured(compile_basis_shallow(grid, vertex_star(grid, 4)).net).conforms);
}

TEST_CASE("an off-grid weight is reported") {
  auto mesh = diagonal_grid(2, 2);
  auto net = compile_basis_deep(mesh, vertex_star(mesh, 4));
  REQUIRE(net.depth() >= 3);
  auto& layer = net.mutable_layers()[2];
  layer.val[0] = 0.3;
  const auto r = check_structured(net);
  CHECK(!r.conforms);
  REQUIRE(r.offending.size() == 1);
  CHECK(r.offending[0].layer == 2);
  CHECK(r.offending[0].value == 0.3);
  layer.val[0] = 0.5 + 1e-14;
  CHECK(!check_structured(net).conforms);
  CHECK(check_structured(net, 1e-12).conforms);
}

TEST_CASE("a hidden bias breaks conformance and 0-hidden nets conform vacuously") {
  auto net = hat_1d_network(0.0, 1.0, 2.0);
  net.mutable_layers()[1].bias[0] = 0.25;
  CHECK(!check_structured(net).conforms);
  const auto r = check_structured(ReluNetwork::affine(AffineFunc(Vec::Constant(1, 0.3), 1.0)));
  CHECK(r.conforms);
  CHECK(!r.warning.empty());
}

TEST_CASE("quantize_network keeps the first layer and projects the rest") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<Layer> layers;
  const std::vector<int> w{2, 5, 4, 1};
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    layers.push_back(Layer::from_dense(Mat::NullaryExpr(w[i + 1], w[i], [&] { return u(rng); }), Vec::Zero(w[i + 1])));
  const ReluNetwork net(2, layers);
  const QuantGrid g(0, 3);
  const auto q = quantize_network(net, g);
  CHECK(q.layers()[0].dense() == net.layers()[0].dense());
  CHECK(q.layers()[1].dense() == project_matrix(net.layers()[1].dense(), g));
  CHECK(check_structured(q).conforms);
}
