#include "femnet/analysis.hpp"
#include "femnet/compiler.hpp"
#include "femnet/error.hpp"
#include "femnet/galerkin1d.hpp"
#include "femnet/quantize.hpp"
#include "support/corpus.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "femnet/io.hpp"

// One pass/fail line per acceptance criterion. Exit status is the number of undocumented failures.

using namespace femnet;
using namespace femnet::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  // Fails as stated for a reason recorded in the decisions ledger; not counted in the exit status.
  bool documented = false;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Every network compiled during the run, for the structured low-bit check.
struct CompiledLog {
  long long total = 0;
  long long conforming = 0;
  std::string first_failure;

  void add(const std::string& what, const ReluNetwork& net) {
    ++total;
    const auto r = check_structured(net);
    if (r.conforms)
      ++conforming;
    else if (first_failure.empty())
      first_failure = what;
  }
};

CompiledLog compiled;

std::vector<Vec> box_samples(const Box& box, int n, std::mt19937_64& rng) {
  std::vector<Vec> pts;
  for (int i = 0; i < n; ++i) pts.push_back(sample_box(box, rng));
  return pts;
}

Box enlarged(const Box& b, double margin) {
  return {b.lo - Vec::Constant(b.lo.size(), margin), b.hi + Vec::Constant(b.hi.size(), margin)};
}

// ------------------------------------------------------------------ AC1

Outcome ac1() {
  const auto t0 = Clock::now();
  const auto net = MinMaxGadget::min_network();
  const int n = 1000000;
  // Pairs on the grid k * 2^-24, |k| < 2^26: a + b and a - b are representable.
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<long long> k(-(1ll << 26) + 1, (1ll << 26) - 1);
  BatchMat pts(2, n);
  for (int j = 0; j < n; ++j) {
    pts(0, j) = std::ldexp(static_cast<double>(k(rng)), -24);
    pts(1, j) = std::ldexp(static_cast<double>(k(rng)), -24);
  }
  const BatchMat out = net.eval_batch(pts);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(out(0, j) - std::min(pts(0, j), pts(1, j))));

  const double tiny = std::numeric_limits<double>::denorm_min();
  const std::vector<std::pair<double, double>> edge{
      {0.0, 0.0},       {-0.0, 0.0},      {1.0, 1.0},        {-1.0, -1.0},    {1.0, -1.0},
      {3.5, 3.5},       {tiny, tiny},     {tiny, -tiny},     {0.0, tiny},     {0x1p500, 0x1p500},
      {0x1p500, -0x1p500}, {-0x1p-500, 0x1p-500}, {1.0, 0.0}, {0.0, -1.0},  {0x1p1000, 0x1p999}};
  double edge_worst = 0.0;
  for (const auto& [a, b] : edge) {
    const double got = net.eval(std::vector<double>{a, b})[0];
    edge_worst = std::max(edge_worst, std::abs(got - std::min(a, b)));
  }
  const double elapsed = seconds_since(t0);

  // Arbitrary doubles: a + b and a - b round, so the error is measured in ulps of max(|a|, |b|).
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BatchMat gen(2, 100000);
  for (int j = 0; j < gen.cols(); ++j) gen(0, j) = u(rng), gen(1, j) = u(rng);
  const BatchMat gout = net.eval_batch(gen);
  double ulps = 0.0;
  long long inexact = 0;
  for (int j = 0; j < gen.cols(); ++j) {
    const double want = std::min(gen(0, j), gen(1, j));
    const double err = std::abs(gout(0, j) - want);
    const double scale = std::max(std::abs(gen(0, j)), std::abs(gen(1, j)));
    if (err > 0) ++inexact;
    ulps = std::max(ulps, err / (std::nextafter(scale, 1e300) - scale));
  }

  Outcome o;
  o.pass = worst == 0.0 && edge_worst == 0.0 && elapsed < 1.0;
  o.detail = fmt("1e6 representable pairs max err %.1e, %zu edge cases max err %.1e, %.2f s; "
                 "arbitrary doubles: %lld/100000 inexact, max %.2f ulp of max(|a|,|b|)",
                 worst, edge.size(), edge_worst, elapsed, inexact, ulps);
  return o;
}

// ------------------------------------------------------------------ AC2

Outcome ac2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto corpus = mesh_corpus(rng);
  Outcome o;
  double worst = 0.0;
  int dims[4] = {0, 0, 0, 0};
  for (const auto& [name, mesh] : corpus) {
    ++dims[mesh.dim()];
    std::vector<double> c(mesh.num_vertices());
    for (auto& x : c) x = u(rng);
    BoundReport r;
    const auto net = compile_fem_deep(mesh, c, &r);
    compiled.add(name, net);
    std::vector<Vec> pts;
    for (int s = 0; s < 10000; ++s) pts.push_back(mesh.sample_point(rng));
    const auto v = verify_points(net, [&](const Vec& x) { return fem_interpolant(mesh, c, x); }, pts, 1e-9);
    worst = std::max(worst, v.max_error);
    const int want_depth = ceil_log2(compute_kh(mesh)) + 1;
    if (!v.ok || net.hidden_layers() != want_depth) {
      o.pass = false;
      o.detail += fmt("[%s: err %.2e depth %d want %d] ", name.c_str(), v.max_error, net.hidden_layers(), want_depth);
    }
  }
  const double elapsed = seconds_since(t0);
  o.pass = o.pass && corpus.size() >= 20 && dims[3] >= 1 && elapsed < 30.0;
  o.detail += fmt("%zu meshes (1D %d, 2D %d, 3D %d), 1e4 samples each, max err %.2e, depth exact, %.2f s",
                  corpus.size(), dims[1], dims[2], dims[3], worst, elapsed);
  return o;
}

// ------------------------------------------------------------------ AC3

Outcome ac3() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(303);
  Outcome o;
  int hats = 0, cpwls = 0;
  double worst = 0.0;
  auto check = [&](const std::string& what, const ShallowResult& r, int d, const std::function<double(const Vec&)>& ref,
                   const std::vector<Vec>& pts) {
    compiled.add(what, r.net);
    const auto v = verify_points(r.net, ref, pts, 1e-9);
    worst = std::max(worst, v.max_error);
    const bool depth = r.max_term_depth <= ceil_log2(d + 1);
    if (!v.ok || !depth || !r.report.size_ok()) {
      o.pass = false;
      o.detail += fmt("[%s: err %.2e term depth %d size %lld] ", what.c_str(), v.max_error, r.max_term_depth,
                      r.report.actual_size);
    }
  };
  for (const auto& [name, mesh] : mesh_corpus(rng)) {
    if (mesh.dim() != 2) continue;
    const Box box = enlarged(mesh.bounding_box(), 0.25);
    for (int i = 0; i < mesh.num_vertices(); ++i) {
      const auto star = vertex_star(mesh, i);
      if (star.incident.size() > 7) continue;
      const auto r = compile_basis_shallow(mesh, star);
      // The hat is defined on the mesh; off the mesh only interior stars have a canonical (zero) extension.
      std::vector<Vec> pts;
      for (int s = 0; s < 2000; ++s) pts.push_back(mesh.sample_point(rng));
      if (!mesh.boundary()[i])
        for (auto& x : box_samples(box, 1000, rng)) pts.push_back(std::move(x));
      check(name + " vertex " + std::to_string(i), r, 2, [&](const Vec& x) { return nodal_basis(mesh, star, x); },
            pts);
      ++hats;
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 2;
    const auto f = random_cpwl(d, 5, rng);
    const auto r = compile_cpwl_shallow(f);
    check("random cpwl " + std::to_string(trial), r, d, [&](const Vec& x) { return eval_pieces(f, x); },
          box_samples(*f.domain, 3000, rng));
    ++cpwls;
  }
  const double elapsed = seconds_since(t0);
  o.pass = o.pass && cpwls >= 10 && hats > 0 && elapsed < 120.0;
  o.detail += fmt("%d hats with |N(i)| <= 7, %d random CPWL, max err %.2e, term depth and size bounds hold, %.2f s",
                  hats, cpwls, worst, elapsed);
  return o;
}

// ------------------------------------------------------------------ AC4

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

Outcome ac4() {
  std::mt19937_64 rng(404);
  Outcome o;
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 2;
    const auto f = random_cpwl(d, 5, rng);
    const int m = static_cast<int>(f.pieces.size());
    const int M = static_cast<int>(unique_order_partition(f).cells.size());
    const auto lu = lattice_from_unique_order(f, unique_order_partition(f));
    const auto lc = lattice_from_convex_regions(f);
    double gap = 0.0;
    for (int s = 0; s < 2000; ++s) {
      const Vec x = sample_box(*f.domain, rng);
      const double want = eval_pieces(f, x);
      gap = std::max({gap, std::abs(eval_lattice(lu, x) - want), std::abs(eval_lattice(lc, x) - want)});
    }
    worst = std::max(worst, gap);
    if (m > M || M > factorial(m) || gap >= 1e-9) {
      o.pass = false;
      o.detail += fmt("[cpwl %d: m=%d M=%d gap %.2e] ", trial, m, M, gap);
    }
  }

  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int tested = 0, rejected = 0;
  while (tested < 100) {
    const int r = 2 + tested % 5;
    std::vector<double> t{0.0}, k;
    for (int i = 0; i < r; ++i) t.push_back(std::abs(u(rng)) / 3.0);
    std::sort(t.begin() + 1, t.end());
    t.push_back(1.0);
    bool spaced = true;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) spaced = spaced && t[i + 1] - t[i] > 1e-3;
    if (!spaced) continue;
    for (int i = 0; i <= r; ++i) k.push_back(u(rng));
    const auto path = cpwl_1d_from_slopes(t, k, u(rng));
    int w = -1;
    try {
      w = verify_1d_path_lemma(path);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PreconditionViolated) throw;
      ++rejected;
      continue;
    }
    // Witness inequalities with l_i(x) = k_i x + b_i on [0, 1].
    const auto& l0 = path.pieces.front();
    const auto& lr = path.pieces.back();
    const auto& lp = path.pieces[w];
    const double b0 = l0.offset, bp = lp.offset, br = lr.offset;
    const double kp = lp.gradient[0], kr = lr.gradient[0];
    const bool ok = bp >= b0 - 1e-12 && kp + bp <= kr + br + 1e-12 && kp == *std::min_element(k.begin(), k.end());
    if (!ok) {
      o.pass = false;
      o.detail += fmt("[path %d: witness %d fails] ", tested, w);
    }
    ++tested;
  }
  o.detail += fmt("40 CPWL: m <= M <= m!, both lattice forms max gap %.2e; path lemma on %d paths (%d rejected draws)",
                  worst, tested, rejected);
  return o;
}

// ------------------------------------------------------------------ AC5

double fir_rhs(double f, double g, double h, double a) {
  const double ab = 1.0 / (1.0 - a);
  const double t = g - ab * h;
  return std::max(f, std::max(1.0, a) * std::max(t, 0.0) + ab * h) +
         std::max(f, std::min(1.0, a) * std::min(t, 0.0) + ab * h) - std::max(f, ab * h);
}

ReluNetwork random_dense_net(int d, int hidden, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> width(1, 4);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Layer> layers;
  int in = d;
  for (int l = 0; l <= hidden; ++l) {
    const int out = l == hidden ? 1 : width(rng);
    Mat w(out, in);
    Vec b(out);
    for (int r = 0; r < out; ++r) {
      b[r] = nd(rng);
      for (int c = 0; c < in; ++c) w(r, c) = nd(rng);
    }
    layers.push_back(Layer::from_dense(w, b));
    in = out;
  }
  return ReluNetwork(d, std::move(layers));
}

Outcome ac5() {
  std::mt19937_64 rng(505);
  Outcome o;
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double fir_worst = 0.0;
  int fir_count = 0;
  while (fir_count < 100000) {
    const double a = u(rng);
    if (std::abs(a - 1.0) < 1e-3) continue;
    const double f = u(rng), g = u(rng), h = u(rng);
    const double want = std::max({f, g, a * g + h});
    fir_worst = std::max(fir_worst, std::abs(fir_rhs(f, g, h, a) - want) / std::max(1.0, std::abs(want)));
    ++fir_count;
  }
  if (fir_worst > 1e-10) o.pass = false;

  // reduce_clause verifies every elimination by sampling internally and throws on a mismatch.
  int reduce_calls = 0, verified = 0;
  double reduce_worst = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + trial % 3;
    const int L = d + 2 + trial % 4;
    std::vector<AffineFunc> ls;
    for (int i = 0; i < L; ++i) ls.push_back(random_affine(d, rng, 2.0));
    std::optional<double> c0;
    if (trial % 2) c0 = u(rng);
    ReduceStats st;
    try {
      const auto terms = reduce_clause(c0, ls, d, &st);
      for (int s = 0; s < 500; ++s) {
        const Vec x = sample_box({Vec::Constant(d, -5), Vec::Constant(d, 5)}, rng);
        double want = c0.value_or(-1e300);
        for (const auto& l : ls) want = std::max(want, l(x));
        reduce_worst = std::max(reduce_worst, std::abs(eval_terms(terms, x) - want) / std::max(1.0, std::abs(want)));
      }
      for (const auto& t : terms)
        if (t.arity() > d + 1) o.pass = false;
    } catch (const Error& e) {
      o.pass = false;
      o.detail += fmt("[reduce %d: %s] ", trial, e.what());
    }
    ++reduce_calls;
    verified += st.verified_steps;
  }
  if (reduce_worst > 1e-9) o.pass = false;

  // Members of one instance share a depth, as in the recursive-halving argument.
  int bound_ok = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const int m = 1 + inst % 8;
    const int k = inst % 4;
    std::vector<ReluNetwork> nets;
    long long sum_s = 0;
    for (int i = 0; i < m; ++i) {
      nets.push_back(random_dense_net(2, k, rng));
      sum_s += nets.back().size();
    }
    BoundReport r;
    const auto net = compile_max_of_m(nets, &r);
    const bool depth = net.depth() <= k + ceil_log2(m) + 1;
    const bool size = net.size() <= sum_s + 4 * (2 * m - 1);
    double gap = 0.0;
    for (const auto& x : box_samples({Vec::Constant(2, -3), Vec::Constant(2, 3)}, 500, rng)) {
      double want = -1e300;
      for (const auto& s : nets) want = std::max(want, s.eval_scalar(x));
      gap = std::max(gap, std::abs(net.eval_scalar(x) - want) / std::max(1.0, std::abs(want)));
    }
    if (depth && size && gap < 1e-9)
      ++bound_ok;
    else
      o.detail += fmt("[max_of_m %d: depth %d size %lld gap %.1e] ", inst, net.depth(), net.size(), gap);
  }
  if (bound_ok != 100) o.pass = false;

  // Mixed member depths need identity carries on the shallower side; reported, not held to the bound.
  long long carries = 0;
  int over = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const int m = 2 + inst % 6;
    std::vector<ReluNetwork> nets;
    long long sum_s = 0;
    int kmax = 0;
    for (int i = 0; i < m; ++i) {
      const int k = static_cast<int>(rng() % 4);
      kmax = std::max(kmax, k);
      nets.push_back(random_dense_net(2, k, rng));
      sum_s += nets.back().size();
    }
    BoundReport r;
    const auto net = compile_max_of_m(nets, &r);
    carries += r.padding_neurons;
    if (net.size() > sum_s + 4 * (2 * m - 1)) ++over;
    if (net.depth() > kmax + ceil_log2(m) + 1 || net.size() > sum_s + 4 * (2 * m - 1) + r.padding_neurons)
      o.pass = false;
  }

  o.detail += fmt("fir %d triples max rel err %.1e; reduce_clause %d calls, %d verified steps, max err %.1e; "
                  "max_of_m %d/100 within depth and size bounds; mixed depths: %d/20 exceed the bound by "
                  "carries only (%lld carry neurons)",
                  fir_count, fir_worst, reduce_calls, verified, reduce_worst, bound_ok, over, carries);
  return o;
}

// ------------------------------------------------------------------ AC6

Outcome ac6() {
  Outcome o;
  std::mt19937_64 rng(606);
  // Random dense members carry arbitrary weights, so max_of_m is audited here on compiled members.
  const auto grid = diagonal_grid(3, 3);
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<ReluNetwork> nets;
    for (int i = 0; i < 1 + inst % 5; ++i) {
      if ((inst + i) % 2)
        nets.push_back(ReluNetwork::affine(random_affine(2, rng, 3.0)));
      else
        nets.push_back(compile_basis_deep(grid, vertex_star(grid, static_cast<int>(rng() % grid.num_vertices()))));
    }
    compiled.add("max_of_m " + std::to_string(inst), compile_max_of_m(nets));
  }
  for (int inst = 0; inst < 10; ++inst) {
    LatticeForm l;
    for (int i = 0; i < 4; ++i) l.pieces.push_back(random_affine(2, rng, 2.0));
    l.clauses = {{0, 1, 2}, {3}, {1, 3}, {0, 2}};
    compiled.add("lattice " + std::to_string(inst), compile_lattice_shallow(l, 2));
  }
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int mismatches = 0;
  const std::vector<QuantGrid> grids{QuantGrid(0, 3), QuantGrid(0, 2), QuantGrid(-1, 4), QuantGrid(2, 5)};
  for (int i = 0; i < 10000; ++i) {
    const double w = u(rng);
    for (const auto& g : grids) {
      const double p = project(w, g);
      // Exhaustive nearest point, ties toward the smaller magnitude.
      double best = g.values().front();
      for (double q : g.values()) {
        const double dq = std::abs(w - q), db = std::abs(w - best);
        if (dq < db || (dq == db && std::abs(q) < std::abs(best))) best = q;
      }
      if (p != best) ++mismatches;
    }
  }
  o.pass = compiled.conforming == compiled.total && compiled.total > 0 && mismatches == 0;
  o.detail = fmt("%lld/%lld compiled networks conform%s; projection vs enumeration: %d mismatches on 1e4 scalars x %zu grids",
                 compiled.conforming, compiled.total,
                 compiled.first_failure.empty() ? "" : (" (first failure: " + compiled.first_failure + ")").c_str(),
                 mismatches, grids.size());
  return o;
}

// ------------------------------------------------------------------ AC7

Outcome ac7() {
  const auto t0 = Clock::now();
  const auto p = gaussian_bump_problem();
  const auto rows = report_table(p, {23, 37, 53}, SolverConfig{});
  const double ufem_err[] = {0.2779, 0.1717, 0.1193}, ufem_e[] = {-0.7047, -0.7285, -0.7362};
  const double dnn_err[] = {0.1094, 0.0663, 0.0456}, dnn_e[] = {-0.7373, -0.7411, -0.7422};
  Outcome o;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool ok = std::abs(r.err_ufem - ufem_err[i]) <= 0.05 * ufem_err[i] &&
                    std::abs(r.e_ufem - ufem_e[i]) <= 0.05 * std::abs(ufem_e[i]) &&
                    std::abs(r.err_dnn - dnn_err[i]) <= 0.15 * dnn_err[i] && std::abs(r.e_dnn - dnn_e[i]) <= 0.002 &&
                    r.e_dnn <= r.e_afem && r.e_afem <= r.e_ufem && r.err_dnn <= r.err_afem && r.err_afem <= r.err_ufem;
    if (!ok) o.pass = false;
    o.detail += fmt("N=%d uFEM %.4f/%.4f AFEM %.4f/%.4f DNN %.4f/%.4f; ", r.N, r.err_ufem, r.e_ufem, r.err_afem, r.e_afem,
                    r.err_dnn, r.e_dnn);
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 300.0) o.pass = false;
  o.detail += fmt("%.2f s", elapsed);
  return o;
}

// ------------------------------------------------------------------ AC8

Outcome ac8() {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> gap(0.2, 1.0);
  std::normal_distribution<double> nd(0.0, 1.0);
  const std::vector<Bvp1dProblem> problems{gaussian_bump_problem(), sine_problem(), constant_problem(1.5)};
  double worst = 0.0;
  for (int s = 0; s < 50; ++s) {
    const auto& p = problems[s % problems.size()];
    const int n = 6 + s % 25;
    std::vector<double> g(n - 1);
    double total = 0.0;
    for (auto& x : g) total += x = gap(rng);
    std::vector<double> t{0.0};
    for (int i = 0; i + 2 < n; ++i) t.push_back(t.back() + g[i] / total);
    t.push_back(1.0);
    std::vector<double> th(n - 1);
    for (auto& x : th) x = nd(rng);
    const auto grad = grad_knots(t, th, p);
    double scale = 1.0;
    for (double x : grad) scale = std::max(scale, std::abs(x));
    for (int j = 1; j + 1 < n; ++j) {
      auto tp = t, tm = t;
      tp[j] += 1e-6;
      tm[j] -= 1e-6;
      const double fd = (energy(tp, th, p) - energy(tm, th, p)) / 2e-6;
      worst = std::max(worst, std::abs(fd - grad[j]) / scale);
    }
  }
  Outcome o;
  o.pass = worst < 1e-6;
  o.detail = fmt("50 random states, max |fd - grad| / max(|grad|_inf, 1) = %.2e", worst);
  return o;
}

// ------------------------------------------------------------------ AC9

Outcome ac9() {
  std::mt19937_64 rng(909);
  Outcome o;
  int full_rank = 0, detected = 0;
  for (int s = 0; s < 100; ++s) {
    const int d = 1 + s % 3;
    const int m = 2 + s % 11;
    std::vector<AffineFunc> params;
    for (int i = 0; i < m; ++i) params.push_back(random_affine(d, rng));
    const auto r = independence_check(params, 50 * m, rng);
    if (r.independent && r.rank == m) ++full_rank;
    std::uniform_int_distribution<int> pick(0, m - 1);
    params.push_back(params[pick(rng)] * (0.5 + static_cast<double>(rng() % 4)));
    try {
      independence_check(params, 50 * (m + 1), rng);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::PairwiseDependent) ++detected;
    }
  }
  o.pass = full_rank == 100 && detected == 100;
  o.detail = fmt("full rank %d/100, planted dependent pair detected %d/100", full_rank, detected);
  return o;
}

// ------------------------------------------------------------------ AC10

int run_cli(const std::string& args) {
  const int status = std::system((std::string(FEMNET_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome ac10() {
  Outcome o;
  std::mt19937_64 rng(1010);
  // Interior vertex whose six pieces are pairwise distinct affines.
  const auto mesh = diagonal_grid(2, 2);
  const int center = 4;
  const auto star = vertex_star(mesh, center);
  const auto hat = compile_basis_deep(mesh, star);
  compiled.add("hat", hat);
  const auto ref = [&](const Vec& x) { return nodal_basis(mesh, star, x); };
  const auto pts = box_samples(enlarged(mesh.bounding_box(), 0.25), 10000, rng);
  const bool base_ok = verify_points(hat, ref, pts, 1e-9).ok;

  // Independent oracle for whether a flip changes the function at all: net against net on a wide grid.
  std::vector<Vec> grid;
  for (int i = 0; i <= 300; ++i)
    for (int j = 0; j <= 300; ++j) grid.push_back((Vec(2) << -50 + i / 3.0, -50 + j / 3.0).finished());
  for (int i = 0; i <= 200; ++i)
    for (int j = 0; j <= 200; ++j) grid.push_back((Vec(2) << -0.5 + i / 100.0, -0.5 + j / 100.0).finished());
  const auto base = hat.eval_points(grid);

  int flips = 0, caught = 0, changing = 0, changing_caught = 0;
  for (std::size_t l = 0; l < hat.layers().size(); ++l) {
    for (int e = 0; e < hat.layers()[l].nnz(); ++e) {
      auto bad = hat;
      auto& v = bad.mutable_layers()[l].val[e];
      v = -v;
      ++flips;
      const bool hit = !verify_points(bad, ref, pts, 1e-9).ok;
      caught += hit;
      const auto out = bad.eval_points(grid);
      bool differs = false;
      for (std::size_t k = 0; k < out.size() && !differs; ++k) differs = std::abs(out[k] - base[k]) > 1e-12;
      changing += differs;
      changing_caught += differs && hit;
    }
  }

  // Once through the command line: the flipped network must exit 2.
  const auto dir = std::filesystem::path(FEMNET_ACCEPTANCE_WORK);
  std::filesystem::create_directories(dir);
  const std::string mesh_path = (dir / "mesh.json").string(), hat_path = (dir / "hat.json").string(),
                    bad_path = (dir / "flipped.json").string();
  io::write_json(mesh_path, io::mesh_to_json(mesh));
  io::write_json(hat_path, io::net_to_json(hat));
  auto bad = hat;
  bad.mutable_layers()[0].val[0] = -bad.mutable_layers()[0].val[0];
  io::write_json(bad_path, io::net_to_json(bad));
  const std::string basis = " --basis " + std::to_string(center);
  const int good_rc = run_cli("verify --net " + hat_path + " --against " + mesh_path + basis);
  const int bad_rc = run_cli("verify --net " + bad_path + " --against " + mesh_path + basis);

  // Demonstration only: best-effort width-50 one-hidden-layer least-squares fit of the hat.
  std::vector<Vec> fit_pts = box_samples(mesh.bounding_box(), 2000, rng);
  std::vector<double> y;
  for (const auto& x : fit_pts) y.push_back(ref(x));
  const auto fit = fit_one_hidden_layer(fit_pts, y, 50, 20, 300, rng);

  const bool sound = base_ok && changing_caught == changing && good_rc == 0 && bad_rc == 2;
  o.pass = sound && caught == flips;
  o.documented = sound && caught < flips;
  o.detail = fmt("%d/%d single-weight flips caught; %d/%d value-changing flips caught, the other %d leave the network "
                 "identical on a 1e5-point grid over [-50,50]^2 (unused gadget branches, unattainable as stated); "
                 "CLI verify exit %d (correct) / %d (flipped); width-50 fit over 20 restarts: best RMS %.3e, "
                 "max err %.3e (reported only)",
                 caught, flips, changing_caught, changing, flips - changing, good_rc, bad_rc, fit.best_rms,
                 fit.best_max_error);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  // AC6 audits every network compiled by the others, so it runs last.
  const std::vector<Criterion> order{{"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
                                     {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC6", ac6}};
  std::vector<std::pair<std::string, Outcome>> results;
  for (const auto& c : order) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    results.emplace_back(c.name, o);
  }
  std::sort(results.begin(), results.end(),
            [](const auto& a, const auto& b) { return std::stoi(a.first.substr(2)) < std::stoi(b.first.substr(2)); });
  int failures = 0;
  for (const auto& [name, o] : results) {
    std::cout << name << ' ' << (o.pass ? "PASS" : "FAIL") << (o.documented ? " (documented)" : "") << "  "
              << o.detail << '\n';
    failures += !o.pass && !o.documented;
  }
  return failures;
}
