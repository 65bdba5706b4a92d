// femnet command-line front end. Exit codes: 0 success, 1 usage or input
// error, 2 verification mismatch or non-conforming structure.

#include "femnet/analysis.hpp"
#include "femnet/compiler.hpp"
#include "femnet/error.hpp"
#include "femnet/galerkin1d.hpp"
#include "femnet/io.hpp"
#include "femnet/quantize.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using namespace femnet;
using io::Json;

namespace {

using Rng = std::mt19937_64;

struct Global {
  std::uint64_t seed = 0;
  bool timing = false;
};

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidInput, "not a number: '" + tok + "'");
    }
  }
  return out;
}

Box box_from_option(const std::string& spec, int d) {
  const auto v = split_numbers(spec);
  if (v.size() != 2 || !(v[0] < v[1])) throw Error(ErrorKind::InvalidInput, "--box expects lo,hi with lo < hi");
  return {Vec::Constant(d, v[0]), Vec::Constant(d, v[1])};
}

Json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Json bound_json(const BoundReport& r) {
  return {{"pathway", to_string(r.pathway)},
          {"predicted_depth", r.predicted_depth},
          {"actual_depth", r.actual_depth},
          {"predicted_size_bound", r.predicted_size_bound.str()},
          {"actual_size", r.actual_size},
          {"padding_neurons", r.padding_neurons},
          {"kh", r.kh},
          {"N", r.N},
          {"m", r.m},
          {"M", r.M},
          {"d", r.d},
          {"depth_ok", r.depth_ok()},
          {"size_ok", r.size_ok()},
          {"derivation", r.derivation}};
}

Json net_stats_json(const ReluNetwork& net) {
  const auto s = net.stats();
  return {{"input_dim", net.input_dim()},
          {"hidden_layers", s.hidden_layers},
          {"size", s.size},
          {"nonzero_params", s.nonzero_params}};
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finish_report(io::RunReport& r, const Global& g, const Timer& t, const std::string& path) {
  if (g.timing) r.wall_time = t.seconds();
  r.config["seed"] = g.seed;
  if (!path.empty()) io::write_json(path, r.to_json());
}

std::vector<double> load_coefficients(const SimplicialMesh& mesh, const std::string& coeffs, std::optional<int> basis) {
  if (basis) {
    if (*basis < 0 || *basis >= mesh.num_vertices()) throw Error(ErrorKind::InvalidInput, "--basis index out of range");
    std::vector<double> c(mesh.num_vertices(), 0.0);
    c[*basis] = 1.0;
    return c;
  }
  if (coeffs.empty()) throw Error(ErrorKind::InvalidInput, "need --coeffs or --basis");
  auto c = io::parse_coefficients(io::read_text(coeffs));
  if (static_cast<int>(c.size()) != mesh.num_vertices())
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(mesh.num_vertices()) + " coefficients, got " +
                                                  std::to_string(c.size()));
  return c;
}

// ------------------------------------------------------------------ commands

struct CompileFemOpts {
  std::string mesh, coeffs, out, report;
  std::optional<int> basis;
};

int compile_fem(const CompileFemOpts& o, const Global& g) {
  Timer timer;
  const auto mesh = io::mesh_from_json(io::read_json(o.mesh));
  const auto c = load_coefficients(mesh, o.coeffs, o.basis);
  BoundReport br;
  const auto net = compile_fem_deep(mesh, c, &br);
  enforce(br);
  io::write_json(o.out, io::net_to_json(net));
  io::RunReport r;
  r.command = "compile-fem";
  r.add_input("mesh", o.mesh);
  if (!o.coeffs.empty() && !o.basis) r.add_input("coeffs", o.coeffs);
  if (o.basis) r.config["basis"] = *o.basis;
  r.results = {{"network", net_stats_json(net)}, {"bounds", bound_json(br)}};
  finish_report(r, g, timer, o.report);
  std::cout << r.results.dump(1) << "\n";
  return 0;
}

struct CompileCpwlOpts {
  std::string input, mesh, out, report;
  std::optional<int> vertex;
  int validate_samples = 2000;
};

int compile_cpwl(const CompileCpwlOpts& o, const Global& g) {
  Timer timer;
  Rng rng(g.seed);
  io::RunReport r;
  r.command = "compile-cpwl";
  ReluNetwork net;
  if (!o.mesh.empty()) {
    if (!o.vertex) throw Error(ErrorKind::InvalidInput, "--mesh needs --vertex");
    const auto mesh = io::mesh_from_json(io::read_json(o.mesh));
    if (*o.vertex < 0 || *o.vertex >= mesh.num_vertices()) throw Error(ErrorKind::InvalidInput, "--vertex out of range");
    r.add_input("mesh", o.mesh);
    const auto res = compile_basis_shallow(mesh, vertex_star(mesh, *o.vertex));
    enforce(res.report);
    net = res.net;
    r.results = {{"bounds", bound_json(res.report)},
                 {"expanded_terms", res.expanded_terms},
                 {"reduced_terms", res.reduced_terms},
                 {"max_term_depth", res.max_term_depth}};
  } else {
    if (o.input.empty()) throw Error(ErrorKind::InvalidInput, "need --cpwl or --mesh/--vertex");
    const Json j = io::read_json(o.input);
    r.add_input("source", o.input);
    const std::string kind = io::schema_kind(j);
    if (kind == "lattice") {
      const auto lat = io::lattice_from_json(j);
      BoundReport br;
      net = compile_lattice_shallow(lat, lat.dim(), &br);
      enforce(br);
      r.results = {{"bounds", bound_json(br)}};
    } else if (kind == "cpwl") {
      const auto f = io::cpwl_from_json(j);
      validate_pieces(f, rng, o.validate_samples);
      const auto res = compile_cpwl_shallow(f);
      enforce(res.report);
      net = res.net;
      r.results = {{"bounds", bound_json(res.report)},
                   {"lattice_clauses", res.lattice.clauses.size()},
                   {"expanded_terms", res.expanded_terms},
                   {"reduced_terms", res.reduced_terms},
                   {"max_term_depth", res.max_term_depth},
                   {"reduce_eliminations", res.reduce.eliminations},
                   {"reduce_worst_identity_error", res.reduce.worst_identity_error}};
    } else {
      throw Error(ErrorKind::InvalidInput, "compile-cpwl takes a cpwl or lattice document, got " + kind);
    }
  }
  r.results["network"] = net_stats_json(net);
  io::write_json(o.out, io::net_to_json(net));
  finish_report(r, g, timer, o.report);
  std::cout << r.results.dump(1) << "\n";
  return 0;
}

struct EvalOpts {
  std::string net, points, out;
  std::vector<std::string> xs;
};

int eval_cmd(const EvalOpts& o) {
  const auto net = io::net_from_json(io::read_json(o.net));
  std::vector<Vec> pts;
  auto add = [&](const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != net.input_dim())
      throw Error(ErrorKind::DimensionMismatch, "point has " + std::to_string(v.size()) + " coordinates, net takes " +
                                                    std::to_string(net.input_dim()));
    pts.push_back(Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  for (const auto& x : o.xs) add(split_numbers(x));
  if (!o.points.empty()) {
    std::istringstream in(io::read_text(o.points));
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        add(split_numbers(line));
      } catch (const Error& e) {
        if (!first || e.kind() != ErrorKind::InvalidInput) throw;  // a non-numeric first line is a header
      }
      first = false;
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << "value\n";
  for (double v : net.eval_points(pts)) os << v << '\n';
  if (o.out.empty())
    std::cout << os.str();
  else
    io::write_text(o.out, os.str());
  return 0;
}

struct VerifyOpts {
  std::string net, against, coeffs, box, report;
  std::optional<int> basis;
  int samples = 10000;
  double tol = 1e-9;
};

int verify_cmd(const VerifyOpts& o, const Global& g) {
  Timer timer;
  Rng rng(g.seed);
  const auto net = io::net_from_json(io::read_json(o.net));
  const Json src = io::read_json(o.against);
  const std::string kind = io::schema_kind(src);
  std::vector<Vec> pts;
  std::function<double(const Vec&)> ref;
  std::optional<SimplicialMesh> mesh;
  std::optional<CpwlPieces> cpwl;
  std::optional<LatticeForm> lat;
  std::vector<double> coeffs;
  auto sample_box = [&](const Box& b) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < o.samples; ++s) {
      Vec x(b.dim());
      for (int i = 0; i < b.dim(); ++i) x(i) = b.lo(i) + (b.hi(i) - b.lo(i)) * u(rng);
      pts.push_back(x);
    }
  };
  if (kind == "mesh") {
    mesh = io::mesh_from_json(src);
    coeffs = load_coefficients(*mesh, o.coeffs, o.basis);
    ref = [&](const Vec& x) { return fem_interpolant(*mesh, coeffs, x); };
    for (int s = 0; s < o.samples; ++s) pts.push_back(mesh->sample_point(rng));
    for (const auto& v : mesh->vertices()) pts.push_back(v);
  } else if (kind == "cpwl") {
    cpwl = io::cpwl_from_json(src);
    ref = [&](const Vec& x) { return eval_pieces(*cpwl, x); };
    if (!o.box.empty())
      sample_box(box_from_option(o.box, cpwl->dim));
    else if (cpwl->domain)
      sample_box(*cpwl->domain);
    else
      throw Error(ErrorKind::InvalidInput, "cpwl has no domain box; pass --box");
  } else if (kind == "lattice") {
    lat = io::lattice_from_json(src);
    ref = [&](const Vec& x) { return eval_lattice(*lat, x); };
    sample_box(box_from_option(o.box.empty() ? "-1,1" : o.box, lat->dim()));
  } else {
    throw Error(ErrorKind::InvalidInput, "cannot verify against a " + kind + " document");
  }
  if (net.input_dim() != (pts.empty() ? net.input_dim() : static_cast<int>(pts.front().size())))
    throw Error(ErrorKind::DimensionMismatch, "network input dimension differs from the source");
  const auto v = verify_points(net, ref, pts, o.tol);
  Json out = {{"ok", v.ok},
              {"source_kind", kind},
              {"samples", v.samples},
              {"tolerance", o.tol},
              {"max_error", v.max_error},
              {"worst", {{"x", vec_json(v.worst_x)}, {"net", v.worst_net}, {"reference", v.worst_ref},
                         {"diff", v.worst_net - v.worst_ref}}}};
  io::RunReport r;
  r.command = "verify";
  r.add_input("net", o.net);
  r.add_input("against", o.against);
  r.config = {{"samples", o.samples}, {"tol", o.tol}};
  r.results = out;
  finish_report(r, g, timer, o.report);
  std::cout << out.dump(1) << "\n";
  return v.ok ? 0 : 2;
}

struct QuantizeOpts {
  std::string net, grid, out;
};

int quantize_cmd(const QuantizeOpts& o) {
  const auto kl = split_numbers(o.grid);
  if (kl.size() != 2 || kl[0] != std::floor(kl[0]) || kl[1] != std::floor(kl[1]))
    throw Error(ErrorKind::InvalidInput, "--grid expects two integers k,l");
  const QuantGrid grid(static_cast<int>(kl[0]), static_cast<int>(kl[1]));
  const auto net = io::net_from_json(io::read_json(o.net));
  const auto q = quantize_network(net, grid);
  io::write_json(o.out, io::net_to_json(q));
  double moved = 0.0;
  for (int l = 1; l < net.depth(); ++l)
    moved = std::max(moved, (net.layers()[l].dense() - q.layers()[l].dense()).cwiseAbs().maxCoeff());
  std::cout << Json{{"grid", grid.values()}, {"max_weight_change", moved}}.dump(1) << "\n";
  return 0;
}

struct CheckOpts {
  std::string net, report;
  double tol = 0.0;
};

int check_structured_cmd(const CheckOpts& o, const Global& g) {
  Timer timer;
  const auto net = io::net_from_json(io::read_json(o.net));
  const auto rep = check_structured(net, o.tol);
  Json off = Json::array();
  for (const auto& e : rep.offending)
    off.push_back({{"layer", e.layer}, {"row", e.row}, {"col", e.col}, {"value", e.value}});
  Json out = {{"conforms", rep.conforms},
              {"offending", off},
              {"layers_checked", {rep.first_layer_checked, rep.last_layer_checked}},
              {"tolerance", o.tol}};
  if (!rep.warning.empty()) {
    out["warning"] = rep.warning;
    std::cerr << "warning: " << rep.warning << "\n";
  }
  io::RunReport r;
  r.command = "check-structured";
  r.add_input("net", o.net);
  r.results = out;
  finish_report(r, g, timer, o.report);
  std::cout << out.dump(1) << "\n";
  return rep.conforms ? 0 : 2;
}

struct BvpOpts {
  std::string problem = "bump", init = "afem", out, trace, net;
  SolverConfig config;
};

InitGrid parse_init(const std::string& s) {
  if (s == "afem") return InitGrid::Afem;
  if (s == "uniform") return InitGrid::Uniform;
  throw Error(ErrorKind::InvalidInput, "--init must be afem or uniform");
}

int solve_bvp_cmd(BvpOpts o, const Global& g) {
  Timer timer;
  const auto p = problem_by_name(o.problem);
  o.config.init = parse_init(o.init);
  const auto s = solve_algorithm1(p, o.config);
  const Json out = {{"schema", "femnet.bvp_state"},
                    {"version", 1},
                    {"problem", p.name},
                    {"N", o.config.N},
                    {"t", s.t},
                    {"theta", s.theta},
                    {"energy", s.energy},
                    {"h1_error", s.h1_error},
                    {"iterations", s.iterations},
                    {"stalled", s.stalled},
                    {"boundary_residual", boundary_residual(s.t, s.theta)}};
  if (!o.out.empty()) io::write_json(o.out, out);
  if (!o.trace.empty()) io::write_text(o.trace, trajectory_csv(s));
  if (!o.net.empty()) io::write_json(o.net, io::net_to_json(dnn_representation(s.t, s.theta)));
  if (s.stalled) std::cerr << "warning: line search stalled after " << s.iterations << " iterations\n";
  Json summary = {{"N", o.config.N},
                  {"energy", s.energy},
                  {"h1_error", s.h1_error},
                  {"iterations", s.iterations},
                  {"stalled", s.stalled}};
  if (g.timing) summary["wall_time"] = timer.seconds();
  std::cout << summary.dump(1) << "\n";
  return 0;
}

struct ReportOpts {
  std::string problem = "bump", init = "afem", Ns = "23,37,53";
  std::vector<std::string> out;
  SolverConfig config;
};

int report_cmd(ReportOpts o) {
  std::vector<int> Ns;
  for (double v : split_numbers(o.Ns)) {
    if (v != std::floor(v) || v < 3) throw Error(ErrorKind::InvalidInput, "--N values must be integers >= 3");
    Ns.push_back(static_cast<int>(v));
  }
  o.config.init = parse_init(o.init);
  const auto rows = report_table(problem_by_name(o.problem), Ns, o.config);
  const std::string md = table_markdown(rows);
  for (const auto& path : o.out) {
    const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
    io::write_text(path, csv ? table_csv(rows) : md);
  }
  std::cout << md;
  return 0;
}

struct RegionOpts {
  std::string net, random_widths, box = "-1,1", out;
  int resolution = 200;
};

int region_plot_cmd(const RegionOpts& o, const Global& g) {
  ReluNetwork net;
  if (!o.random_widths.empty()) {
    Rng rng(g.seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<int> w{2};
    for (double v : split_numbers(o.random_widths)) w.push_back(static_cast<int>(v));
    w.push_back(1);
    std::vector<Layer> layers;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      layers.push_back(Layer::from_dense(Mat::NullaryExpr(w[i + 1], w[i], [&] { return nd(rng); }),
                                         Vec::NullaryExpr(w[i + 1], [&] { return nd(rng); })));
    net = ReluNetwork(2, std::move(layers));
  } else if (!o.net.empty()) {
    net = io::net_from_json(io::read_json(o.net));
  } else {
    throw Error(ErrorKind::InvalidInput, "need --net or --random-widths");
  }
  const auto grid = region_plot(net, box_from_option(o.box, 2), o.resolution);
  const std::string csv = region_plot_csv(grid);
  if (o.out.empty())
    std::cout << csv;
  else
    io::write_text(o.out, csv);
  const long long hidden = net.size();
  std::cerr << Json{{"num_labels", grid.num_labels}, {"hidden_neurons", hidden}}.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile finite element and CPWL functions into ReLU networks, verify them, and run the 1D DNN-Galerkin study."};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "Seed for every random sampler")->capture_default_str();
  app.add_flag("--timing", g.timing, "Record wall time in reports (makes them non-reproducible)");
  {
    Json v = {{"femnet", io::kVersion}, {"schemas", io::schema_versions()}};
    app.set_version_flag("--version", v.dump());
  }

  CompileFemOpts cf;
  auto* s_cf = app.add_subcommand("compile-fem", "Deep compile of sum nu_i phi_i on a simplicial mesh");
  s_cf->add_option("--mesh", cf.mesh, "Mesh JSON")->required();
  auto* cf_coeffs = s_cf->add_option("--coeffs", cf.coeffs, "Nodal coefficients CSV");
  s_cf->add_option("--basis", cf.basis, "Compile the single basis function of this vertex")->excludes(cf_coeffs);
  s_cf->add_option("-o,--out", cf.out, "Output network JSON")->required();
  s_cf->add_option("--report", cf.report, "Run report JSON");

  CompileCpwlOpts cc;
  auto* s_cc = app.add_subcommand("compile-cpwl", "Shallow compile of a CPWL, lattice or basis function");
  auto* cc_in = s_cc->add_option("--cpwl", cc.input, "CPWL or lattice JSON");
  s_cc->add_option("--mesh", cc.mesh, "Mesh JSON (with --vertex)")->excludes(cc_in);
  s_cc->add_option("--vertex", cc.vertex, "Vertex whose basis function is compiled");
  s_cc->add_option("--validate-samples", cc.validate_samples, "Coverage samples when validating a CPWL")
      ->capture_default_str();
  s_cc->add_option("-o,--out", cc.out, "Output network JSON")->required();
  s_cc->add_option("--report", cc.report, "Run report JSON");

  EvalOpts ev;
  auto* s_ev = app.add_subcommand("eval", "Evaluate a network");
  s_ev->add_option("--net", ev.net, "Network JSON")->required();
  s_ev->add_option("--points", ev.points, "CSV with one point per line");
  s_ev->add_option("--x", ev.xs, "A point as comma-separated coordinates (repeatable)");
  s_ev->add_option("-o,--out", ev.out, "Output CSV (default stdout)");

  VerifyOpts vf;
  auto* s_vf = app.add_subcommand("verify", "Compare a network with its source by sampling (exit 2 on mismatch)");
  s_vf->add_option("--net", vf.net, "Network JSON")->required();
  s_vf->add_option("--against", vf.against, "Mesh, CPWL or lattice JSON (kind read from the file)")->required();
  s_vf->add_option("--coeffs", vf.coeffs, "Nodal coefficients CSV (mesh sources)");
  s_vf->add_option("--basis", vf.basis, "Single basis function (mesh sources)");
  s_vf->add_option("--samples", vf.samples, "Random samples")->capture_default_str();
  s_vf->add_option("--tol", vf.tol, "Absolute tolerance")->capture_default_str();
  s_vf->add_option("--box", vf.box, "Sampling box lo,hi for CPWL or lattice sources");
  s_vf->add_option("--report", vf.report, "Run report JSON");

  QuantizeOpts qz;
  auto* s_qz = app.add_subcommand("quantize", "Project weights of layers 1.. onto Q_{k,l}");
  s_qz->add_option("--net", qz.net, "Network JSON")->required();
  s_qz->add_option("--grid", qz.grid, "k,l")->required();
  s_qz->add_option("-o,--out", qz.out, "Output network JSON")->required();

  CheckOpts ck;
  auto* s_ck = app.add_subcommand("check-structured", "Check the low-bit structured form (exit 2 if it fails)");
  s_ck->add_option("--net", ck.net, "Network JSON")->required();
  s_ck->add_option("--tol", ck.tol, "Membership tolerance (0 = exact)")->capture_default_str();
  s_ck->add_option("--report", ck.report, "Run report JSON");

  BvpOpts bv;
  auto* s_bv = app.add_subcommand("solve-bvp", "Alternating Galerkin solve and knot descent for -u'' = f, u(0) = u(1) = 0");
  s_bv->add_option("--problem", bv.problem, "bump, sine or constant")->capture_default_str();
  s_bv->add_option("--N", bv.config.N, "Grid points including both ends")->capture_default_str();
  s_bv->add_option("--max-iter", bv.config.max_iter)->capture_default_str();
  s_bv->add_option("--eta", bv.config.eta, "Initial line-search step")->capture_default_str();
  s_bv->add_option("--init", bv.init, "afem or uniform")->capture_default_str();
  s_bv->add_option("--out", bv.out, "State JSON");
  s_bv->add_option("--trace", bv.trace, "Knot trajectory CSV");
  s_bv->add_option("--net", bv.net, "One-hidden-layer network JSON of the final state");

  ReportOpts rp;
  auto* s_rp = app.add_subcommand("report", "Uniform FEM, AFEM and DNN columns for several N");
  s_rp->add_option("--N", rp.Ns, "Comma-separated grid sizes")->capture_default_str();
  s_rp->add_option("--out", rp.out, "Output files; .csv gets CSV, anything else Markdown")->expected(0, -1);
  s_rp->add_option("--problem", rp.problem)->capture_default_str();
  s_rp->add_option("--max-iter", rp.config.max_iter)->capture_default_str();
  s_rp->add_option("--eta", rp.config.eta)->capture_default_str();
  s_rp->add_option("--init", rp.init, "afem or uniform")->capture_default_str();

  RegionOpts rg;
  auto* s_rg = app.add_subcommand("demo-region-plot", "Activation-pattern labels of a 2D network on a grid");
  auto* rg_net = s_rg->add_option("--net", rg.net, "Network JSON");
  s_rg->add_option("--random-widths", rg.random_widths, "Random net with these hidden widths, e.g. 5,5")
      ->excludes(rg_net);
  s_rg->add_option("--resolution", rg.resolution)->capture_default_str();
  s_rg->add_option("--box", rg.box, "lo,hi")->capture_default_str();
  s_rg->add_option("-o,--out", rg.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*s_cf) return compile_fem(cf, g);
    if (*s_cc) return compile_cpwl(cc, g);
    if (*s_ev) return eval_cmd(ev);
    if (*s_vf) return verify_cmd(vf, g);
    if (*s_qz) return quantize_cmd(qz);
    if (*s_ck) return check_structured_cmd(ck, g);
    if (*s_bv) return solve_bvp_cmd(bv, g);
    if (*s_rp) return report_cmd(rp);
    if (*s_rg) return region_plot_cmd(rg, g);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
