#include "femnet/galerkin1d.hpp"

#include "femnet/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

namespace femnet {

const std::array<double, 5>& gauss_nodes() {
  static const std::array<double, 5> x{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                       0.9061798459386640};
  return x;
}

const std::array<double, 5>& gauss_weights() {
  static const std::array<double, 5> w{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                       0.4786286704993665, 0.2369268850561891};
  return w;
}

Bvp1dProblem gaussian_bump_problem(double K) {
  const double c = std::exp(-4.0 / 9.0 / K);
  Bvp1dProblem p;
  p.name = "bump";
  p.u = [=](double x) { return x * (std::exp(-(x - 1.0 / 3) * (x - 1.0 / 3) / K) - c); };
  p.du = [=](double x) {
    const double e = std::exp(-(x - 1.0 / 3) * (x - 1.0 / 3) / K);
    const double s = -2.0 * (x - 1.0 / 3) / K;
    return (e - c) + x * e * s;
  };
  // u'' = 2 e s + x e (s^2 - 2/K), u''' = 3 e (s^2 - 2/K) + x e s (s^2 - 6/K), with e' = e s.
  p.f = [=](double x) {
    const double e = std::exp(-(x - 1.0 / 3) * (x - 1.0 / 3) / K);
    const double s = -2.0 * (x - 1.0 / 3) / K;
    return -(2.0 * e * s + x * e * (s * s - 2.0 / K));
  };
  p.df = [=](double x) {
    const double e = std::exp(-(x - 1.0 / 3) * (x - 1.0 / 3) / K);
    const double s = -2.0 * (x - 1.0 / 3) / K;
    return -(3.0 * e * (s * s - 2.0 / K) + x * e * s * (s * s - 6.0 / K));
  };
  return p;
}

Bvp1dProblem sine_problem() {
  constexpr double pi = std::numbers::pi;
  Bvp1dProblem p;
  p.name = "sine";
  p.u = [](double x) { return std::sin(pi * x); };
  p.du = [](double x) { return pi * std::cos(pi * x); };
  p.f = [](double x) { return pi * pi * std::sin(pi * x); };
  p.df = [](double x) { return pi * pi * pi * std::cos(pi * x); };
  return p;
}

Bvp1dProblem constant_problem(double c) {
  Bvp1dProblem p;
  p.name = "constant";
  p.u = [=](double x) { return 0.5 * c * x * (1.0 - x); };
  p.du = [=](double x) { return c * (0.5 - x); };
  p.f = [=](double) { return c; };
  p.df = [](double) { return 0.0; };
  return p;
}

Bvp1dProblem problem_by_name(const std::string& name) {
  if (name == "bump") return gaussian_bump_problem();
  if (name == "sine") return sine_problem();
  if (name == "constant") return constant_problem();
  throw Error(ErrorKind::InvalidInput, "unknown problem '" + name + "' (bump, sine, constant)");
}

std::vector<double> uniform_grid(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "a grid needs at least two points");
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = static_cast<double>(i) / (n - 1);
  t.back() = 1.0;
  return t;
}

void validate_knots(const std::vector<double>& t) {
  if (t.size() < 2 || t.front() != 0.0 || t.back() != 1.0)
    throw Error(ErrorKind::KnotOrderViolated, "knots must start at 0 and end at 1");
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i + 1] == t[i]) throw Error(ErrorKind::SingularSystem, "repeated knot at " + std::to_string(t[i]));
    if (!(t[i + 1] > t[i])) throw Error(ErrorKind::KnotOrderViolated, "knots not increasing at index " + std::to_string(i));
  }
}

namespace {

void check_sizes(const std::vector<double>& t, const std::vector<double>& theta) {
  if (theta.size() + 1 != t.size())
    throw Error(ErrorKind::DimensionMismatch, "need one slope per element");
}

// Sum over quadrature points of w_q * fn(x_q) on [a, a + h], scaled by h / 2.
template <class Fn>
double quad(double a, double h, Fn&& fn) {
  double s = 0.0;
  for (int q = 0; q < 5; ++q) {
    const double sq = 0.5 * (1.0 + gauss_nodes()[q]);
    s += gauss_weights()[q] * fn(a + h * sq, sq);
  }
  return 0.5 * h * s;
}

}  // namespace

std::vector<double> nodal_values(const std::vector<double>& t, const std::vector<double>& theta) {
  check_sizes(t, theta);
  std::vector<double> U(t.size(), 0.0);
  for (std::size_t e = 0; e < theta.size(); ++e) U[e + 1] = U[e] + theta[e] * (t[e + 1] - t[e]);
  return U;
}

double boundary_residual(const std::vector<double>& t, const std::vector<double>& theta) {
  return nodal_values(t, theta).back();
}

double eval_state(const std::vector<double>& t, const std::vector<double>& theta, double x) {
  const auto U = nodal_values(t, theta);
  const auto it = std::upper_bound(t.begin(), t.end(), x);
  const std::size_t e = std::clamp<std::size_t>(static_cast<std::size_t>(it - t.begin()), 1, theta.size()) - 1;
  return U[e] + theta[e] * (x - t[e]);
}

double energy(const std::vector<double>& t, const std::vector<double>& theta, const Bvp1dProblem& p) {
  validate_knots(t);
  const auto U = nodal_values(t, theta);
  double E = 0.0;
  for (std::size_t e = 0; e < theta.size(); ++e) {
    const double h = t[e + 1] - t[e];
    E += 0.5 * theta[e] * theta[e] * h;
    E -= quad(t[e], h, [&](double x, double sq) { return p.f(x) * (U[e] + theta[e] * h * sq); });
  }
  return E;
}

double h1_error(const std::vector<double>& t, const std::vector<double>& theta, const Bvp1dProblem& p) {
  validate_knots(t);
  check_sizes(t, theta);
  double s = 0.0;
  for (std::size_t e = 0; e < theta.size(); ++e) {
    s += quad(t[e], t[e + 1] - t[e], [&](double x, double) {
      const double d = p.du(x) - theta[e];
      return d * d;
    });
  }
  return std::sqrt(s);
}

std::vector<double> solve_fem_on_grid(const std::vector<double>& t, const Bvp1dProblem& p) {
  validate_knots(t);
  const int ne = static_cast<int>(t.size()) - 1;
  const int n = ne - 1;  // interior unknowns
  std::vector<double> diag(std::max(n, 0), 0.0), off(std::max(n - 1, 0), 0.0), rhs(std::max(n, 0), 0.0);
  for (int e = 0; e < ne; ++e) {
    const double h = t[e + 1] - t[e];
    // Local unknowns e - 1 (left node) and e (right node).
    const double fl = quad(t[e], h, [&](double x, double sq) { return p.f(x) * (1.0 - sq); });
    const double fr = quad(t[e], h, [&](double x, double sq) { return p.f(x) * sq; });
    if (e - 1 >= 0) {
      diag[e - 1] += 1.0 / h;
      rhs[e - 1] += fl;
    }
    if (e < n) {
      diag[e] += 1.0 / h;
      rhs[e] += fr;
    }
    if (e - 1 >= 0 && e < n) off[e - 1] -= 1.0 / h;
  }
  // Thomas algorithm; the stiffness matrix is symmetric positive definite.
  for (int i = 1; i < n; ++i) {
    const double m = off[i - 1] / diag[i - 1];
    diag[i] -= m * off[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> U(ne + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double v = rhs[i];
    if (i + 1 < n) v -= off[i] * U[i + 2];
    if (!(diag[i] > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::SingularSystem, "stiffness system is singular");
    U[i + 1] = v / diag[i];
  }
  std::vector<double> theta(ne);
  for (int e = 0; e < ne; ++e) theta[e] = (U[e + 1] - U[e]) / (t[e + 1] - t[e]);
  return theta;
}

std::vector<double> grad_knots(const std::vector<double>& t, const std::vector<double>& theta, const Bvp1dProblem& p) {
  validate_knots(t);
  const auto U = nodal_values(t, theta);
  const int ne = static_cast<int>(theta.size());
  // F[e] = quadrature of f over element e; suffix[e] = sum_{k >= e} F[k].
  std::vector<double> F(ne), suffix(ne + 1, 0.0);
  for (int e = 0; e < ne; ++e) F[e] = quad(t[e], t[e + 1] - t[e], [&](double x, double) { return p.f(x); });
  for (int e = ne - 1; e >= 0; --e) suffix[e] = suffix[e + 1] + F[e];

  // Derivative of the load term of element e when its left end moves by
  // dl and its right end by dr, with dU the change of U[e].
  auto dload = [&](int e, double dl, double dr, double dU) {
    const double a = t[e], h = t[e + 1] - t[e], dh = dr - dl;
    double s = 0.0;
    for (int q = 0; q < 5; ++q) {
      const double sq = 0.5 * (1.0 + gauss_nodes()[q]);
      const double x = a + h * sq;
      const double dx = dl * (1.0 - sq) + dr * sq;
      const double v = U[e] + theta[e] * h * sq;
      const double dv = dU + theta[e] * dh * sq;
      s += gauss_weights()[q] * (0.5 * dh * p.f(x) * v + 0.5 * h * (p.df(x) * dx * v + p.f(x) * dv));
    }
    return s;
  };

  std::vector<double> g(t.size(), 0.0);
  for (int j = 1; j < ne; ++j) {
    const double stiff = 0.5 * (theta[j - 1] * theta[j - 1] - theta[j] * theta[j]);
    const double load = dload(j - 1, 0.0, 1.0, 0.0) + dload(j, 1.0, 0.0, theta[j - 1]) +
                        (theta[j - 1] - theta[j]) * suffix[j + 1];
    g[j] = stiff - load;
  }
  return g;
}

Bvp1dState fem_state(std::vector<double> t, const Bvp1dProblem& p) {
  Bvp1dState s;
  s.theta = solve_fem_on_grid(t, p);
  s.t = std::move(t);
  s.energy = energy(s.t, s.theta, p);
  s.h1_error = h1_error(s.t, s.theta, p);
  s.knot_history.push_back(s.t);
  return s;
}

Bvp1dState solve_afem(const Bvp1dProblem& p, int target_N, int initial_points, double fraction) {
  if (target_N < initial_points)
    throw Error(ErrorKind::TargetUnreachable, "target " + std::to_string(target_N) + " is below the initial grid of " +
                                                  std::to_string(initial_points) + " points");
  std::vector<double> t = uniform_grid(initial_points);
  while (static_cast<int>(t.size()) < target_N) {
    const auto theta = solve_fem_on_grid(t, p);
    const int ne = static_cast<int>(theta.size());
    std::vector<double> eta(ne);
    for (int e = 0; e < ne; ++e)
      eta[e] = quad(t[e], t[e + 1] - t[e], [&](double x, double) {
        const double d = p.du(x) - theta[e];
        return d * d;
      });
    std::vector<int> order(ne);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return eta[a] > eta[b]; });
    const double total = std::accumulate(eta.begin(), eta.end(), 0.0);
    std::vector<int> marked;
    double acc = 0.0;
    for (int e : order) {
      marked.push_back(e);
      acc += eta[e];
      if (acc >= fraction * total) break;
    }
    // Mark fewer on the last pass so the count lands on target_N exactly.
    marked.resize(std::min<std::size_t>(marked.size(), target_N - t.size()));
    for (int e : marked) t.push_back(0.5 * (t[e] + t[e + 1]));
    std::sort(t.begin(), t.end());
  }
  return fem_state(std::move(t), p);
}

Bvp1dState solve_algorithm1(const Bvp1dProblem& p, const SolverConfig& c, std::optional<std::vector<double>> initial) {
  if (c.N < 3 || c.eta <= 0 || c.max_iter < 0 || c.backtrack <= 0 || c.backtrack >= 1 || c.gap_floor <= 0)
    throw Error(ErrorKind::InvalidInput, "solver configuration out of range");
  std::vector<double> t;
  if (initial)
    t = std::move(*initial);
  else if (c.init == InitGrid::Afem)
    t = solve_afem(p, c.N, std::min(c.afem_initial_points, c.N)).t;
  else
    t = uniform_grid(c.N);

  Bvp1dState s = fem_state(std::move(t), p);
  double E = s.energy;
  auto norm2 = [](const std::vector<double>& v) { return std::inner_product(v.begin(), v.end(), v.begin(), 0.0); };
  int k = 0;
  for (; k < c.max_iter; ++k) {
    const auto g = grad_knots(s.t, s.theta, p);
    const double gg = norm2(g);
    if (std::sqrt(gg) < c.grad_tol) break;
    double eta = c.eta;
    bool accepted = false;
    std::vector<double> tn(s.t.size()), thn;
    double En = E;
    while (eta >= c.min_eta) {
      for (std::size_t i = 0; i < tn.size(); ++i) tn[i] = s.t[i] - eta * g[i];
      tn.front() = 0.0;
      tn.back() = 1.0;
      bool gaps_ok = true;
      for (std::size_t i = 0; i + 1 < tn.size(); ++i) gaps_ok = gaps_ok && tn[i + 1] - tn[i] >= c.gap_floor;
      if (gaps_ok) {
        thn = solve_fem_on_grid(tn, p);
        En = energy(tn, thn, p);
        if (En <= E - c.armijo_c * eta * gg) {
          accepted = true;
          break;
        }
      }
      eta *= c.backtrack;
    }
    s.trace.push_back({k, E, std::sqrt(gg), accepted ? eta : 0.0});
    if (!accepted) {
      s.stalled = true;
      break;
    }
    s.t = tn;
    s.theta = std::move(thn);
    E = En;
    s.knot_history.push_back(s.t);
  }
  s.iterations = static_cast<int>(s.knot_history.size()) - 1;
  s.energy = E;
  s.h1_error = h1_error(s.t, s.theta, p);
  if (!s.stalled) {
    const auto g = grad_knots(s.t, s.theta, p);
    s.trace.push_back({k, E, std::sqrt(norm2(g)), 0.0});
  }
  return s;
}

std::vector<TableRow> report_table(const Bvp1dProblem& p, const std::vector<int>& Ns, const SolverConfig& base) {
  std::vector<TableRow> rows;
  for (int N : Ns) {
    TableRow r;
    r.N = N;
    const auto uf = fem_state(uniform_grid(N), p);
    const auto af = solve_afem(p, N, std::min(base.afem_initial_points, N));
    SolverConfig c = base;
    c.N = N;
    const auto dnn = solve_algorithm1(p, c, c.init == InitGrid::Afem ? std::optional(af.t) : std::nullopt);
    r.err_ufem = uf.h1_error;
    r.err_afem = af.h1_error;
    r.err_dnn = dnn.h1_error;
    r.e_ufem = uf.energy;
    r.e_afem = af.energy;
    r.e_dnn = dnn.energy;
    r.dnn_iterations = dnn.iterations;
    rows.push_back(r);
  }
  return rows;
}

namespace {

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "N,h1_ufem,h1_afem,h1_dnn,energy_ufem,energy_afem,energy_dnn,dnn_iterations\n";
  os.precision(10);
  for (const auto& r : rows)
    os << r.N << ',' << r.err_ufem << ',' << r.err_afem << ',' << r.err_dnn << ',' << r.e_ufem << ',' << r.e_afem
       << ',' << r.e_dnn << ',' << r.dnn_iterations << '\n';
  return os.str();
}

std::string table_markdown(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "| N | \\|u_uFEM - u\\|_1 | \\|u_AFEM - u\\|_1 | \\|u_DNN - u\\|_1 | E(u_uFEM) | E(u_AFEM) | E(u_DNN) |\n";
  os << "|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows)
    os << "| " << r.N << " | " << fmt(r.err_ufem, 4) << " | " << fmt(r.err_afem, 4) << " | " << fmt(r.err_dnn, 4)
       << " | " << fmt(r.e_ufem, 4) << " | " << fmt(r.e_afem, 4) << " | " << fmt(r.e_dnn, 4) << " |\n";
  return os.str();
}

ReluNetwork dnn_representation(const std::vector<double>& t, const std::vector<double>& theta) {
  check_sizes(t, theta);
  const int ne = static_cast<int>(theta.size());
  Mat w0 = Mat::Ones(ne, 1);
  Vec b0(ne);
  Mat w1(1, ne);
  for (int i = 0; i < ne; ++i) {
    b0(i) = -t[i];
    w1(0, i) = i == 0 ? theta[0] : theta[i] - theta[i - 1];
  }
  return ReluNetwork(1, {Layer::from_dense(w0, b0), Layer::from_dense(w1, Vec::Zero(1))});
}

std::string trajectory_csv(const Bvp1dState& s) {
  std::ostringstream os;
  os.precision(12);
  os << "iter,energy,grad_norm,eta";
  const std::size_t n = s.knot_history.empty() ? 0 : s.knot_history.front().size();
  for (std::size_t i = 0; i < n; ++i) os << ",t" << i;
  os << '\n';
  for (std::size_t k = 0; k < s.knot_history.size(); ++k) {
    os << k;
    if (k < s.trace.size())
      os << ',' << s.trace[k].energy << ',' << s.trace[k].grad_norm << ',' << s.trace[k].eta;
    else
      os << ",,,";
    for (double x : s.knot_history[k]) os << ',' << x;
    os << '\n';
  }
  return os.str();
}

}  // namespace femnet
