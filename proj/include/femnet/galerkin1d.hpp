#pragma once

#include "femnet/relu_net.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace femnet {

/// -u'' = f on (0, 1), u(0) = u(1) = 0, with a known exact solution.
struct Bvp1dProblem {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;  // f', needed for the exact knot gradient
  std::function<double(double)> u;
  std::function<double(double)> du;
};

/// u = x (exp(-(x - 1/3)^2 / K) - exp(-4 / (9 K))).
Bvp1dProblem gaussian_bump_problem(double K = 0.01);
/// u = sin(pi x).
Bvp1dProblem sine_problem();
/// f = c, u = c x (1 - x) / 2.
Bvp1dProblem constant_problem(double c = 1.0);
/// Lookup by name: "bump", "sine" or "constant". Throws InvalidInput.
Bvp1dProblem problem_by_name(const std::string& name);

enum class InitGrid { Afem, Uniform };

struct SolverConfig {
  int N = 53;  // grid points including both boundary nodes
  double eta = 0.5;
  int max_iter = 200;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double min_eta = 1e-20;
  double gap_floor = 1e-6;
  double grad_tol = 1e-10;
  InitGrid init = InitGrid::Afem;
  int afem_initial_points = 5;
};

struct TraceEntry {
  int iter = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double eta = 0.0;  // accepted step, 0 for the final record
};

/// Piecewise linear u on knots t with slope theta[i] on [t_i, t_{i+1}].
struct Bvp1dState {
  std::vector<double> t;
  std::vector<double> theta;
  double energy = 0.0;
  double h1_error = 0.0;
  std::vector<TraceEntry> trace;
  std::vector<std::vector<double>> knot_history;  // knots after each accepted step, starting grid first
  int iterations = 0;
  bool stalled = false;  // the line search found no admissible step
};

/// 5-point Gauss-Legendre nodes and weights on [-1, 1].
const std::array<double, 5>& gauss_nodes();
const std::array<double, 5>& gauss_weights();

std::vector<double> uniform_grid(int n);

/// Throws SingularSystem on repeated knots and KnotOrderViolated on
/// decreasing knots or endpoints other than 0 and 1.
void validate_knots(const std::vector<double>& t);

/// Nodal values U_i = sum_{k<i} theta_k h_k.
std::vector<double> nodal_values(const std::vector<double>& t, const std::vector<double>& theta);
/// u(1) as implied by the slopes; zero for admissible states.
double boundary_residual(const std::vector<double>& t, const std::vector<double>& theta);
double eval_state(const std::vector<double>& t, const std::vector<double>& theta, double x);

/// E(u) = sum_e theta_e^2 h_e / 2 - Gauss quadrature of f u.
double energy(const std::vector<double>& t, const std::vector<double>& theta, const Bvp1dProblem& p);
/// |u - u_exact|_1 by Gauss quadrature.
double h1_error(const std::vector<double>& t, const std::vector<double>& theta, const Bvp1dProblem& p);

/// Galerkin slopes for fixed knots (tridiagonal stiffness solve).
std::vector<double> solve_fem_on_grid(const std::vector<double>& t, const Bvp1dProblem& p);

/// dE/dt with theta held fixed; the two endpoint slots are zero.
std::vector<double> grad_knots(const std::vector<double>& t, const std::vector<double>& theta, const Bvp1dProblem& p);

/// FEM solution on t with energy and error filled in.
Bvp1dState fem_state(std::vector<double> t, const Bvp1dProblem& p);

/// Alternating Galerkin solve and knot descent with Armijo backtracking.
/// `initial` overrides config.init when given.
Bvp1dState solve_algorithm1(const Bvp1dProblem& p, const SolverConfig& config,
                            std::optional<std::vector<double>> initial = std::nullopt);

/// Bisection refinement from a uniform grid of `initial_points`, marking with
/// exact element errors (Doerfler fraction `fraction`) until there are
/// target_N points. Throws TargetUnreachable when target_N < initial_points.
Bvp1dState solve_afem(const Bvp1dProblem& p, int target_N, int initial_points = 5, double fraction = 0.5);

struct TableRow {
  int N = 0;
  double err_ufem = 0, err_afem = 0, err_dnn = 0;
  double e_ufem = 0, e_afem = 0, e_dnn = 0;
  int dnn_iterations = 0;
};

std::vector<TableRow> report_table(const Bvp1dProblem& p, const std::vector<int>& Ns, const SolverConfig& base);
std::string table_csv(const std::vector<TableRow>& rows);
std::string table_markdown(const std::vector<TableRow>& rows);

/// One hidden layer: theta_0 ReLU(x - t_0) + sum_i (theta_i - theta_{i-1}) ReLU(x - t_i). Exact on [0, 1].
ReluNetwork dnn_representation(const std::vector<double>& t, const std::vector<double>& theta);

/// iter, energy, grad_norm, eta, then one column per knot.
std::string trajectory_csv(const Bvp1dState& s);

}  // namespace femnet
