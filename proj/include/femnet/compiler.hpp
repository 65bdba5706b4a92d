#pragma once

#include "femnet/affine.hpp"
#include "femnet/cpwl.hpp"
#include "femnet/mesh.hpp"
#include "femnet/relu_net.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace femnet {

using BigInt = boost::multiprecision::cpp_int;

/// The fixed one-hidden-layer, four-neuron net for min{a, b} and max{a, b}:
/// min = v_min . ReLU(W [a, b]), max = v_max . ReLU(W [a, b]).
struct MinMaxGadget {
  static Mat hidden();   // W = [[1,1],[-1,-1],[1,-1],[-1,1]]
  static Mat min_row();  // 1/2 [1, -1, -1, -1]
  static Mat max_row();  // 1/2 [1, -1,  1,  1]
  static double eval_min(double a, double b);
  static double eval_max(double a, double b);
  /// The gadget as a 2-input network.
  static ReluNetwork min_network();
  static ReluNetwork max_network();
};

enum class Pathway { FemDeep, LatticeShallow, BasisShallow, MaxOfM };
std::string to_string(Pathway p);

/// Predicted against actual depth and size for one compiled network. Depths
/// count hidden layers. Every O(.) bound is stated with its explicit constant
/// in `derivation`.
struct BoundReport {
  Pathway pathway = Pathway::FemDeep;
  int predicted_depth = 0;
  int actual_depth = 0;
  BigInt predicted_size_bound = 0;
  long long actual_size = 0;
  long long padding_neurons = 0;  // identity carries, included in actual_size
  int kh = 0;
  int N = 0;
  int m = 0;
  int M = 0;
  int d = 0;
  std::string derivation;

  bool depth_ok() const { return actual_depth <= predicted_depth; }
  bool size_ok() const { return BigInt(actual_size) <= predicted_size_bound; }
};

/// Throws BoundViolated with the report text when depth or size exceeds the prediction.
void enforce(const BoundReport& r);

// ---------------------------------------------------------------- deep pathway

/// phi_i = max{0, min_k g_k} through a balanced min tree. Requires a locally convex star.
ReluNetwork compile_basis_deep(const SimplicialMesh& mesh, const VertexStar& star);

/// sum_i nu_i phi_i, each coefficient folded into the first layer so hidden
/// weights stay in {0, +-1/2, +-1}. Throws NotLocallyConvex naming every
/// offending vertex with nu_i != 0.
ReluNetwork compile_fem_deep(const SimplicialMesh& mesh, std::span<const double> coeffs, BoundReport* report = nullptr);

// ------------------------------------------------------------- shallow pathway

/// max over networks by recursive halving (first floor(m/2) members left).
/// Asserts hidden <= max k_i + ceil(log2 m) and
/// size <= sum s_i + 4(2m - 1) + identity carries. Throws EmptyList.
ReluNetwork compile_max_of_m(const std::vector<ReluNetwork>& nets, BoundReport* report = nullptr);

/// max{min} net with one min tree per clause and compile_max_of_m on top.
/// Throws ClauseTooWide when a clause has more than d + 1 members.
ReluNetwork compile_lattice_shallow(const LatticeForm& f, int d, BoundReport* report = nullptr);

/// sign * max{constant, args...}; `constant` absent means no constant argument.
struct MaxTerm {
  int sign = 1;
  std::optional<double> constant;
  std::vector<AffineFunc> args;  // non-constant affine arguments

  int arity() const { return static_cast<int>(args.size()) + (constant ? 1 : 0); }
  double eval(const Vec& x) const;  // signed value
};

double eval_terms(const std::vector<MaxTerm>& terms, const Vec& x);

struct ReduceStats {
  int eliminations = 0;
  int max_branches = 0;         // terms produced by one elimination
  int max_branch_bound = 0;     // 2^(rank+1) - 1 for that elimination
  int verified_steps = 0;
  double worst_identity_error = 0.0;
};

/// Rewrites max{c0, l_1..l_L} as a signed sum of maxima with at most d + 1
/// arguments each (a constant counts as one). Every elimination is checked
/// by sampling on [-5, 5]^d; a mismatch throws IdentityCheckFailed.
/// Throws NumericalDependenceAmbiguous when a dependency fit is neither clean nor clearly absent.
std::vector<MaxTerm> reduce_clause(std::optional<double> c0, const std::vector<AffineFunc>& ls, int d,
                                   ReduceStats* stats = nullptr);

/// One signed max term of the max-of-max expansion of a lattice form.
struct ExpandedTerm {
  BigInt coeff;
  std::vector<int> pieces;
};

/// max_k min_{i in s_k} l_i = sum_S c_S max_{i in S} l_i. Requires at most 8 pieces
/// (ExpansionOverflow otherwise).
std::vector<ExpandedTerm> expand_lattice(const LatticeForm& f);

/// Network for sum_k sign_k max{args_k}; every term is padded to the common depth.
ReluNetwork compile_terms(const std::vector<MaxTerm>& terms, int d, int* max_term_depth = nullptr);

struct ShallowResult {
  ReluNetwork net;
  BoundReport report;
  LatticeForm lattice;
  int expanded_terms = 0;  // nonzero c_S
  int reduced_terms = 0;   // after arity reduction
  int max_term_depth = 0;  // hidden layers of the widest term subnetwork
  ReduceStats reduce;
};

/// unique-order partition, lattice, expansion, arity reduction and compilation (d <= 2).
ShallowResult compile_cpwl_shallow(const CpwlPieces& f);

/// max{0, min g_k} expanded by inclusion-exclusion, reduced and compiled.
ShallowResult compile_basis_shallow(const SimplicialMesh& mesh, const VertexStar& star);

// ------------------------------------------------------------------ bounds

/// (10d+6)(2^m-1)^M (2^(d+1)-1)^(m-d-1) for m >= d+1, (10d+6)(2^m-1)^M otherwise.
BigInt shallow_size_bound(int d, int m, int M);
/// sum_{j<=d} C(n,j)(10j+6) + (10d+6) sum_{j>d} C(n,j)(2^(d+1)-1)^(j-d).
BigInt basis_shallow_size_bound(int d, int n);

int ceil_log2(long long n);

}  // namespace femnet
