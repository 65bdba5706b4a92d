#include "femnet/compiler.hpp"

#include "femnet/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace femnet {

namespace {

constexpr double kCoeffZero = 1e-12;
constexpr double kCoeffOne = 1e-9;
constexpr int kMaxExpansionPieces = 8;

struct TreeStats {
  long long padding = 0;
};

// Two scalar networks side by side followed by the 4-neuron gadget with output row `row`.
ReluNetwork gadget_join(const ReluNetwork& a, const ReluNetwork& b, const Mat& row, TreeStats& st) {
  st.padding += 2LL * std::abs(a.depth() - b.depth());
  const ReluNetwork p = parallel({a, b});
  return append_layer(compose_output(p, MinMaxGadget::hidden()), row, Vec::Zero(1));
}

// Balanced binary tree; the left part gets ceil(n/2) members when left_ceil is set.
ReluNetwork gadget_tree(std::span<const ReluNetwork> nets, const Mat& row, bool left_ceil, TreeStats& st) {
  if (nets.size() == 1) return nets.front();
  const std::size_t k = left_ceil ? (nets.size() + 1) / 2 : nets.size() / 2;
  const ReluNetwork l = gadget_tree(nets.subspan(0, k), row, left_ceil, st);
  const ReluNetwork r = gadget_tree(nets.subspan(k), row, left_ceil, st);
  return gadget_join(l, r, row, st);
}

std::vector<ReluNetwork> affine_leaves(const std::vector<AffineFunc>& fs) {
  std::vector<ReluNetwork> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(ReluNetwork::affine(f));
  return out;
}

// max{y, 0} on a scalar network through the gadget with a constant zero input.
ReluNetwork top_with_zero(const ReluNetwork& y, double sign) {
  const Mat w0 = MinMaxGadget::hidden().col(0);
  return append_layer(compose_output(y, w0), sign * MinMaxGadget::max_row(), Vec::Zero(1));
}

double sample_scale(double v) { return std::max(1.0, std::abs(v)); }

AffineFunc combination(const std::vector<AffineFunc>& basis, const Vec& alpha, double alpha0) {
  AffineFunc out = AffineFunc::constant(basis.front().dim(), alpha0);
  for (std::size_t j = 0; j < basis.size(); ++j)
    if (alpha(j) != 0.0) out = out + alpha(j) * basis[j];
  return out;
}

// max{c, others, basis, sum alpha_j basis_j + alpha0}, dependency carried explicitly.
struct ElimState {
  std::optional<double> c;
  std::vector<AffineFunc> others;
  std::vector<AffineFunc> basis;
  Vec alpha;
  double alpha0 = 0.0;
};

MaxTerm make_term(int sign, std::optional<double> c, std::vector<AffineFunc> args) {
  MaxTerm t;
  t.sign = sign;
  t.constant = c;
  for (auto& a : args) {
    if (a.is_constant())
      t.constant = t.constant ? std::max(*t.constant, a.offset) : a.offset;
    else
      t.args.push_back(std::move(a));
  }
  return t;
}

std::vector<AffineFunc> concat(const std::vector<AffineFunc>& a, const std::vector<AffineFunc>& b) {
  std::vector<AffineFunc> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<MaxTerm> expand_elimination(const ElimState& s) {
  const int n = static_cast<int>(s.basis.size());
  std::vector<int> support;
  for (int j = 0; j < n; ++j)
    if (std::abs(s.alpha(j)) > kCoeffZero) support.push_back(j);

  if (support.empty()) {
    const double c = s.c ? std::max(*s.c, s.alpha0) : s.alpha0;
    return {make_term(1, c, concat(s.others, s.basis))};
  }
  const AffineFunc dep = combination(s.basis, s.alpha, s.alpha0);
  if (support.size() == 1 && std::abs(s.alpha(support[0]) - 1.0) <= kCoeffOne) {
    // dep = b_j + alpha0: one of the two dominates everywhere.
    std::vector<AffineFunc> rest = s.basis;
    if (s.alpha0 >= 0) rest[support[0]] = dep;
    return {make_term(1, s.c, concat(s.others, rest))};
  }

  int eta = -1;
  for (int j : support)
    if (std::abs(s.alpha(j) - 1.0) > kCoeffOne) eta = j;
  if (eta < 0) {
    // All coefficients are 1: swap the dependent element into the basis at
    // the last support index, which leaves coefficients -1 on the others.
    const int last = support.back();
    ElimState t = s;
    t.basis[last] = dep;
    t.alpha = Vec::Zero(n);
    for (int j : support) t.alpha(j) = (j == last) ? 1.0 : -1.0;
    t.alpha0 = -s.alpha0;
    return expand_elimination(t);
  }

  const double a = s.alpha(eta);
  const double abar = 1.0 / (1.0 - a);
  Vec beta = s.alpha * abar;
  beta(eta) = 0.0;
  const double beta0 = s.alpha0 * abar;
  const AffineFunc g = s.basis[eta];
  const AffineFunc abar_h = combination(s.basis, beta, beta0);

  ElimState t1{s.c, s.others, s.basis, beta, beta0};  // max{f, g, abar h}
  ElimState t2{s.c, s.others, s.basis, beta, beta0};  // max{f, a g + h, abar h}
  t2.basis[eta] = dep;

  std::vector<AffineFunc> rest;
  for (int j = 0; j < n; ++j)
    if (j != eta) rest.push_back(s.basis[j]);
  int s1, s2, s3;
  AffineFunc gbar;
  if (a > 1.0) {
    s1 = -1, s2 = 1, s3 = 1, gbar = g;
  } else if (a > 0.0) {
    s1 = 1, s2 = -1, s3 = 1, gbar = dep;
  } else {
    s1 = 1, s2 = 1, s3 = -1, gbar = abar_h;
  }
  rest.push_back(gbar);

  std::vector<MaxTerm> out;
  for (auto t : expand_elimination(t1)) {
    t.sign *= s1;
    out.push_back(std::move(t));
  }
  for (auto t : expand_elimination(t2)) {
    t.sign *= s2;
    out.push_back(std::move(t));
  }
  out.push_back(make_term(s3, s.c, concat(s.others, rest)));
  return out;
}

// Relative residual of fitting g by the columns of basis.
double fit_residual(const Mat& basis, const Vec& g) {
  const double scale = std::max(1.0, g.norm());
  if (basis.cols() == 0) return g.norm() / scale;
  const Vec a = basis.colPivHouseholderQr().solve(g);
  return (basis * a - g).norm() / scale;
}

// Greedy basis of the gradients in order; returns basis indices. A gradient
// joins only when its fit residual on the current basis exceeds 1e-4, the
// same measure the dependency test uses.
std::vector<int> greedy_basis(const std::vector<AffineFunc>& args) {
  std::vector<int> idx;
  const int d = args.front().dim();
  for (int i = 0; i < static_cast<int>(args.size()) && static_cast<int>(idx.size()) < d; ++i) {
    Mat g(d, static_cast<int>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) g.col(j) = args[idx[j]].gradient;
    if (fit_residual(g, args[i].gradient) > 1e-4) idx.push_back(i);
  }
  return idx;
}

// One elimination on a term whose arity exceeds d + 1.
std::vector<MaxTerm> eliminate_once(const MaxTerm& term, int& rank) {
  const auto& args = term.args;
  const std::vector<int> b = greedy_basis(args);
  rank = static_cast<int>(b.size());
  int dep = -1;
  for (int i = static_cast<int>(args.size()) - 1; i >= 0; --i)
    if (std::find(b.begin(), b.end(), i) == b.end()) {
      dep = i;
      break;
    }
  if (dep < 0) throw Error(ErrorKind::IdentityCheckFailed, "reduce: no dependent element found");
  const int d = args.front().dim();
  Mat g(d, rank);
  for (int j = 0; j < rank; ++j) g.col(j) = args[b[j]].gradient;
  Vec alpha = rank > 0 ? Vec(g.colPivHouseholderQr().solve(args[dep].gradient)) : Vec();
  const double resid = fit_residual(g, args[dep].gradient);
  if (resid >= 1e-8 && resid <= 1e-4) {
    std::ostringstream os;
    os << "dependency fit residual " << resid << " is inside the ambiguity band [1e-8, 1e-4]";
    throw Error(ErrorKind::NumericalDependenceAmbiguous, os.str());
  }
  if (resid > 1e-4) throw Error(ErrorKind::IdentityCheckFailed, "reduce: dependent element is independent");
  for (int j = 0; j < rank; ++j)
    if (std::abs(alpha(j)) <= kCoeffZero) alpha(j) = 0.0;
  double alpha0 = args[dep].offset;
  for (int j = 0; j < rank; ++j) alpha0 -= alpha(j) * args[b[j]].offset;

  ElimState s;
  s.c = term.constant;
  for (int i = 0; i < static_cast<int>(args.size()); ++i)
    if (i != dep && std::find(b.begin(), b.end(), i) == b.end()) s.others.push_back(args[i]);
  for (int j : b) s.basis.push_back(args[j]);
  s.alpha = alpha;
  s.alpha0 = alpha0;
  auto out = expand_elimination(s);
  for (auto& t : out) t.sign *= term.sign;
  return out;
}

struct TermKey {
  bool has_c;
  double c;
  std::vector<double> flat;
  bool operator<(const TermKey& o) const {
    if (has_c != o.has_c) return has_c < o.has_c;
    if (has_c && c != o.c) return c < o.c;
    return flat < o.flat;
  }
};

TermKey key_of(const MaxTerm& t) {
  std::vector<std::vector<double>> rows;
  for (const auto& a : t.args) {
    std::vector<double> r(a.gradient.data(), a.gradient.data() + a.dim());
    r.push_back(a.offset);
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end());
  TermKey k{t.constant.has_value(), t.constant.value_or(0.0), {}};
  for (const auto& r : rows) k.flat.insert(k.flat.end(), r.begin(), r.end());
  return k;
}

// Merges identical maxima; a multiplicity k becomes sign(k) max{|k| args}.
std::vector<MaxTerm> merge_terms(const std::vector<MaxTerm>& terms) {
  std::map<TermKey, std::pair<long long, const MaxTerm*>> acc;
  std::vector<TermKey> order;
  for (const auto& t : terms) {
    auto key = key_of(t);
    auto it = acc.find(key);
    if (it == acc.end()) {
      acc.emplace(key, std::make_pair(static_cast<long long>(t.sign), &t));
      order.push_back(std::move(key));
    } else {
      it->second.first += t.sign;
    }
  }
  std::vector<MaxTerm> out;
  for (const auto& k : order) {
    const auto& [mult, src] = acc.at(k);
    if (mult == 0) continue;
    MaxTerm t = *src;
    const double s = static_cast<double>(std::llabs(mult));
    t.sign = mult > 0 ? 1 : -1;
    if (t.constant) *t.constant *= s;
    for (auto& a : t.args) a = s * a;
    out.push_back(std::move(t));
  }
  return out;
}

BigInt big_pow(long long base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

BigInt binomial(int n, int k) {
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

ShallowResult compile_from_lattice(const LatticeForm& lattice, int d) {
  ShallowResult res;
  res.lattice = lattice;
  const auto expanded = expand_lattice(lattice);
  res.expanded_terms = static_cast<int>(expanded.size());
  std::vector<MaxTerm> terms;
  for (const auto& e : expanded) {
    if (boost::multiprecision::abs(e.coeff) > BigInt(1) << 53)
      throw Error(ErrorKind::ExpansionOverflow, "expansion coefficient exceeds 2^53");
    const double c = e.coeff.convert_to<double>();
    const double s = std::abs(c);
    std::optional<double> constant;
    std::vector<AffineFunc> args;
    for (int i : e.pieces) {
      const AffineFunc l = s * lattice.pieces[i];
      if (l.is_constant())
        constant = constant ? std::max(*constant, l.offset) : l.offset;
      else
        args.push_back(l);
    }
    for (auto t : reduce_clause(constant, args, d, &res.reduce)) {
      t.sign *= (c > 0 ? 1 : -1);
      terms.push_back(std::move(t));
    }
  }
  terms = merge_terms(terms);
  res.reduced_terms = static_cast<int>(terms.size());
  res.net = compile_terms(terms, d, &res.max_term_depth);
  return res;
}

}  // namespace

// ------------------------------------------------------------------ gadget

Mat MinMaxGadget::hidden() {
  Mat w(4, 2);
  w << 1, 1, -1, -1, 1, -1, -1, 1;
  return w;
}

Mat MinMaxGadget::min_row() {
  Mat v(1, 4);
  v << 0.5, -0.5, -0.5, -0.5;
  return v;
}

Mat MinMaxGadget::max_row() {
  Mat v(1, 4);
  v << 0.5, -0.5, 0.5, 0.5;
  return v;
}

double MinMaxGadget::eval_min(double a, double b) {
  const double r0 = std::max(a + b, 0.0), r1 = std::max(-a - b, 0.0);
  const double r2 = std::max(a - b, 0.0), r3 = std::max(-a + b, 0.0);
  return 0.5 * r0 + -0.5 * r1 + -0.5 * r2 + -0.5 * r3;
}

double MinMaxGadget::eval_max(double a, double b) {
  const double r0 = std::max(a + b, 0.0), r1 = std::max(-a - b, 0.0);
  const double r2 = std::max(a - b, 0.0), r3 = std::max(-a + b, 0.0);
  return 0.5 * r0 + -0.5 * r1 + 0.5 * r2 + 0.5 * r3;
}

ReluNetwork MinMaxGadget::min_network() {
  return ReluNetwork(2, {Layer::from_dense(hidden(), Vec::Zero(4)), Layer::from_dense(min_row(), Vec::Zero(1))});
}

ReluNetwork MinMaxGadget::max_network() {
  return ReluNetwork(2, {Layer::from_dense(hidden(), Vec::Zero(4)), Layer::from_dense(max_row(), Vec::Zero(1))});
}

std::string to_string(Pathway p) {
  switch (p) {
    case Pathway::FemDeep: return "fem_deep";
    case Pathway::LatticeShallow: return "lattice_shallow";
    case Pathway::BasisShallow: return "basis_shallow";
    case Pathway::MaxOfM: return "max_of_m";
  }
  return "unknown";
}

void enforce(const BoundReport& r) {
  if (r.depth_ok() && r.size_ok()) return;
  std::ostringstream os;
  os << to_string(r.pathway) << ": depth " << r.actual_depth << " (bound " << r.predicted_depth << "), size "
     << r.actual_size << " (bound " << r.predicted_size_bound << "); " << r.derivation;
  throw Error(ErrorKind::BoundViolated, os.str());
}

int ceil_log2(long long n) {
  int k = 0;
  while ((1LL << k) < n) ++k;
  return k;
}

// ------------------------------------------------------------ deep pathway

ReluNetwork compile_basis_deep(const SimplicialMesh& mesh, const VertexStar& star) {
  if (!is_locally_convex(mesh, star.center))
    throw Error(ErrorKind::NotLocallyConvex, "vertex " + std::to_string(star.center) + " has a non-convex star");
  TreeStats st;
  const auto leaves = affine_leaves(star.local_affines);
  return top_with_zero(gadget_tree(leaves, MinMaxGadget::min_row(), true, st), 1.0);
}

ReluNetwork compile_fem_deep(const SimplicialMesh& mesh, std::span<const double> coeffs, BoundReport* report) {
  if (static_cast<int>(coeffs.size()) != mesh.num_vertices())
    throw Error(ErrorKind::DimensionMismatch, "one coefficient per vertex expected");
  std::vector<int> offending;
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (coeffs[i] != 0.0 && !is_locally_convex(mesh, i)) offending.push_back(i);
  if (!offending.empty()) {
    std::ostringstream os;
    os << "non-convex vertex stars:";
    for (int i : offending) os << ' ' << i;
    throw Error(ErrorKind::NotLocallyConvex, os.str());
  }

  std::vector<ReluNetwork> nets;
  TreeStats st;
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    if (coeffs[i] == 0.0) continue;
    const VertexStar star = vertex_star(mesh, i);
    // nu phi = sign(nu) max{0, min_k |nu| g_k}
    const double s = std::abs(coeffs[i]);
    std::vector<AffineFunc> scaled;
    for (const auto& g : star.local_affines) scaled.push_back(s * g);
    const auto leaves = affine_leaves(scaled);
    nets.push_back(top_with_zero(gadget_tree(leaves, MinMaxGadget::min_row(), true, st), coeffs[i] > 0 ? 1.0 : -1.0));
  }
  ReluNetwork out;
  if (nets.empty()) {
    out = ReluNetwork::affine(AffineFunc::constant(mesh.dim(), 0.0));
  } else {
    int depth = 0;
    for (const auto& n : nets) depth = std::max(depth, n.depth());
    for (const auto& n : nets) st.padding += 2LL * (depth - n.depth());
    const std::vector<double> ones(nets.size(), 1.0);
    out = linear_combine(nets, ones, 0.0);
  }

  BoundReport r;
  r.pathway = Pathway::FemDeep;
  r.kh = compute_kh(mesh);
  r.N = static_cast<int>(nets.size());
  r.d = mesh.dim();
  r.predicted_depth = nets.empty() ? 0 : ceil_log2(r.kh) + 1;
  r.actual_depth = out.hidden_layers();
  r.predicted_size_bound = BigInt(8) * r.kh * r.N;
  r.actual_size = out.size();
  r.padding_neurons = st.padding;
  r.derivation =
      "size <= 8 k_h N: per basis (|N(i)|-1) min gadgets + 1 max gadget at 4 neurons, "
      "identity carries at 2 neurons per layer bounded by the same count";
  enforce(r);
  if (report) *report = r;
  return out;
}

// --------------------------------------------------------- shallow pathway

ReluNetwork compile_max_of_m(const std::vector<ReluNetwork>& nets, BoundReport* report) {
  if (nets.empty()) throw Error(ErrorKind::EmptyList, "max of zero networks");
  long long sum_s = 0;
  int max_k = 0;
  for (const auto& n : nets) {
    if (n.output_dim() != 1 || n.input_dim() != nets.front().input_dim())
      throw Error(ErrorKind::DimensionMismatch, "max_of_m needs scalar networks with equal input dimension");
    sum_s += n.size();
    max_k = std::max(max_k, n.hidden_layers());
  }
  TreeStats st;
  ReluNetwork out = gadget_tree(nets, MinMaxGadget::max_row(), false, st);
  const long long m = static_cast<long long>(nets.size());

  BoundReport r;
  r.pathway = Pathway::MaxOfM;
  r.m = static_cast<int>(m);
  r.d = nets.front().input_dim();
  r.predicted_depth = max_k + ceil_log2(m);
  r.actual_depth = out.hidden_layers();
  r.predicted_size_bound = (m == 1) ? BigInt(sum_s) : BigInt(sum_s + 4 * (2 * m - 1) + st.padding);
  r.actual_size = out.size();
  r.padding_neurons = st.padding;
  r.derivation = "size <= sum s_i + 4(2m-1) + identity carries (2 per carried layer)";
  enforce(r);
  if (report) *report = r;
  return out;
}

ReluNetwork compile_lattice_shallow(const LatticeForm& f, int d, BoundReport* report) {
  if (f.clauses.empty()) throw Error(ErrorKind::EmptyList, "lattice form without clauses");
  std::vector<ReluNetwork> clause_nets;
  const int clause_bound = ceil_log2(d + 1);
  for (const auto& c : f.clauses) {
    if (c.empty()) throw Error(ErrorKind::InvalidInput, "empty clause");
    if (static_cast<int>(c.size()) > d + 1)
      throw Error(ErrorKind::ClauseTooWide,
                  "clause of arity " + std::to_string(c.size()) + " exceeds d + 1 = " + std::to_string(d + 1));
    std::vector<AffineFunc> ls;
    for (int i : c) ls.push_back(f.pieces.at(i));
    TreeStats st;
    clause_nets.push_back(gadget_tree(affine_leaves(ls), MinMaxGadget::min_row(), true, st));
    if (clause_nets.back().hidden_layers() > clause_bound)
      throw Error(ErrorKind::BoundViolated, "clause subnetwork deeper than ceil(log2(d+1))");
  }
  BoundReport inner;
  ReluNetwork out = compile_max_of_m(clause_nets, &inner);
  BoundReport r = inner;
  r.pathway = Pathway::LatticeShallow;
  r.m = static_cast<int>(f.pieces.size());
  r.M = static_cast<int>(f.clauses.size());
  r.d = d;
  r.predicted_depth = clause_bound + ceil_log2(static_cast<long long>(f.clauses.size()));
  r.derivation = "hidden <= ceil(log2(d+1)) + ceil(log2 #clauses); size per max-of-m bound over clause nets";
  enforce(r);
  if (report) *report = r;
  return out;
}

double MaxTerm::eval(const Vec& x) const {
  double v = constant ? *constant : -std::numeric_limits<double>::infinity();
  for (const auto& a : args) v = std::max(v, a(x));
  return sign * v;
}

double eval_terms(const std::vector<MaxTerm>& terms, const Vec& x) {
  double s = 0.0;
  for (const auto& t : terms) s += t.eval(x);
  return s;
}

std::vector<MaxTerm> reduce_clause(std::optional<double> c0, const std::vector<AffineFunc>& ls, int d,
                                   ReduceStats* stats) {
  MaxTerm start = make_term(1, c0, ls);
  if (start.arity() == 0) throw Error(ErrorKind::EmptyList, "max of nothing");
  std::vector<MaxTerm> done, work{start};
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  ReduceStats local;
  ReduceStats& st = stats ? *stats : local;
  while (!work.empty()) {
    MaxTerm t = std::move(work.back());
    work.pop_back();
    if (t.arity() <= d + 1) {
      done.push_back(std::move(t));
      continue;
    }
    int rank = 0;
    auto parts = eliminate_once(t, rank);
    const int bound = (1 << (rank + 1)) - 1;
    st.eliminations += 1;
    if (static_cast<int>(parts.size()) > st.max_branches) {
      st.max_branches = static_cast<int>(parts.size());
      st.max_branch_bound = bound;
    }
    if (static_cast<int>(parts.size()) > bound)
      throw Error(ErrorKind::BoundViolated, "elimination produced " + std::to_string(parts.size()) +
                                                " terms, more than 2^(rank+1)-1 = " + std::to_string(bound));
    for (int s = 0; s < 32; ++s) {
      Vec x(d);
      for (int j = 0; j < d; ++j) x(j) = u(rng);
      const double want = t.eval(x), got = eval_terms(parts, x);
      const double err = std::abs(want - got);
      st.worst_identity_error = std::max(st.worst_identity_error, err / sample_scale(want));
      if (!(err <= 1e-9 * sample_scale(want))) {
        std::ostringstream os;
        os << "elimination identity fails at x = " << x.transpose() << ": " << want << " vs " << got;
        throw Error(ErrorKind::IdentityCheckFailed, os.str());
      }
    }
    st.verified_steps += 1;
    for (auto& p : parts) work.push_back(std::move(p));
  }
  return done;
}

std::vector<ExpandedTerm> expand_lattice(const LatticeForm& f) {
  const int m = static_cast<int>(f.pieces.size());
  if (m > kMaxExpansionPieces)
    throw Error(ErrorKind::ExpansionOverflow,
                std::to_string(m) + " pieces exceed the expansion limit of " + std::to_string(kMaxExpansionPieces));
  if (f.clauses.empty()) throw Error(ErrorKind::EmptyList, "lattice form without clauses");
  const unsigned full = 1u << m;
  std::vector<BigInt> coeff(full, 0);
  coeff[0] = 1;  // max over the empty set acts as -infinity
  for (const auto& clause : f.clauses) {
    unsigned cm = 0;
    for (int i : clause) cm |= 1u << i;
    if (cm == 0) throw Error(ErrorKind::InvalidInput, "empty clause");
    std::vector<BigInt> next(full, 0);
    for (unsigned s = 0; s < full; ++s) {
      if (coeff[s] == 0) continue;
      for (unsigned t = cm; t != 0; t = (t - 1) & cm) {
        const int sign = (std::popcount(t) % 2 == 1) ? 1 : -1;
        next[s | t] += sign * coeff[s];
      }
    }
    coeff = std::move(next);
  }
  std::vector<ExpandedTerm> out;
  for (unsigned s = 1; s < full; ++s) {
    if (coeff[s] == 0) continue;
    ExpandedTerm e{coeff[s], {}};
    for (int i = 0; i < m; ++i)
      if (s & (1u << i)) e.pieces.push_back(i);
    out.push_back(std::move(e));
  }
  return out;
}

ReluNetwork compile_terms(const std::vector<MaxTerm>& terms, int d, int* max_term_depth) {
  AffineFunc linear = AffineFunc::constant(d, 0.0);
  std::vector<ReluNetwork> nets;
  int deepest = 0;
  for (const auto& t : terms) {
    std::vector<AffineFunc> leaves = t.args;
    if (t.constant) leaves.push_back(AffineFunc::constant(d, *t.constant));
    if (leaves.size() == 1) {
      linear = linear + static_cast<double>(t.sign) * leaves.front();
      continue;
    }
    TreeStats st;
    ReluNetwork n = gadget_tree(affine_leaves(leaves), MinMaxGadget::max_row(), true, st);
    deepest = std::max(deepest, n.hidden_layers());
    if (t.sign < 0) n = compose_output(n, -Mat::Identity(1, 1));
    nets.push_back(std::move(n));
  }
  if (max_term_depth) *max_term_depth = deepest;
  if (!linear.is_constant() || linear.offset != 0.0 || nets.empty()) nets.push_back(ReluNetwork::affine(linear));
  if (nets.size() == 1) return nets.front();
  const std::vector<double> ones(nets.size(), 1.0);
  return linear_combine(nets, ones, 0.0);
}

BigInt shallow_size_bound(int d, int m, int M) {
  const BigInt base = BigInt(10 * d + 6) * big_pow((1LL << m) - 1, M);
  if (m >= d + 1) return base * big_pow((1LL << (d + 1)) - 1, m - d - 1);
  return base;
}

BigInt basis_shallow_size_bound(int d, int n) {
  BigInt s = 0;
  for (int j = 1; j <= n; ++j) {
    if (j <= d)
      s += binomial(n, j) * (10 * j + 6);
    else
      s += BigInt(10 * d + 6) * binomial(n, j) * big_pow((1LL << (d + 1)) - 1, j - d);
  }
  return s;
}

ShallowResult compile_cpwl_shallow(const CpwlPieces& f) {
  const auto part = unique_order_partition(f);
  const LatticeForm lattice = dedup_clauses(lattice_from_unique_order(f, part));
  ShallowResult res = compile_from_lattice(lattice, f.dim);
  BoundReport& r = res.report;
  r.pathway = Pathway::LatticeShallow;
  r.d = f.dim;
  r.m = static_cast<int>(f.pieces.size());
  r.M = static_cast<int>(part.cells.size());
  r.predicted_depth = ceil_log2(f.dim + 1);
  r.actual_depth = res.net.hidden_layers();
  r.predicted_size_bound = shallow_size_bound(r.d, r.m, r.M);
  r.actual_size = res.net.size();
  r.derivation = r.m >= r.d + 1 ? "(10d+6)(2^m-1)^M(2^(d+1)-1)^(m-d-1)" : "(10d+6)(2^m-1)^M";
  enforce(r);
  if (res.max_term_depth > ceil_log2(f.dim + 1))
    throw Error(ErrorKind::BoundViolated, "term subnetwork deeper than ceil(log2(d+1))");
  return res;
}

ShallowResult compile_basis_shallow(const SimplicialMesh& mesh, const VertexStar& star) {
  if (!is_locally_convex(mesh, star.center))
    throw Error(ErrorKind::NotLocallyConvex, "vertex " + std::to_string(star.center) + " has a non-convex star");
  const int d = mesh.dim();
  const int n = static_cast<int>(star.local_affines.size());
  LatticeForm lattice;
  lattice.pieces = star.local_affines;
  lattice.pieces.push_back(AffineFunc::constant(d, 0.0));
  std::vector<int> gs(n);
  for (int k = 0; k < n; ++k) gs[k] = k;
  lattice.clauses = {{n}, gs};
  ShallowResult res = compile_from_lattice(lattice, d);
  BoundReport& r = res.report;
  r.pathway = Pathway::BasisShallow;
  r.d = d;
  r.m = n + 1;
  r.M = 0;
  r.kh = n;
  r.predicted_depth = ceil_log2(d + 1);
  r.actual_depth = res.net.hidden_layers();
  r.predicted_size_bound = basis_shallow_size_bound(d, n);
  r.actual_size = res.net.size();
  r.derivation = "sum_{j<=d} C(n,j)(10j+6) + (10d+6) sum_{j>d} C(n,j)(2^(d+1)-1)^(j-d)";
  enforce(r);
  return res;
}

}  // namespace femnet
