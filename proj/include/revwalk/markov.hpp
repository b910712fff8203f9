#pragma once

#include "revwalk/errors.hpp"
#include "revwalk/linalg.hpp"

#include <map>
#include <optional>

namespace revwalk {

inline constexpr double kRowSumTolerance = 1e-9;
inline constexpr double kNegativeTolerance = 1e-12;
inline constexpr double kDistributionTolerance = 1e-12;
inline constexpr Index kMaxKernelStates = 4096;

/// Probability vector on a finite state space.
class Distribution {
 public:
  /// Validates nonnegativity (entries above -1e-12 are clamped to 0) and a
  /// unit sum within 1e-12.
  static Distribution from_probs(Vector probs);
  static Distribution uniform(Index n);
  static Distribution point_mass(Index n, Index x);

  const Vector& probs() const noexcept { return probs_; }
  /// Entries sqrt(p(x)); the induced unit vector |p>.
  Vector amplitudes() const { return probs_.cwiseSqrt(); }
  Index size() const noexcept { return probs_.size(); }
  double operator()(Index x) const { return probs_(x); }
  double min() const { return probs_.minCoeff(); }
  bool strictly_positive() const { return probs_.minCoeff() > 0.0; }

 private:
  explicit Distribution(Vector probs) : probs_(std::move(probs)) {}
  Vector probs_;
};

/// Row-stochastic transition matrix. Immutable once constructed.
class Kernel {
 public:
  const Matrix& matrix() const noexcept { return p_; }
  Index size() const noexcept { return p_.rows(); }
  double operator()(Index x, Index y) const { return p_(x, y); }
  /// True when built by group_walk; required by group_deviation.
  bool is_group_walk() const noexcept { return group_walk_; }

 private:
  Kernel(Matrix p, bool group_walk) : p_(std::move(p)), group_walk_(group_walk) {}
  friend Kernel kernel_from_rows(const Matrix& matrix);
  friend Kernel group_walk(const Eigen::MatrixXi& table, const Distribution& increment_law);

  Matrix p_;
  bool group_walk_ = false;
};

struct KernelClass {
  bool irreducible = false;
  /// Only defined for irreducible kernels.
  std::optional<bool> aperiodic;
  bool ergodic = false;
  /// Only defined when a distribution was supplied.
  std::optional<bool> reversible;
  bool lazy = false;
  /// gcd of cycle lengths, 0 when undefined.
  int period = 0;
};

Kernel kernel_from_rows(const Matrix& matrix);

Kernel circle_walk(Index n, double p_forward, double p_backward);

/// Two circles of odd length N joined through a bridge state. States are
/// ordered 0..N-1 (first circle), N (the bridge), N+1..2N (second circle).
Kernel bottleneck_graph(Index N);
/// Index of the bridge state in bottleneck_graph(N).
inline Index bottleneck_bridge(Index N) { return N; }

/// table(a, b) = a o b. Group axioms are checked before the kernel
/// P(x, y) = nu(y o x^-1) is built.
Kernel group_walk(const Eigen::MatrixXi& table, const Distribution& increment_law);
Eigen::MatrixXi cyclic_group_table(Index n);
/// Walk on Z_n; `increments` maps signed steps to probabilities.
Kernel cyclic_walk(Index n, const std::map<long, double>& increments);

Kernel perfectly_mixed(const Distribution& pi);
Kernel lazy(const Kernel& p);
Kernel kernel_power(const Kernel& p, long j);
Distribution stationary_distribution(const Kernel& p);
Kernel time_reversal(const Kernel& p, const Distribution& pi);
KernelClass classify(const Kernel& p, const Distribution* pi = nullptr);
inline KernelClass classify(const Kernel& p, const Distribution& pi) { return classify(p, &pi); }

/// ||pi P - pi||_inf
double stationarity_residual(const Kernel& p, const Distribution& pi);
/// max |pi(x)P(x,y) - pi(y)P(y,x)|
double detailed_balance_residual(const Kernel& p, const Distribution& pi);
/// Throws NotStationary / InvalidParameter unless pi is strictly positive
/// and stationary for p within `tol`.
void require_stationary(const Kernel& p, const Distribution& pi, double tol = 1e-8);

/// Strong connectivity of the support graph of a nonnegative square matrix.
bool support_irreducible(const Matrix& m);
/// Period (gcd of cycle lengths) of an irreducible support graph; 0 if the
/// graph has no cycle.
int support_period(const Matrix& m);

}  // namespace revwalk
