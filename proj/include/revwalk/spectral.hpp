#pragma once

#include "revwalk/reversibilization.hpp"

#include <optional>
#include <vector>

namespace revwalk {

struct SpectralReport {
  /// gap of the multiplicative reversibilization P P* (the k = 1 term)
  double gamma = 0.0;
  /// max_k gap(P^k (P*)^k) / k over 1 <= k <= k_max
  double gamma_inf = 0.0;
  /// smallest maximizing k
  int tau_rev = 1;
  int k_max = 1;
  /// maximizer hit k_max, so the true maximum may lie beyond it
  bool saturated = false;
  /// gap(P^k (P*)^k) / k for k = 1..k_max
  std::vector<double> scaled_gaps;
  /// eigenvalues of P P*, descending
  Vector eigenvalues;
};

/// One row of the discriminant sweep over j = 1, 2, ...
/// Optional fields are empty when D_j is not primitive.
struct SweepRow {
  long j = 0;
  std::optional<double> gamma_q;
  double one_minus_pi_d_pi = 0.0;
  std::optional<double> lambda_max;
  /// <pi|mu_j>^2
  std::optional<double> overlap;
  /// (1 - <pi|D_j|pi>) / gamma(Q_j)
  std::optional<double> ratio;
};

struct ReversibilityScan {
  std::optional<long> t_rev;
  std::vector<SweepRow> rows;
};

struct MixingBounds {
  double lower;
  long tau;
  double upper;
  double gamma_inf;
  int k_used;
};

/// 1 - max |lambda| over the non-unit eigenvalues; requires detailed balance.
double spectral_gap(const Kernel& p, const Distribution& pi);
/// Same quantity for a symmetric matrix whose top eigenvalue is the unit one.
double symmetric_gap(const Vector& ascending_eigenvalues);

SpectralReport pseudo_spectral_gap(const Kernel& p, const Distribution& pi, int k_max = 64);

template <typename A, typename B>
double tv_distance(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return 0.5 * (a - b).cwiseAbs().sum();
}

template <typename A, typename B>
double hellinger_affinity(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a.cwiseMax(0.0).cwiseProduct(b.cwiseMax(0.0)).cwiseSqrt().sum();
}

double tv_distance(const Distribution& a, const Distribution& b);
double hellinger_affinity(const Distribution& a, const Distribution& b);

/// max_x d_TV(P^t(x,.), pi)
double worst_row_tv(const Matrix& pt, const Vector& pi);
/// max_x sqrt(1 - affinity(P^t(x,.), pi))
double worst_row_hellinger(const Matrix& pt, const Vector& pi);

/// Least t in [1, t_max] with worst_row_tv(P^t) <= eps. The worst-row
/// distance is nonincreasing in t, so t is located by binary lifting over
/// P^(2^i) rather than by stepping one multiplication at a time.
long mixing_time(const Kernel& p, const Distribution& pi, double eps, long t_max);
long hellinger_mixing_time(const Kernel& p, const Distribution& pi, double eps, long t_max);
/// 10 n^3
long default_t_max(const Kernel& p);

/// ((1-eps)/gamma_inf, tau(eps), (1 - ln(2 eps pi_min))/gamma_inf). The gap
/// maximum runs over k <= max(k_max, tau): larger k cannot move either bound.
MixingBounds mixing_gap_bounds_check(const Kernel& p, const Distribution& pi, double eps,
                                     long t_max, int k_max = 64);

/// Row for a precomputed power P^j.
SweepRow sweep_row(const Kernel& pj, const Distribution& pi, long j);
std::vector<SweepRow> sweep(const Kernel& p, const Distribution& pi, long j_max);
/// Rows up to the first j with D_j primitive and
/// 1 - <pi|D_j|pi> <= rho * gamma(Q_j), or up to j_max.
ReversibilityScan scan_reversibility(const Kernel& p, const Distribution& pi, double rho,
                                     long j_max);
/// Throws CriterionNotMet when the scan does not find t_rev.
long reversibility_time(const Kernel& p, const Distribution& pi, double rho, long j_max);

}  // namespace revwalk
