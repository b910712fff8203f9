#include "revwalk/spectral.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace revwalk {

namespace {

constexpr int kBoundsKCap = 4096;

using RowMetric = std::function<double(const Matrix&, const Vector&)>;

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorCode::InvalidParameter, "eps must lie in (0, 1)");
}

// Binary lifting over powers of P: `metric(P^t)` is nonincreasing in t, so
// the least t with metric <= eps is one past the largest t whose metric
// still exceeds eps.
long lifted_mixing_time(const Kernel& p, const Distribution& pi, double eps, long t_max,
                        const RowMetric& metric) {
  check_eps(eps);
  require_stationary(p, pi);
  if (t_max < 1) fail(ErrorCode::InvalidParameter, "t_max must be at least 1");
  const Vector& w = pi.probs();
  std::vector<Matrix> powers{p.matrix()};
  while ((1L << powers.size()) <= t_max) powers.push_back(powers.back() * powers.back());

  const Index n = p.size();
  Matrix current = Matrix::Identity(n, n);
  long t = 0;
  for (int i = static_cast<int>(powers.size()) - 1; i >= 0; --i) {
    const long step = 1L << i;
    if (t + step > t_max - 1) continue;
    Matrix candidate = current * powers[static_cast<std::size_t>(i)];
    if (metric(candidate, w) > eps) {
      current = std::move(candidate);
      t += step;
    }
  }
  const Matrix next = current * p.matrix();
  if (metric(next, w) > eps) {
    fail(ErrorCode::NotMixedWithin, "not mixed within t_max = " + std::to_string(t_max));
  }
  return t + 1;
}

}  // namespace

double symmetric_gap(const Vector& ascending) {
  const Index n = ascending.size();
  if (n < 2) return 1.0;
  double worst = 0.0;
  for (Index i = 0; i + 1 < n; ++i) worst = std::max(worst, std::abs(ascending(i)));
  return 1.0 - worst;
}

double spectral_gap(const Kernel& p, const Distribution& pi) {
  if (pi.size() != p.size()) fail(ErrorCode::DimensionMismatch, "distribution size mismatch");
  const double r = detailed_balance_residual(p, pi);
  if (r > 1e-8) fail(ErrorCode::NotReversible, "detailed balance residual " + std::to_string(r));
  if (!pi.strictly_positive()) fail(ErrorCode::InvalidParameter, "pi must be strictly positive");
  const Vector a = pi.amplitudes();
  Matrix s = a.asDiagonal() * p.matrix() * a.cwiseInverse().asDiagonal();
  s = 0.5 * (s + s.transpose()).eval();
  return symmetric_gap(symmetric_eigenvalues(s));
}

SpectralReport pseudo_spectral_gap(const Kernel& p, const Distribution& pi, int k_max) {
  require_stationary(p, pi);
  if (k_max < 1) fail(ErrorCode::InvalidParameter, "k_max must be at least 1");
  const Vector a = pi.amplitudes();
  // C = diag(sqrt pi) P diag(sqrt pi)^-1, so that the conjugate of
  // P^k (P*)^k is C^k (C^k)^T: symmetric positive semidefinite.
  const Matrix c = a.asDiagonal() * p.matrix() * a.cwiseInverse().asDiagonal();
  Matrix ck = c;
  SpectralReport report;
  report.k_max = k_max;
  report.gamma_inf = -1.0;
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) ck = ck * c;
    const Matrix m = ck * ck.transpose();
    const Vector ev = symmetric_eigenvalues(m);
    const double scaled = symmetric_gap(ev) / k;
    report.scaled_gaps.push_back(scaled);
    if (k == 1) {
      report.gamma = symmetric_gap(ev);
      report.eigenvalues = ev.reverse();
    }
    if (scaled > report.gamma_inf) {
      report.gamma_inf = scaled;
      report.tau_rev = k;
    }
  }
  report.saturated = report.tau_rev == k_max && k_max > 1;
  return report;
}

double tv_distance(const Distribution& a, const Distribution& b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "distribution size mismatch");
  return tv_distance(a.probs(), b.probs());
}

double hellinger_affinity(const Distribution& a, const Distribution& b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "distribution size mismatch");
  return hellinger_affinity(a.probs(), b.probs());
}

double worst_row_tv(const Matrix& pt, const Vector& pi) {
  double worst = 0.0;
  for (Index x = 0; x < pt.rows(); ++x) {
    worst = std::max(worst, tv_distance(pt.row(x).transpose(), pi));
  }
  return worst;
}

double worst_row_hellinger(const Matrix& pt, const Vector& pi) {
  double worst = 0.0;
  for (Index x = 0; x < pt.rows(); ++x) {
    const double aff = hellinger_affinity(pt.row(x).transpose(), pi);
    worst = std::max(worst, std::sqrt(std::max(0.0, 1.0 - aff)));
  }
  return worst;
}

long mixing_time(const Kernel& p, const Distribution& pi, double eps, long t_max) {
  return lifted_mixing_time(p, pi, eps, t_max, worst_row_tv);
}

long hellinger_mixing_time(const Kernel& p, const Distribution& pi, double eps, long t_max) {
  return lifted_mixing_time(p, pi, eps, t_max, worst_row_hellinger);
}

long default_t_max(const Kernel& p) {
  const long n = static_cast<long>(p.size());
  return 10 * n * n * n;
}

MixingBounds mixing_gap_bounds_check(const Kernel& p, const Distribution& pi, double eps,
                                     long t_max, int k_max) {
  const long tau = mixing_time(p, pi, eps, t_max);
  const int k_used =
      std::max(k_max, static_cast<int>(std::min<long>(tau, static_cast<long>(kBoundsKCap))));
  const SpectralReport report = pseudo_spectral_gap(p, pi, k_used);
  const double g = report.gamma_inf;
  return MixingBounds{(1.0 - eps) / g, tau, (1.0 - std::log(2.0 * eps * pi.min())) / g, g, k_used};
}

SweepRow sweep_row(const Kernel& pj, const Distribution& pi, long j) {
  SweepRow row;
  row.j = j;
  Discriminant d = cross_discriminant(pj, pj);
  d.flavor = DiscriminantFlavor::flat;
  d.symmetric = true;
  row.one_minus_pi_d_pi = 1.0 - pi_average(d, pi);
  if (!is_primitive(d)) return row;
  try {
    const MostReversible m = most_reversible_distribution(d);
    const Vector& s = m.spectrum;  // descending
    double second = 0.0;
    for (Index i = 1; i < s.size(); ++i) second = std::max(second, std::abs(s(i)));
    const double gamma_q = 1.0 - second / m.lambda_max;
    const double overlap = pi.amplitudes().dot(m.perron);
    row.gamma_q = gamma_q;
    row.lambda_max = m.lambda_max;
    row.overlap = overlap * overlap;
    row.ratio = gamma_q > 0.0 ? row.one_minus_pi_d_pi / gamma_q
                              : std::numeric_limits<double>::infinity();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPrimitive) throw;
  }
  return row;
}

namespace {

template <typename Stop>
std::vector<SweepRow> run_sweep(const Kernel& p, const Distribution& pi, long j_max, Stop stop) {
  require_stationary(p, pi);
  if (j_max < 1) fail(ErrorCode::InvalidParameter, "j_max must be at least 1");
  std::vector<SweepRow> rows;
  Matrix pj = p.matrix();
  for (long j = 1; j <= j_max; ++j) {
    if (j > 1) pj = pj * p.matrix();
    rows.push_back(sweep_row(kernel_from_rows(pj), pi, j));
    if (stop(rows.back())) break;
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> sweep(const Kernel& p, const Distribution& pi, long j_max) {
  return run_sweep(p, pi, j_max, [](const SweepRow&) { return false; });
}

ReversibilityScan scan_reversibility(const Kernel& p, const Distribution& pi, double rho,
                                     long j_max) {
  if (!(rho > 0.0 && rho < 1.0)) fail(ErrorCode::InvalidParameter, "rho must lie in (0, 1)");
  auto met = [rho](const SweepRow& r) {
    return r.gamma_q.has_value() && r.one_minus_pi_d_pi <= rho * *r.gamma_q;
  };
  ReversibilityScan scan;
  scan.rows = run_sweep(p, pi, j_max, met);
  if (!scan.rows.empty() && met(scan.rows.back())) scan.t_rev = scan.rows.back().j;
  return scan;
}

long reversibility_time(const Kernel& p, const Distribution& pi, double rho, long j_max) {
  const ReversibilityScan scan = scan_reversibility(p, pi, rho, j_max);
  if (!scan.t_rev) {
    fail(ErrorCode::CriterionNotMet,
         "reversibility on pi-average not reached within j_max = " + std::to_string(j_max));
  }
  return *scan.t_rev;
}

}  // namespace revwalk
