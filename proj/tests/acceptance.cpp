// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "corpus.hpp"
#include "revwalk/qsd.hpp"
#include "revwalk/walk.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace revwalk;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

Vector desc(Vector v) {
  std::sort(v.data(), v.data() + v.size(), std::greater<double>());
  return v;
}

std::vector<corpus::Named> walk_corpus() {
  auto out = corpus::all();
  out.push_back({"bottleneck19", bottleneck_graph(19)});
  return out;
}

void ac1(Outcome& o) {
  double worst_half = 0.0, worst_rank_one = 0.0;
  for (Index n : {3, 5, 8, 13}) {
    const Matrix d = flat_discriminant(circle_walk(n, 0.5, 0.0)).entries;
    worst_half = std::max(worst_half, (d - 0.5 * Matrix::Identity(n, n)).cwiseAbs().maxCoeff());
  }
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (Index n : {2, 4, 9, 16}) {
    Vector w(n);
    for (Index i = 0; i < n; ++i) w(i) = u(rng);
    const Distribution pi = Distribution::from_probs(w / w.sum());
    const Vector a = pi.amplitudes();
    const Matrix d = flat_discriminant(perfectly_mixed(pi)).entries;
    worst_rank_one = std::max(worst_rank_one, (d - a * a.transpose()).cwiseAbs().maxCoeff());
  }
  o.require(worst_half <= 1e-14, "half identity");
  o.require(worst_rank_one <= 1e-12, "rank one");
  o.detail << " I/2 err " << worst_half << ", |pi><pi| err " << worst_rank_one;
}

void ac2(Outcome& o) {
  double worst = 0.0;
  const auto kernels = corpus::random_kernels(50, 20240611);
  for (const auto& [name, k] : kernels) {
    const Distribution pi = stationary_distribution(k);
    const Matrix d = curved_discriminant(k, pi).entries;
    const Matrix pp = time_reversal(k, pi).matrix() * k.matrix();
    worst = std::max(worst, spectrum_distance(general_eigenvalues(d), general_eigenvalues(k.matrix())));
    worst = std::max(worst, spectrum_distance(general_eigenvalues(d.transpose() * d), general_eigenvalues(pp)));
  }
  o.require(worst <= 1e-8, "spectra differ");
  o.detail << " " << kernels.size() << " kernels, max spectrum distance " << worst;
}

void ac3(Outcome& o) {
  double worst = 0.0;
  int count = 0;
  for (const auto& [name, k] : corpus::all()) {
    const Discriminant d = flat_discriminant(k);
    if (!is_primitive(d)) continue;
    ++count;
    const GeometricRev g = geometric_rev(d);
    const Vector q = desc(general_eigenvalues(g.q.matrix()).real());
    worst = std::max(worst, (g.lambda_max * q - desc(symmetric_eigenvalues(d.entries))).cwiseAbs().maxCoeff());
  }
  o.require(worst <= 1e-8, "spectra relation");
  o.detail << " " << count << " primitive instances, max err " << worst;
}

void ac4(Outcome& o) {
  double beta_lo = 2.0, beta_hi = 0.0, max_err = 0.0;
  const int grid = 200000;
  for (double eps : {0.5, 0.2, 0.05}) {
    for (int d : {2, 4, 8, 16}) {
      const ChebyshevPoly v = fast_forward_poly(eps, d);
      const double b = scaling_factor(v);
      beta_lo = std::min(beta_lo, b);
      beta_hi = std::max(beta_hi, b);
      double m = 0.0;
      for (int i = 0; i <= grid; ++i) m = std::max(m, std::abs(v(-1.0 + 2.0 * i / grid)));
      max_err = std::max(max_err, std::abs(m - 1.0));
    }
  }
  o.require(beta_lo >= 1.0 - 1e-9 && beta_hi <= 1.0 + 1e-6, "beta out of range");
  o.require(max_err <= 1e-9, "sup norm");
  o.detail << " beta in [" << beta_lo << ", " << beta_hi << "], |max|v| - 1| " << max_err;
}

void ac5(Outcome& o) {
  double rank_one = 0.0, ladder = 0.0;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (Index n : {2, 3, 6, 10}) {
    Vector w(n);
    for (Index i = 0; i < n; ++i) w(i) = u(rng);
    const Distribution pi = Distribution::from_probs(w / w.sum());
    const IsometryEncoding box = isometry(perfectly_mixed(pi));
    const WalkOperator walk = qubitized_walk(swap_op(n), box);
    const Vector a = pi.amplitudes();
    const Matrix target = 2.0 * a * a.transpose() - Matrix::Identity(n, n);
    rank_one = std::max(rank_one, spectral_norm(Matrix(box.mat.transpose() * walk.u * walk.u * box.mat - target)));
  }
  for (const auto& [name, k] : corpus::all()) {
    const IsometryEncoding box = isometry(k);
    const Matrix d = flat_discriminant(k).entries;
    const std::vector<Matrix> lad = chebyshev_ladder(swap_op(k.size()), box, 64);
    for (int m = 0; m <= 64; ++m) {
      ladder = std::max(ladder, spectral_norm(Matrix(lad[static_cast<std::size_t>(m)] -
                                                     apply_to_symmetric(ChebyshevPoly::basis(m), d))));
    }
  }
  o.require(rank_one <= 1e-10, "rank-one reflection");
  o.require(ladder <= 1e-9, "ladder");
  o.detail << " rank-one err " << rank_one << ", ladder err " << ladder;
}

void ac6(Outcome& o) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  Vector c(12);
  for (Index i = 0; i < c.size(); ++i) c(i) = u(rng);
  const ChebyshevPoly generic(c);
  const ChebyshevPoly v = fast_forward_poly(0.2, 8);
  double et = 0.0, svt = 0.0;
  int count = 0;
  for (const auto& [name, k] : walk_corpus()) {
    if (k.size() > 40) continue;
    ++count;
    const Distribution pi = stationary_distribution(k);
    const IsometryEncoding box = isometry(k), box_rev = isometry(time_reversal(k, pi));
    const WalkOperator s = swap_op(k.size());
    const Matrix d = flat_discriminant(k).entries;
    for (const ChebyshevPoly& p : {generic, v}) {
      const TransformResult t = gqet_emulate(s, box, p);
      const Matrix block = t.rescaled ? Matrix(t.beta * t.block) : t.block;
      et = std::max(et, spectral_norm(Matrix(block - apply_to_symmetric(p, d))));
    }
    const TransformResult t = gqsvt_emulate(s, box, box_rev, v);
    const Matrix block = t.rescaled ? Matrix(t.beta * t.block) : t.block;
    svt = std::max(svt, spectral_norm(Matrix(block - apply_to_singular(v, curved_discriminant(k, pi).entries))));
  }
  o.require(et <= 1e-8, "gqet");
  o.require(svt <= 1e-8, "gqsvt");
  o.detail << " " << count << " instances, gqet err " << et << ", gqsvt err " << svt;
}

void ac7(Outcome& o) {
  auto kernels = corpus::all();
  kernels.push_back({"bottleneck31", bottleneck_graph(31)});
  int checked = 0;
  double slack = std::numeric_limits<double>::infinity();
  for (const auto& [name, k] : kernels) {
    const Discriminant d = flat_discriminant(k);
    if (!is_primitive(d)) continue;
    const Distribution pi = stationary_distribution(k);
    const MostReversible m = most_reversible_distribution(d);
    const double second = std::max(std::abs(m.spectrum(1)), std::abs(m.spectrum(m.spectrum.size() - 1)));
    const double gq = 1.0 - second / m.lambda_max;
    const double bound = 1.0 - (m.lambda_max - pi_average(d, pi)) / (m.lambda_max * gq);
    if (bound < 0.0) continue;
    ++checked;
    const double ov = std::pow(pi.amplitudes().dot(m.perron), 2);
    slack = std::min(slack, ov - bound);
    o.require(ov >= bound - 1e-10, name);
  }
  o.detail << " " << checked << " instances with nonnegative bound, min slack " << slack;
}

void ac8(Outcome& o) {
  int count = 0;
  for (const auto& [name, k] : corpus::all()) {
    const Distribution pi = stationary_distribution(k);
    for (double eps : {0.25, 0.125}) {
      const MixingBounds b = mixing_gap_bounds_check(k, pi, eps, default_t_max(k));
      const double t = static_cast<double>(b.tau);
      o.require(b.lower <= t && t <= b.upper, name);
      ++count;
    }
  }
  o.detail << " " << count << " (kernel, eps) pairs";
}

void ac9(Outcome& o) {
  const Kernel k = bottleneck_graph(31);
  const Distribution pi = stationary_distribution(k);
  const ReversibilityScan scan = scan_reversibility(k, pi, 0.1, 2000);
  const long tau = mixing_time(k, pi, 0.25, default_t_max(k));
  if (!scan.t_rev) {
    o.require(false, "t_rev not reached within j_max 2000");
    return;
  }
  const long t = *scan.t_rev;
  const double gap = *scan.rows.back().gamma_q;
  int degree = 1;
  while (delta_k(0.1, degree) > gap) ++degree;
  o.require(t * 10 <= tau, "t_rev > tau/10");
  o.require(t * degree <= tau, "t_rev * degree > tau");
  o.detail << " t_rev " << t << ", gamma(Q) " << gap << ", degree " << degree << ", t_rev*degree " << t * degree
           << ", tau(1/4) " << tau;
}

void ac10(Outcome& o) {
  double slack = std::numeric_limits<double>::infinity();
  for (Index n : {3, 5, 7, 31}) {
    const Kernel k = bottleneck_graph(n);
    const Distribution pi = stationary_distribution(k);
    std::vector<Index> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = i;
      b[static_cast<std::size_t>(i)] = n + 1 + i;
    }
    const AbsorbingDecomposition decomp = AbsorbingDecomposition::make(k.size(), {a, b});
    for (long j : {1L, static_cast<long>(n), static_cast<long>(n * n), static_cast<long>(4 * n * n)}) {
      const QsdBound q = qsd_lower_bound(k, pi, decomp, j);
      slack = std::min(slack, q.lhs - q.rhs);
      o.require(q.lhs >= q.rhs - 1e-10, "N=" + std::to_string(n) + " j=" + std::to_string(j));
    }
  }
  o.detail << " 16 cases, min lhs - rhs " << slack;
}

void ac11(Outcome& o) {
  double worst = 0.0;
  for (Index n : {5, 7, 12}) {
    const GroupDeviation g = group_deviation(cyclic_walk(n, {{1, 0.75}, {-1, 0.25}}));
    worst = std::max(worst, std::abs(g.lhs - g.rhs));
  }
  const GroupDeviation z7 = group_deviation(cyclic_walk(7, {{1, 0.75}, {-1, 0.25}}));
  const double closed = 1.0 - std::sqrt(3.0) / 2.0;
  const double err7 = std::abs(z7.lhs - closed);
  o.require(worst <= 1e-10, "norm identity");
  o.require(err7 <= 1e-10, "Z7 closed form");
  o.detail << " max |lhs - rhs| " << worst << ", Z7 err " << err7;
}

void ac12(Outcome& o) {
  // resample from pi with probability 3/4, else take a winning-streak step;
  // the streak kernel is nonreversible with law 2^-(x+1)
  const Index n = 6;
  const double a = 0.25;
  Matrix streak = Matrix::Zero(n, n);
  Vector w(n);
  for (Index x = 0; x < n; ++x) {
    streak(x, std::min(x + 1, n - 1)) += 0.5;
    streak(x, 0) += 0.5;
    w(x) = std::ldexp(1.0, -static_cast<int>(std::min(x + 1, n - 1)));
  }
  const Distribution pi = Distribution::from_probs(w);
  const Kernel k = kernel_from_rows((1.0 - a) * perfectly_mixed(pi).matrix() + a * streak);
  const long h = hellinger_mixing_time(k, pi, 0.05, default_t_max(k));
  o.require(h <= 5, "Hellinger mixing time exceeds 5");
  const ReflectionResult r = reflect_mixed(k, pi, 0.05, 0.1);
  const double floor = 1.0 - 3.0 * std::sqrt(8.0) * 0.05 - 0.1;
  o.require(*r.overlap_pi_mu >= floor, "overlap below floor");
  o.require(!classify(k, pi).reversible.value_or(true), "kernel is reversible");
  o.detail << " Hellinger tau " << h << ", t " << r.k_steps << ", overlap " << *r.overlap_pi_mu << " (1 - overlap " << 1.0 - *r.overlap_pi_mu << ") >= " << floor;
}

void ac13(Outcome& o) {
  const Kernel k = bottleneck_graph(7);
  const Distribution pi = stationary_distribution(k);
  const long tau = mixing_time(k, pi, 0.25, default_t_max(k));
  const ReflectionResult c = reflect_curved(k, pi, 0.1);
  const ReflectionResult f = reflect_flat(k, pi, 0.1, 0.01, 2000);
  o.require(c.error_vs_pi <= 0.1, "curved error");
  o.require(c.walk_uses <= tau, "curved walk uses");
  o.require(*f.error_vs_mu <= 0.1, "flat error");
  o.require(f.walk_uses <= tau, "flat walk uses");
  o.detail << " tau " << tau << "; curved err " << c.error_vs_pi << " uses " << c.walk_uses << "; flat(rho 0.01) err "
           << *f.error_vs_mu << " (vs pi " << f.error_vs_pi << ") uses " << f.walk_uses;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"AC1 discriminant identities", ac1},
      {"AC2 curved similarity", ac2},
      {"AC3 spectra relation", ac3},
      {"AC4 scaling factor", ac4},
      {"AC5 qubitization", ac5},
      {"AC6 transform cross-oracle", ac6},
      {"AC7 overlap bound", ac7},
      {"AC8 mixing sandwich", ac8},
      {"AC9 bottleneck speedup regime", ac9},
      {"AC10 qsd bound", ac10},
      {"AC11 group deviation", ac11},
      {"AC12 mixed-kernel overlap", ac12},
      {"AC13 end-to-end reflection", ac13},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s:%s [%.2fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
