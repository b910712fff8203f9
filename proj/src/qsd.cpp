#include "revwalk/qsd.hpp"

#include "revwalk/spectral.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace revwalk {

namespace {

Index position_in(const StateSet& e, Index x) {
  const auto it = std::find(e.begin(), e.end(), x);
  if (it == e.end()) fail(ErrorCode::InvalidParameter, "state " + std::to_string(x) + " is not in E");
  return static_cast<Index>(it - e.begin());
}

Matrix block_power(const Matrix& b, long j) {
  if (j < 0) fail(ErrorCode::InvalidParameter, "step count must be nonnegative");
  Matrix acc = Matrix::Identity(b.rows(), b.cols());
  Matrix base = b;
  for (long e = j; e > 0; e >>= 1) {
    if (e & 1L) acc = acc * base;
    if (e > 1) base = base * base;
  }
  return acc;
}

Vector renormalized(const Vector& w) {
  const double s = w.sum();
  if (s <= 0.0) fail(ErrorCode::InvalidParameter, "subset carries no stationary mass");
  return w / s;
}

}  // namespace

AbsorbingDecomposition AbsorbingDecomposition::make(Index n, std::vector<StateSet> subsets) {
  if (subsets.empty()) fail(ErrorCode::InvalidParameter, "at least one subset is required");
  std::set<Index> seen;
  for (const StateSet& e : subsets) {
    if (e.empty()) fail(ErrorCode::InvalidParameter, "subsets must be nonempty");
    if (static_cast<Index>(e.size()) >= n) fail(ErrorCode::InvalidParameter, "subsets must be proper");
    for (Index x : e) {
      if (x < 0 || x >= n) fail(ErrorCode::InvalidParameter, "state " + std::to_string(x) + " out of range");
      if (!seen.insert(x).second) {
        fail(ErrorCode::InvalidParameter, "state " + std::to_string(x) + " appears twice");
      }
    }
  }
  return AbsorbingDecomposition(n, std::move(subsets));
}

StateSet AbsorbingDecomposition::boundary(std::size_t i) const {
  const StateSet& e = subsets_.at(i);
  StateSet out;
  for (Index x = 0; x < n_; ++x) {
    if (std::find(e.begin(), e.end(), x) == e.end()) out.push_back(x);
  }
  return out;
}

Matrix restrict(const Kernel& p, const StateSet& e) {
  const Index n = p.size();
  if (e.empty() || static_cast<Index>(e.size()) >= n) {
    fail(ErrorCode::InvalidParameter, "E must be a nonempty proper subset");
  }
  std::set<Index> unique(e.begin(), e.end());
  if (unique.size() != e.size() || *unique.begin() < 0 || *unique.rbegin() >= n) {
    fail(ErrorCode::InvalidParameter, "E has repeated or out-of-range states");
  }
  const Index m = static_cast<Index>(e.size());
  Matrix b(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index k = 0; k < m; ++k) b(i, k) = p(e[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(k)]);
  }
  return b;
}

QuasiStationary qsd(const Kernel& p, const StateSet& e) {
  const Matrix b = restrict(p, e);
  if (!support_irreducible(b) || support_period(b) != 1) {
    fail(ErrorCode::NotIrreducibleBlock, "restricted block is not irreducible and aperiodic");
  }
  Eigen::EigenSolver<Matrix> es(b.transpose());
  const ComplexVector lam = es.eigenvalues();
  Index arg = 0;
  for (Index i = 1; i < lam.size(); ++i) {
    if (lam(i).real() > lam(arg).real()) arg = i;
  }
  Vector v = es.eigenvectors().col(arg).real();
  if (v.sum() < 0.0) v = -v;
  if (v.minCoeff() < -1e-10) fail(ErrorCode::NotIrreducibleBlock, "Perron vector changes sign");
  v = v.cwiseMax(0.0);
  v /= v.sum();
  // One refinement step brings the residual down to rounding level.
  const double rate = lam(arg).real();
  if (rate > 0.0) {
    v = (b.transpose() * v) / rate;
    v /= v.sum();
  }
  return QuasiStationary{Distribution::from_probs(v), rate};
}

double survival(const Kernel& p, const StateSet& e, Index x, long j) {
  const Matrix b = restrict(p, e);
  const Index pos = position_in(e, x);
  if (j < 0) fail(ErrorCode::InvalidParameter, "step count must be nonnegative");
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Unit(b.rows(), pos);
  for (long s = 0; s < j; ++s) row = row * b;
  return std::clamp(row.sum(), 0.0, 1.0);
}

Distribution conditional_law(const Kernel& p, const StateSet& e, Index x, long j) {
  const Matrix b = restrict(p, e);
  const Index pos = position_in(e, x);
  const Eigen::RowVectorXd row = block_power(b, j).row(pos);
  const double s = row.sum();
  if (!(s > 1e-300)) fail(ErrorCode::Extinct, "survival probability underflows");
  return Distribution::from_probs((row / s).transpose());
}

QsdBound qsd_lower_bound(const Kernel& p, const Distribution& pi, const AbsorbingDecomposition& decomp,
                         long j) {
  if (pi.size() != p.size() || decomp.states() != p.size()) {
    fail(ErrorCode::DimensionMismatch, "kernel, law and decomposition sizes differ");
  }
  if (j < 0) fail(ErrorCode::InvalidParameter, "step count must be nonnegative");
  // Zero entries are allowed here (never-visited boundary states).
  const double r = stationarity_residual(p, pi);
  if (r > 1e-8) fail(ErrorCode::NotStationary, "law is not stationary");

  QsdBound out{};
  if (j == 0) {
    out.lhs = pi.amplitudes().squaredNorm();
  } else {
    out.lhs = pi_average(flat_discriminant(p, j), pi);
  }

  out.pi_mass = 0.0;
  out.min_survival = 1.0;
  out.mixing_factor = 1.0;
  for (const StateSet& e : decomp.subsets()) {
    const Index m = static_cast<Index>(e.size());
    Vector w(m);
    for (Index i = 0; i < m; ++i) w(i) = pi(e[static_cast<std::size_t>(i)]);
    out.pi_mass += w.sum();
    const Vector pe = renormalized(w);

    const QuasiStationary q = qsd(p, e);
    const Vector& nu = q.nu.probs();
    const Matrix bj = block_power(restrict(p, e), j);

    double expected_tv = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double s = bj.row(i).sum();
      out.min_survival = std::min(out.min_survival, s);
      if (pe(i) == 0.0) continue;
      if (!(s > 1e-300)) fail(ErrorCode::Extinct, "survival probability underflows");
      expected_tv += pe(i) * tv_distance(bj.row(i).transpose() / s, nu);
    }
    double product_tv = 0.0;
    for (Index x = 0; x < m; ++x) {
      for (Index y = 0; y < m; ++y) product_tv += std::abs(pe(x) * nu(y) - nu(x) * pe(y));
    }
    product_tv *= 0.5;
    out.mixing_factor = std::min(out.mixing_factor, 1.0 - 2.0 * expected_tv - product_tv);
  }
  out.rhs = out.pi_mass * out.min_survival * out.mixing_factor;
  return out;
}

}  // namespace revwalk
