#include "revwalk/reversibilization.hpp"

#include <sstream>

namespace revwalk {

Discriminant cross_discriminant(const Kernel& p1, const Kernel& p2) {
  if (p1.size() != p2.size()) fail(ErrorCode::DimensionMismatch, "kernels differ in size");
  Discriminant d;
  d.entries = p1.matrix().cwiseProduct(p2.matrix().transpose()).cwiseSqrt();
  d.flavor = DiscriminantFlavor::cross;
  d.symmetric = is_symmetric(d.entries, 1e-12);
  return d;
}

Discriminant flat_discriminant(const Kernel& p, long j) {
  const Kernel pj = kernel_power(p, j);
  Discriminant d = cross_discriminant(pj, pj);
  d.flavor = DiscriminantFlavor::flat;
  d.symmetric = true;
  return d;
}

Discriminant curved_discriminant(const Kernel& p, const Distribution& pi, long j) {
  require_stationary(p, pi);
  Discriminant d = cross_discriminant(kernel_power(p, j), kernel_power(time_reversal(p, pi), j));
  d.flavor = DiscriminantFlavor::curved;
  return d;
}

Kernel additive_rev(const Kernel& p, const Distribution& pi) {
  return kernel_from_rows(0.5 * (p.matrix() + time_reversal(p, pi).matrix()));
}

Kernel multiplicative_rev(const Kernel& p, const Distribution& pi) {
  return kernel_from_rows(p.matrix() * time_reversal(p, pi).matrix());
}

bool is_primitive(const Matrix& nonnegative) {
  const Index n = nonnegative.rows();
  if (n == 0 || nonnegative.cols() != n) return false;
  Matrix base = support_of(nonnegative);
  // Exponent (n-1)^2 + 1; once a power is entrywise positive every higher
  // power is too (each row of a primitive matrix has a nonzero entry).
  long long e = static_cast<long long>(n - 1) * static_cast<long long>(n - 1) + 1;
  Matrix acc;
  bool have = false;
  for (;;) {
    if (e & 1LL) {
      acc = have ? support_of(acc * base) : base;
      have = true;
      if ((acc.array() > 0.0).all()) return true;
    }
    e >>= 1;
    if (e == 0) break;
    base = support_of(base * base);
  }
  return (acc.array() > 0.0).all();
}

MostReversible most_reversible_distribution(const Discriminant& d) {
  if (!d.symmetric) fail(ErrorCode::NotSymmetric, "most reversible law needs a flat discriminant");
  if (!is_primitive(d)) fail(ErrorCode::NotPrimitive, "flat discriminant is not primitive");
  Eigen::SelfAdjointEigenSolver<Matrix> es(d.entries);
  const Index n = d.size();
  Vector v = es.eigenvectors().col(n - 1);
  if (v.sum() < 0.0) v = -v;
  if (v.minCoeff() <= 0.0) {
    fail(ErrorCode::NotPrimitive, "Perron vector is not strictly positive");
  }
  v.normalize();
  const double quad = v.dot(d.entries * v);
  const double top = es.eigenvalues()(n - 1);
  if (std::abs(quad - top) > 1e-10) {
    std::ostringstream os;
    os << "quadratic form " << quad << " disagrees with eigenvalue " << top;
    fail(ErrorCode::NotPrimitive, os.str());
  }
  Vector mu = v.cwiseAbs2();
  mu /= mu.sum();
  return MostReversible{Distribution::from_probs(mu), quad, v, es.eigenvalues().reverse()};
}

GeometricRev geometric_rev(const Discriminant& flat) {
  MostReversible m = most_reversible_distribution(flat);
  const Vector& v = m.perron;
  const Matrix q = v.cwiseInverse().asDiagonal() * flat.entries * v.asDiagonal() / m.lambda_max;
  return GeometricRev{kernel_from_rows(q), m.mu, m.lambda_max, m.spectrum};
}

GeometricRev geometric_rev(const Kernel& p, long j) { return geometric_rev(flat_discriminant(p, j)); }

double pi_average(const Discriminant& d, const Distribution& pi) {
  if (pi.size() != d.size()) fail(ErrorCode::DimensionMismatch, "distribution size mismatch");
  const Vector a = pi.amplitudes();
  return a.dot(d.entries * a);
}

GroupDeviation group_deviation(const Kernel& p) {
  if (!p.is_group_walk()) fail(ErrorCode::InvalidParameter, "kernel was not built as a group walk");
  const Distribution pi = Distribution::uniform(p.size());
  const Discriminant flat = flat_discriminant(p);
  const Kernel pa = additive_rev(p, pi);
  const Discriminant curved_a = curved_discriminant(pa, pi);
  return GroupDeviation{spectral_norm(flat.entries - curved_a.entries), 1.0 - pi_average(flat, pi)};
}

}  // namespace revwalk
