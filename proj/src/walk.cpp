#include "revwalk/walk.hpp"

#include <cmath>
#include <string>

namespace revwalk {

namespace {

constexpr int kMaxDegree = 100000;

void require_walk_size(Index n) {
  if (n > kMaxWalkStates) {
    fail(ErrorCode::TooLarge, "walk space limited to " + std::to_string(kMaxWalkStates) + " states");
  }
}

Matrix reflection_about(const Vector& unit) {
  const Index n = unit.size();
  return 2.0 * unit * unit.transpose() - Matrix::Identity(n, n);
}

void require_symmetric_encoding(const WalkOperator& u, const IsometryEncoding& iso) {
  if (u.dim() != iso.dim()) fail(ErrorCode::DimensionMismatch, "walk and isometry dimensions differ");
  if (!u.perm.empty()) {
    for (std::size_t i = 0; i < u.perm.size(); ++i) {
      if (u.perm[static_cast<std::size_t>(u.perm[i])] != static_cast<Index>(i)) {
        fail(ErrorCode::NotSymmetricEncoding, "permutation is not an involution");
      }
    }
    return;
  }
  if (!is_symmetric(u.u, 1e-10)) fail(ErrorCode::NotSymmetricEncoding, "walk operator is not symmetric");
}

// Walks iso^T W^m iso for m = 0..degree, handing each block to `sink`.
template <typename Sink>
void run_ladder(const WalkOperator& u, const IsometryEncoding& iso, int degree, Sink&& sink) {
  const Matrix& b = iso.mat;
  Matrix x = b;
  sink(0, Matrix(Matrix::Identity(iso.states(), iso.states())));
  for (int m = 1; m <= degree; ++m) {
    const Matrix y = u.apply(x);
    x = 2.0 * b * (b.transpose() * y) - y;
    sink(m, Matrix(b.transpose() * x));
  }
}

// (p + e) / (1 + e): keeps the tail inside [0, 2e/(1+e)] when |p| <= e there,
// so the reflection 2p - 1 never dips below -1.
ChebyshevPoly lifted(const ChebyshevPoly& p, double e) {
  return (1.0 / (1.0 + e)) * (p + e * ChebyshevPoly::basis(0));
}

struct Assembled {
  Matrix approx;
  double beta;
};

Assembled assemble(const TransformResult& t) {
  Matrix block = t.rescaled ? Matrix(t.beta * t.block) : t.block;
  block = 0.5 * (block + block.transpose()).eval();
  const Index n = block.rows();
  return {2.0 * block - Matrix::Identity(n, n), t.beta};
}

void require_eps(double eps, const char* name) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorCode::InvalidParameter, std::string(name) + " must lie in (0, 1)");
}

void require_ergodic(const Kernel& p, const Distribution& pi) {
  require_stationary(p, pi);
  if (!classify(p).ergodic) fail(ErrorCode::NotErgodic, "kernel is not ergodic");
}

}  // namespace

Matrix WalkOperator::apply(const Matrix& x) const {
  if (perm.empty()) return u * x;
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) out.row(static_cast<Index>(i)) = x.row(perm[i]);
  return out;
}

IsometryEncoding isometry(const Kernel& p) {
  const Index n = p.size();
  require_walk_size(n);
  Matrix m = Matrix::Zero(n * n, n);
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) m(x * n + y, x) = std::sqrt(p(x, y));
  }
  return IsometryEncoding{std::move(m)};
}

WalkOperator swap_op(Index n) {
  require_walk_size(n);
  WalkOperator s;
  s.kind = WalkKind::swap;
  s.u = Matrix::Zero(n * n, n * n);
  s.perm.resize(static_cast<std::size_t>(n * n));
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      s.u(x * n + y, y * n + x) = 1.0;
      s.perm[static_cast<std::size_t>(x * n + y)] = y * n + x;
    }
  }
  return s;
}

WalkOperator szegedy_reflection(const IsometryEncoding& iso) {
  WalkOperator r;
  r.kind = WalkKind::reflection;
  r.u = 2.0 * iso.mat * iso.mat.transpose() - Matrix::Identity(iso.dim(), iso.dim());
  return r;
}

double pue_verify(const WalkOperator& u, const IsometryEncoding& left, const IsometryEncoding& right,
                  const Matrix& a) {
  if (left.dim() != u.dim() || right.dim() != u.dim() || a.rows() != left.states() ||
      a.cols() != right.states()) {
    fail(ErrorCode::DimensionMismatch, "encoding dimensions are inconsistent");
  }
  return spectral_norm(left.mat.transpose() * u.apply(right.mat) - a);
}

WalkOperator qubitized_walk(const WalkOperator& u, const IsometryEncoding& iso) {
  require_symmetric_encoding(u, iso);
  WalkOperator w;
  w.kind = WalkKind::qubitized;
  const Matrix r = 2.0 * iso.mat * iso.mat.transpose() - Matrix::Identity(iso.dim(), iso.dim());
  w.u = r * u.u;
  return w;
}

std::vector<Matrix> chebyshev_ladder(const WalkOperator& u, const IsometryEncoding& iso, int m_max) {
  require_symmetric_encoding(u, iso);
  if (m_max < 0) fail(ErrorCode::InvalidParameter, "ladder length must be nonnegative");
  std::vector<Matrix> out;
  run_ladder(u, iso, m_max, [&out](int, Matrix block) { out.push_back(std::move(block)); });
  return out;
}

Hermitianization hermitianize(const WalkOperator& u, const IsometryEncoding& left,
                              const IsometryEncoding& right) {
  require_walk_size(std::max(left.states(), right.states()));
  const Index big = u.dim();
  if (left.dim() != big || right.dim() != big) {
    fail(ErrorCode::DimensionMismatch, "encoding dimensions are inconsistent");
  }
  Hermitianization h;
  h.u.kind = WalkKind::hermitianized;
  h.u.u = Matrix::Zero(2 * big, 2 * big);
  h.u.u.topRightCorner(big, big) = u.u;
  h.u.u.bottomLeftCorner(big, big) = u.u.transpose();
  if (!u.perm.empty()) {
    std::vector<Index> inv(u.perm.size());
    for (std::size_t i = 0; i < u.perm.size(); ++i) inv[static_cast<std::size_t>(u.perm[i])] = static_cast<Index>(i);
    h.u.perm.resize(2 * u.perm.size());
    for (std::size_t i = 0; i < u.perm.size(); ++i) {
      h.u.perm[i] = big + u.perm[i];
      h.u.perm[u.perm.size() + i] = inv[i];
    }
  }
  const Index nl = left.states(), nr = right.states();
  h.iso.mat = Matrix::Zero(2 * big, nl + nr);
  h.iso.mat.topLeftCorner(big, nl) = left.mat;
  h.iso.mat.bottomRightCorner(big, nr) = right.mat;
  return h;
}

TransformResult gqet_emulate(const WalkOperator& u, const IsometryEncoding& iso, const ChebyshevPoly& p) {
  require_symmetric_encoding(u, iso);
  TransformResult out;
  out.beta = scaling_factor(p);
  if (out.beta > 10.0) fail(ErrorCode::ScalingViolation, "scaling factor " + std::to_string(out.beta));
  ChebyshevPoly q = p;
  if (out.beta > 1.0 + 1e-6) {
    q = (1.0 / out.beta) * p;
    out.rescaled = true;
  }
  out.block = Matrix::Zero(iso.states(), iso.states());
  run_ladder(u, iso, q.degree(), [&](int m, const Matrix& block) {
    if (q[m] != 0.0) out.block += q[m] * block;
  });
  out.walk_uses = q.degree();
  return out;
}

TransformResult gqsvt_emulate(const WalkOperator& u, const IsometryEncoding& left,
                              const IsometryEncoding& right, const ChebyshevPoly& p) {
  if (p.parity() != Parity::even) fail(ErrorCode::NotEvenParity, "singular value transform needs even p");
  const Hermitianization h = hermitianize(u, left, right);
  TransformResult full = gqet_emulate(h.u, h.iso, p);
  const Index nr = right.states();
  full.block = full.block.bottomRightCorner(nr, nr).eval();
  return full;
}

std::string to_string(ReflectionMethod m) {
  switch (m) {
    case ReflectionMethod::flat: return "flat";
    case ReflectionMethod::curved: return "curved";
    case ReflectionMethod::mixed: return "mixed";
  }
  return "unknown";
}

ReflectionResult reflect_curved(const Kernel& p, const Distribution& pi, double eps, int k_max) {
  require_eps(eps, "eps");
  require_walk_size(p.size());
  require_ergodic(p, pi);
  const SpectralReport report = pseudo_spectral_gap(p, pi, k_max);
  const long k = report.tau_rev;
  const Kernel pk = kernel_power(p, k);
  const Kernel pks = kernel_power(time_reversal(p, pi), k);
  const Matrix curved = cross_discriminant(pk, pks).entries;

  Eigen::JacobiSVD<Matrix> svd(curved);
  const Vector& s = svd.singularValues();
  const double delta = 1.0 - (s.size() > 1 ? s(1) : 0.0);
  if (delta <= 1e-9) fail(ErrorCode::GapClosed, "curved discriminant has no singular gap");

  // Tail budget eps/4 before the lift, i.e. below eps/2 after it.
  const double e = eps / 4.0;
  int d = 2;
  while (delta_k(e, d) > delta) {
    d += 2;
    if (d > kMaxDegree) fail(ErrorCode::GapClosed, "required degree exceeds limit");
  }
  const ChebyshevPoly poly = lifted(fast_forward_poly(e, d), e);
  const TransformResult t = gqsvt_emulate(swap_op(p.size()), isometry(pk), isometry(pks), poly);
  const Assembled a = assemble(t);

  ReflectionResult r;
  r.method = ReflectionMethod::curved;
  r.approx = a.approx;
  r.beta = a.beta;
  r.error_vs_pi = spectral_norm(r.approx - reflection_about(pi.amplitudes()));
  r.degree = poly.degree();
  r.k_steps = k;
  r.walk_uses = static_cast<int>(k * r.degree);
  r.polynomial = "fast_forward";
  r.poly = poly;
  r.gap = delta;
  return r;
}

ReflectionResult reflect_flat(const Kernel& p, const Distribution& pi, double eps, double rho,
                              long j_max) {
  require_eps(eps, "eps");
  require_walk_size(p.size());
  require_ergodic(p, pi);
  const long t = reversibility_time(p, pi, rho, j_max);
  const Kernel pt = kernel_power(p, t);
  const Discriminant d = flat_discriminant(pt);
  const MostReversible m = most_reversible_distribution(d);
  const Vector& lam = m.spectrum;
  const double top = lam(0);
  double rest_abs = 0.0;
  for (Index i = 1; i < lam.size(); ++i) rest_abs = std::max(rest_abs, std::abs(lam(i)));
  const double rest_max = lam.size() > 1 ? lam(1) : -1.0;
  const double half = eps / 2.0;

  struct Candidate {
    ChebyshevPoly poly;
    std::string name;
    bool certified;
    double gap;
  };
  std::optional<Candidate> best;
  auto consider = [&best](Candidate c) {
    if (!c.certified) return;
    if (!best || c.poly.degree() < best->poly.degree()) best = std::move(c);
  };

  // Fast-forward: tail |lambda| <= 1 - delta_d maps into [0, eps/2] after
  // the lift; the top must land at or above 1 - eps/2.
  const double e = eps / 4.0;
  const double gap_abs = 1.0 - rest_abs;
  if (gap_abs > 1e-9) {
    int deg = 1;
    while (delta_k(e, deg) > gap_abs && deg <= kMaxDegree) ++deg;
    if (deg <= kMaxDegree) {
      ChebyshevPoly poly = lifted(fast_forward_poly(e, deg), e);
      const bool ok = poly(top) >= 1.0 - half;
      consider({std::move(poly), "fast_forward", ok, gap_abs});
    }
  }

  // Composite selection: tail below 1 - delta_k, top above 1 - c_k delta_k.
  const double gap_top = 1.0 - rest_max;
  if (gap_top <= 1e-9 && !best) fail(ErrorCode::GapClosed, "flat discriminant has no gap");
  std::optional<Candidate> composite;
  if (gap_top > 1e-9) {
    int k = 1;
    while (delta_k(0.25, k) > gap_top && k <= kMaxDegree) k += 2;
    if (k <= kMaxDegree) {
      const bool ok = top >= 1.0 - selection_constant(k) * delta_k(0.25, k);
      composite = Candidate{compose_selection(k, half), "composite_selection", ok, gap_top};
      consider(*composite);
    }
  }
  if (!best) {
    if (!composite) fail(ErrorCode::GapClosed, "no polynomial fits the measured gap");
    best = composite;
  }

  const TransformResult tr = gqet_emulate(swap_op(p.size()), isometry(pt), best->poly);
  const Assembled a = assemble(tr);

  ReflectionResult r;
  r.method = ReflectionMethod::flat;
  r.approx = a.approx;
  r.beta = a.beta;
  r.error_vs_pi = spectral_norm(r.approx - reflection_about(pi.amplitudes()));
  r.error_vs_mu = spectral_norm(r.approx - reflection_about(m.perron));
  r.overlap_pi_mu = pi.amplitudes().dot(m.perron);
  r.degree = best->poly.degree();
  r.k_steps = t;
  r.walk_uses = static_cast<int>(t * std::max(1, r.degree));
  r.polynomial = best->name;
  r.poly = best->poly;
  r.certified = best->certified;
  r.gap = best->gap;
  double second = 0.0;
  for (Index i = 1; i < lam.size(); ++i) second = std::max(second, std::abs(lam(i)));
  const double gamma_q = 1.0 - second / top;
  r.overlap_bound = 1.0 - (top - pi_average(d, pi)) / (top * gamma_q);
  return r;
}

ReflectionResult reflect_mixed(const Kernel& p, const Distribution& pi, double eps_mix, double eta,
                               long t_max) {
  if (!(eps_mix > 0.0 && eps_mix < 1.0 / (2.0 * std::sqrt(8.0)))) {
    fail(ErrorCode::InvalidParameter, "eps_mix must lie in (0, 1/(2 sqrt 8))");
  }
  require_eps(eta, "eta");
  require_walk_size(p.size());
  require_stationary(p, pi);
  if (t_max <= 0) t_max = default_t_max(p);

  std::optional<long> t;
  try {
    t = hellinger_mixing_time(p, pi, eps_mix, t_max);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::NotMixedWithin) throw;
  }
  try {
    const long tr = mixing_time(time_reversal(p, pi), pi, eps_mix, t_max);
    t = t ? std::min(*t, tr) : tr;
  } catch (const Error& err) {
    if (err.code() != ErrorCode::NotMixedWithin) throw;
    if (!t) throw;
  }

  const Kernel pt = kernel_power(p, *t);
  const Discriminant d = flat_discriminant(pt);
  const MostReversible m = most_reversible_distribution(d);
  const ChebyshevPoly q = selection_poly(eta / 2.0);
  const TransformResult tr = gqet_emulate(swap_op(p.size()), isometry(pt), q);
  const Assembled a = assemble(tr);

  const Vector& lam = m.spectrum;
  const double rest_max = lam.size() > 1 ? lam(1) : -1.0;

  ReflectionResult r;
  r.method = ReflectionMethod::mixed;
  r.approx = a.approx;
  r.beta = a.beta;
  r.error_vs_pi = spectral_norm(r.approx - reflection_about(pi.amplitudes()));
  r.error_vs_mu = spectral_norm(r.approx - reflection_about(m.perron));
  r.overlap_pi_mu = pi.amplitudes().dot(m.perron);
  r.overlap_bound_holds = *r.overlap_pi_mu >= 1.0 - 3.0 * std::sqrt(8.0) * eps_mix - 0.1;
  r.degree = q.degree();
  r.k_steps = *t;
  r.walk_uses = static_cast<int>(*t * std::max(1, r.degree));
  r.polynomial = "selection";
  r.poly = q;
  r.certified = lam(0) >= 0.75 && rest_max <= 0.25;
  r.gap = lam(0) - rest_max;
  return r;
}

}  // namespace revwalk
