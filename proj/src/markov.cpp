#include "revwalk/markov.hpp"

#include <deque>
#include <numeric>
#include <sstream>
#include <string>

namespace revwalk {

namespace {

std::string describe(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Entries in [-1e-12, 0) are rounding noise from products; anything more
// negative is a genuine error.
template <typename Derived>
bool clamp_tiny_negatives(Eigen::MatrixBase<Derived>& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) < 0.0) {
        if (m(i, j) < -kNegativeTolerance) return false;
        m(i, j) = 0.0;
      }
    }
  }
  return true;
}

std::vector<Index> bfs_levels(const Matrix& m, bool transpose, std::vector<long>* levels) {
  const Index n = m.rows();
  std::vector<long> level(static_cast<std::size_t>(n), -1);
  std::vector<Index> order;
  std::deque<Index> queue{0};
  level[0] = 0;
  while (!queue.empty()) {
    const Index u = queue.front();
    queue.pop_front();
    order.push_back(u);
    for (Index v = 0; v < n; ++v) {
      const double w = transpose ? m(v, u) : m(u, v);
      if (w > 0.0 && level[static_cast<std::size_t>(v)] < 0) {
        level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  if (levels) *levels = std::move(level);
  return order;
}

}  // namespace

Distribution Distribution::from_probs(Vector probs) {
  if (probs.size() < 1) fail(ErrorCode::InvalidParameter, "empty distribution");
  if (!probs.allFinite()) fail(ErrorCode::InvalidProbability, "non-finite probability");
  if (!clamp_tiny_negatives(probs)) {
    fail(ErrorCode::InvalidProbability, "negative probability " + describe(probs.minCoeff()));
  }
  const double total = probs.sum();
  if (std::abs(total - 1.0) > kDistributionTolerance) {
    fail(ErrorCode::InvalidProbability, "probabilities sum to " + describe(total));
  }
  return Distribution(std::move(probs));
}

Distribution Distribution::uniform(Index n) {
  if (n < 1) fail(ErrorCode::InvalidParameter, "empty distribution");
  return Distribution(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(Index n, Index x) {
  if (x < 0 || x >= n) fail(ErrorCode::InvalidParameter, "point mass outside state space");
  Vector v = Vector::Zero(n);
  v(x) = 1.0;
  return Distribution(std::move(v));
}

Kernel kernel_from_rows(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols()) {
    fail(ErrorCode::DimensionMismatch, "kernel matrix must be square");
  }
  if (matrix.rows() < 2) fail(ErrorCode::InvalidParameter, "kernel needs at least two states");
  if (matrix.rows() > kMaxKernelStates) {
    fail(ErrorCode::TooLarge, "kernel exceeds " + std::to_string(kMaxKernelStates) + " states");
  }
  if (!matrix.allFinite()) fail(ErrorCode::NotStochastic, "non-finite entry");
  Matrix p = matrix;
  if (!clamp_tiny_negatives(p)) {
    fail(ErrorCode::NotStochastic, "negative entry " + describe(matrix.minCoeff()));
  }
  const Vector sums = p.rowwise().sum();
  for (Index x = 0; x < p.rows(); ++x) {
    if (std::abs(sums(x) - 1.0) > kRowSumTolerance) {
      fail(ErrorCode::NotStochastic,
           "row " + std::to_string(x) + " sums to " + describe(sums(x)));
    }
  }
  return Kernel(std::move(p), false);
}

Kernel circle_walk(Index n, double p_forward, double p_backward) {
  if (n < 3) fail(ErrorCode::InvalidParameter, "circle needs at least three states");
  if (p_forward < 0.0 || p_backward < 0.0 || p_forward + p_backward > 1.0 + 1e-12) {
    fail(ErrorCode::InvalidProbability, "move probabilities must be nonnegative and sum to <= 1");
  }
  const double stay = std::max(0.0, 1.0 - p_forward - p_backward);
  Matrix p = Matrix::Zero(n, n);
  for (Index x = 0; x < n; ++x) {
    p(x, (x + 1) % n) += p_forward;
    p(x, (x + n - 1) % n) += p_backward;
    p(x, x) += stay;
  }
  return kernel_from_rows(p);
}

Kernel bottleneck_graph(Index N) {
  if (N < 3 || N % 2 == 0) {
    fail(ErrorCode::InvalidParameter, "bottleneck circles need odd N >= 3");
  }
  const Index bridge = bottleneck_bridge(N);
  const Index n = 2 * N + 1;
  // Circle c (0 or 1) position x lives at offset(c) + x.
  auto state = [&](int c, Index x) { return c == 0 ? x : N + 1 + x; };
  const double leak = 1.0 / (static_cast<double>(N) * static_cast<double>(N) * static_cast<double>(N));

  Matrix p = Matrix::Zero(n, n);
  for (int c = 0; c < 2; ++c) {
    for (Index x = 1; x < N; ++x) {
      p(state(c, x), state(c, (x + 1) % N)) = 0.75;
      p(state(c, x), state(c, (x + N - 1) % N)) = 0.25;
    }
    p(state(c, 0), bridge) = leak;
    p(state(c, 0), state(c, 1)) = (1.0 - leak) * 0.75;
    p(state(c, 0), state(c, N - 1)) = (1.0 - leak) / 4.0;
    p(bridge, state(c, 0)) = 0.5;
  }
  return kernel_from_rows(p);
}

Eigen::MatrixXi cyclic_group_table(Index n) {
  if (n < 1) fail(ErrorCode::InvalidParameter, "group needs at least one element");
  Eigen::MatrixXi table(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) table(a, b) = static_cast<int>((a + b) % n);
  }
  return table;
}

Kernel group_walk(const Eigen::MatrixXi& table, const Distribution& increment_law) {
  const Index n = table.rows();
  if (table.cols() != n) fail(ErrorCode::NotAGroup, "multiplication table must be square");
  if (increment_law.size() != n) {
    fail(ErrorCode::DimensionMismatch, "increment law does not match the group order");
  }
  if (n < 2) fail(ErrorCode::InvalidParameter, "group walk needs at least two elements");
  if (table.minCoeff() < 0 || table.maxCoeff() >= n) fail(ErrorCode::NotAGroup, "table not closed");

  Index identity = -1;
  for (Index e = 0; e < n && identity < 0; ++e) {
    bool ok = true;
    for (Index a = 0; a < n && ok; ++a) ok = table(e, a) == a && table(a, e) == a;
    if (ok) identity = e;
  }
  if (identity < 0) fail(ErrorCode::NotAGroup, "no identity element");

  std::vector<Index> inverse(static_cast<std::size_t>(n), -1);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      if (table(a, b) == identity && table(b, a) == identity) {
        inverse[static_cast<std::size_t>(a)] = b;
        break;
      }
    }
    if (inverse[static_cast<std::size_t>(a)] < 0) {
      fail(ErrorCode::NotAGroup, "element " + std::to_string(a) + " has no inverse");
    }
  }

  // Exhaustive associativity below 64 elements, a deterministic stride
  // sample of triples above.
  const Index stride = n <= 64 ? 1 : n / 16 + 1;
  for (Index a = 0; a < n; a += stride) {
    for (Index b = 0; b < n; b += stride) {
      for (Index c = 0; c < n; c += stride) {
        if (table(table(a, b), c) != table(a, table(b, c))) {
          fail(ErrorCode::NotAGroup, "table is not associative");
        }
      }
    }
  }

  Matrix p(n, n);
  for (Index x = 0; x < n; ++x) {
    const Index x_inv = inverse[static_cast<std::size_t>(x)];
    for (Index y = 0; y < n; ++y) p(x, y) = increment_law(table(y, x_inv));
  }
  Kernel k = kernel_from_rows(p);
  k.group_walk_ = true;
  return k;
}

Kernel cyclic_walk(Index n, const std::map<long, double>& increments) {
  Vector law = Vector::Zero(n);
  for (const auto& [step, prob] : increments) {
    const long m = static_cast<long>(n);
    law(((step % m) + m) % m) += prob;
  }
  return group_walk(cyclic_group_table(n), Distribution::from_probs(law));
}

Kernel perfectly_mixed(const Distribution& pi) {
  if (!pi.strictly_positive()) {
    fail(ErrorCode::InvalidParameter, "perfectly mixed kernel needs a strictly positive law");
  }
  const Index n = pi.size();
  return kernel_from_rows(Vector::Ones(n) * pi.probs().transpose());
}

Kernel lazy(const Kernel& p) {
  const Index n = p.size();
  return kernel_from_rows(0.5 * (Matrix::Identity(n, n) + p.matrix()));
}

Kernel kernel_power(const Kernel& p, long j) {
  if (j < 1) fail(ErrorCode::InvalidParameter, "kernel power must be at least 1");
  Matrix result;
  Matrix base = p.matrix();
  bool have = false;
  for (long e = j;;) {
    if (e & 1L) {
      result = have ? Matrix(result * base) : base;
      have = true;
    }
    e >>= 1;
    if (e == 0) break;
    base = base * base;
  }
  return kernel_from_rows(result);
}

double stationarity_residual(const Kernel& p, const Distribution& pi) {
  if (pi.size() != p.size()) fail(ErrorCode::DimensionMismatch, "distribution size mismatch");
  return (p.matrix().transpose() * pi.probs() - pi.probs()).cwiseAbs().maxCoeff();
}

double detailed_balance_residual(const Kernel& p, const Distribution& pi) {
  if (pi.size() != p.size()) fail(ErrorCode::DimensionMismatch, "distribution size mismatch");
  const Matrix flow = pi.probs().asDiagonal() * p.matrix();
  return asymmetry(flow);
}

void require_stationary(const Kernel& p, const Distribution& pi, double tol) {
  if (pi.size() != p.size()) fail(ErrorCode::DimensionMismatch, "distribution size mismatch");
  if (!pi.strictly_positive()) {
    fail(ErrorCode::InvalidParameter, "stationary law must be strictly positive");
  }
  const double r = stationarity_residual(p, pi);
  if (r > tol) fail(ErrorCode::NotStationary, "||pi P - pi|| = " + describe(r));
}

Distribution stationary_distribution(const Kernel& p) {
  if (!classify(p).ergodic) fail(ErrorCode::NotErgodic, "stationary law requires an ergodic kernel");
  const Index n = p.size();
  // (P^T - I) pi = 0 with the last balance equation swapped for sum(pi) = 1.
  Matrix a = p.matrix().transpose() - Matrix::Identity(n, n);
  a.row(n - 1).setOnes();
  Vector b = Vector::Zero(n);
  b(n - 1) = 1.0;
  Eigen::PartialPivLU<Matrix> lu(a);
  Vector x = lu.solve(b);
  x += lu.solve(Vector(b - a * x));
  for (Index i = 0; i < n; ++i) x(i) = std::max(x(i), 0.0);
  x /= x.sum();
  Distribution pi = Distribution::from_probs(x);
  if (!pi.strictly_positive()) {
    fail(ErrorCode::NotErgodic, "stationary law is not strictly positive");
  }
  return pi;
}

Kernel time_reversal(const Kernel& p, const Distribution& pi) {
  require_stationary(p, pi);
  const Vector& w = pi.probs();
  const Matrix rev = w.cwiseInverse().asDiagonal() * p.matrix().transpose() * w.asDiagonal();
  return kernel_from_rows(rev);
}

bool support_irreducible(const Matrix& m) {
  const Index n = m.rows();
  if (n == 0) return false;
  return static_cast<Index>(bfs_levels(m, false, nullptr).size()) == n &&
         static_cast<Index>(bfs_levels(m, true, nullptr).size()) == n;
}

int support_period(const Matrix& m) {
  std::vector<long> level;
  bfs_levels(m, false, &level);
  long g = 0;
  for (Index u = 0; u < m.rows(); ++u) {
    if (level[static_cast<std::size_t>(u)] < 0) continue;
    for (Index v = 0; v < m.cols(); ++v) {
      if (m(u, v) > 0.0 && level[static_cast<std::size_t>(v)] >= 0) {
        g = std::gcd(g, std::labs(level[static_cast<std::size_t>(u)] + 1 -
                                  level[static_cast<std::size_t>(v)]));
      }
    }
  }
  return static_cast<int>(g);
}

KernelClass classify(const Kernel& p, const Distribution* pi) {
  KernelClass c;
  c.irreducible = support_irreducible(p.matrix());
  if (c.irreducible) {
    c.period = support_period(p.matrix());
    c.aperiodic = c.period == 1;
  }
  c.ergodic = c.irreducible && c.aperiodic.value_or(false);
  c.lazy = (p.matrix().diagonal().array() >= 0.5).all();
  if (pi) c.reversible = detailed_balance_residual(p, *pi) <= 1e-10;
  return c;
}

}  // namespace revwalk
