#include "revwalk/chebyshev.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace revwalk {

namespace {

constexpr int kVerifyGrid = 10000;
constexpr double kGridSlack = 1e-12;

Parity detect_parity(const Vector& c) {
  bool has_even = false, has_odd = false;
  for (Index n = 0; n < c.size(); ++n) {
    if (std::abs(c(n)) <= kCoeffTolerance) continue;
    (n % 2 == 0 ? has_even : has_odd) = true;
  }
  if (has_odd && has_even) return Parity::mixed;
  return has_odd ? Parity::odd : Parity::even;
}

// Maximizes f on [lo, hi] by golden-section search, starting from a
// bracket around a grid maximum.
template <typename F>
double golden_max(F&& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::max({fc, fd, f(lo), f(hi)});
}

// Grid maximum of f over theta in [0, pi], then polished.
template <typename F>
double angular_max(F&& f, int grid) {
  const double pi = std::acos(-1.0);
  const double h = pi / (grid - 1);
  double best = -1.0;
  int arg = 0;
  for (int i = 0; i < grid; ++i) {
    const double v = f(i * h);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  const double lo = std::max(0.0, (arg - 1) * h);
  const double hi = std::min(pi, (arg + 1) * h);
  return std::max(best, golden_max(f, lo, hi));
}

// log P(Bin(n, u) >= a)
double log_upper_tail(int n, double u, int a) {
  if (a <= 0) return 0.0;
  if (a > n) return -std::numeric_limits<double>::infinity();
  const double lu = std::log(u), lv = std::log1p(-u);
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  for (int i = a; i <= n; ++i) {
    const double t = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                     i * lu + (n - i) * lv;
    terms.push_back(t);
    peak = std::max(peak, t);
  }
  double s = 0.0;
  for (double t : terms) s += std::exp(t - peak);
  return peak + std::log(s);
}

double upper_tail(int n, double u, int a) { return std::exp(log_upper_tail(n, u, a)); }

// Threshold a in [1, n] with P(Bin(n, 5/8) >= a) <= eps and
// P(Bin(n, 7/8) >= a) >= 1 - eps, choosing the largest worst-side margin.
// Returns 0 when no threshold works.
int binomial_threshold(int n, double eps) {
  int best = 0;
  double best_margin = 0.0;
  for (int a = 1; a <= n; ++a) {
    const double low = eps - upper_tail(n, 0.625, a);
    const double high = upper_tail(n, 0.875, a) - (1.0 - eps);
    const double margin = std::min(low, high);
    if (margin > best_margin) {
      best_margin = margin;
      best = a;
    }
  }
  return best;
}

// q(x) = P(Bin(n, (1+x)/2) >= a): increasing, values in [0, 1], degree n.
ChebyshevPoly binomial_step(int n, int a) {
  return cheb_interpolate([n, a](double x) { return upper_tail(n, 0.5 * (1.0 + x), a); }, n);
}

struct Window {
  double lo, hi;
};

// |p| <= 1 everywhere, |p| <= eps on `low`, p >= 1 - eps on `high`, on a
// uniform grid plus extra points packed into both windows.
bool grid_verified(const ChebyshevPoly& p, double eps, Window low, Window high) {
  auto ok = [&](double x) {
    const double v = p(x);
    if (std::abs(v) > 1.0 + kGridSlack) return false;
    if (x >= low.lo && x <= low.hi && std::abs(v) > eps + kGridSlack) return false;
    if (x >= high.lo && x <= high.hi && v < 1.0 - eps - kGridSlack) return false;
    return true;
  };
  for (int i = 0; i < kVerifyGrid; ++i) {
    if (!ok(-1.0 + 2.0 * i / (kVerifyGrid - 1))) return false;
  }
  for (const Window& w : {low, high}) {
    for (int i = 0; i <= 64; ++i) {
      if (!ok(w.lo + (w.hi - w.lo) * i / 64.0)) return false;
    }
  }
  return true;
}

}  // namespace

ChebyshevPoly::ChebyshevPoly(Vector coeffs) {
  Index d = coeffs.size() - 1;
  while (d > 0 && std::abs(coeffs(d)) <= kCoeffTolerance) --d;
  if (coeffs.size() == 0) {
    coeffs_ = Vector::Zero(1);
  } else {
    coeffs_ = coeffs.head(d + 1);
  }
  parity_ = detect_parity(coeffs_);
}

ChebyshevPoly ChebyshevPoly::basis(int n) {
  if (n < 0) fail(ErrorCode::InvalidParameter, "negative Chebyshev index");
  Vector c = Vector::Zero(n + 1);
  c(n) = 1.0;
  return ChebyshevPoly(std::move(c));
}

std::complex<double> ChebyshevPoly::signal(std::complex<double> z) const {
  std::complex<double> acc(0.0, 0.0);
  for (int n = degree(); n >= 0; --n) acc = acc * z + coeffs_(n);
  return acc;
}

ChebyshevPoly ChebyshevPoly::even_part() const {
  Vector c = coeffs_;
  for (Index n = 1; n < c.size(); n += 2) c(n) = 0.0;
  return ChebyshevPoly(std::move(c));
}

ChebyshevPoly ChebyshevPoly::odd_part() const {
  Vector c = coeffs_;
  for (Index n = 0; n < c.size(); n += 2) c(n) = 0.0;
  return ChebyshevPoly(std::move(c));
}

ChebyshevPoly operator+(const ChebyshevPoly& a, const ChebyshevPoly& b) {
  const int d = std::max(a.degree(), b.degree());
  Vector c = Vector::Zero(d + 1);
  c.head(a.degree() + 1) += a.coeffs();
  c.head(b.degree() + 1) += b.coeffs();
  return ChebyshevPoly(std::move(c));
}

ChebyshevPoly operator-(const ChebyshevPoly& a, const ChebyshevPoly& b) { return a + (-1.0) * b; }

ChebyshevPoly operator*(double s, const ChebyshevPoly& p) { return ChebyshevPoly(s * p.coeffs()); }

ChebyshevPoly cheb_multiply(const ChebyshevPoly& a, const ChebyshevPoly& b) {
  const int da = a.degree(), db = b.degree();
  Vector c = Vector::Zero(da + db + 1);
  for (int m = 0; m <= da; ++m) {
    const double am = a[m];
    if (am == 0.0) continue;
    for (int n = 0; n <= db; ++n) {
      const double h = 0.5 * am * b[n];
      c(m + n) += h;
      c(std::abs(m - n)) += h;
    }
  }
  return ChebyshevPoly(std::move(c));
}

ChebyshevPoly cheb_compose(const ChebyshevPoly& outer, const ChebyshevPoly& inner) {
  const ChebyshevPoly twice = 2.0 * inner;
  ChebyshevPoly b1, b2;
  for (int n = outer.degree(); n >= 1; --n) {
    ChebyshevPoly b0 = cheb_multiply(twice, b1) - b2 + outer[n] * ChebyshevPoly::basis(0);
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  return cheb_multiply(inner, b1) - b2 + outer[0] * ChebyshevPoly::basis(0);
}

double cheb_T_fractional(double y, double x) {
  if (!(x >= 1.0)) fail(ErrorCode::DomainError, "fractional Chebyshev needs x >= 1");
  if (!(y > 0.0 && y <= 1.0)) fail(ErrorCode::DomainError, "fractional order must lie in (0, 1]");
  return std::cosh(y * std::acosh(x));
}

double delta_k(double eps, int k) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorCode::DomainError, "delta_k needs eps in (0, 1)");
  if (k < 1) fail(ErrorCode::DomainError, "delta_k needs k >= 1");
  // (cosh(a/k) - 1) / cosh(a/k) without the cancellation.
  const double a = std::acosh(1.0 / eps);
  const double s = std::sinh(a / (2.0 * k));
  return 2.0 * s * s / std::cosh(a / k);
}

ChebyshevPoly fast_forward_poly(double eps, int d) {
  if (!(eps > 0.0 && eps <= 1.0)) fail(ErrorCode::DomainError, "fast-forward needs eps in (0, 1]");
  if (d < 1) fail(ErrorCode::DomainError, "fast-forward needs degree >= 1");
  const double alpha = cheb_T_fractional(1.0 / d, 1.0 / eps);
  return eps * cheb_compose(ChebyshevPoly::basis(d), alpha * ChebyshevPoly::basis(1));
}

double scaling_factor(const ChebyshevPoly& p, int grid_size) {
  const int grid = std::max({grid_size, 1024, 32 * (p.degree() + 1)});
  // Real coefficients: |Y(conj z)| = |Y(z)|, so half the circle suffices.
  const double circle = angular_max(
      [&p](double t) { return std::abs(p.signal(std::polar(1.0, t))); }, grid);
  const double interval = angular_max([&p](double t) { return std::abs(p(std::cos(t))); }, grid);
  if (interval == 0.0) return 1.0;
  return circle / interval;
}

ChebyshevPoly selection_poly(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) fail(ErrorCode::InvalidParameter, "selection needs eps in (0, 1/2)");
  int n = 1;
  int a = 0;
  for (; n <= 4096; ++n) {
    a = binomial_threshold(n, eps);
    if (a > 0) break;
  }
  if (a == 0) fail(ErrorCode::ConstructionFailed, "no binomial threshold up to degree 4096");
  for (int attempt = 0; attempt <= 4; ++attempt) {
    if (a > 0) {
      ChebyshevPoly q = binomial_step(n, a);
      if (grid_verified(q, eps, {-1.0, 0.25}, {0.75, 1.0})) return q;
    }
    n *= 2;
    a = binomial_threshold(n, eps);
  }
  fail(ErrorCode::ConstructionFailed, "selection polynomial failed grid verification");
}

double selection_constant(int k) {
  if (k < 1) fail(ErrorCode::InvalidParameter, "selection constant needs k >= 1");
  const double a4 = std::acosh(4.0), a3 = std::acosh(3.0);
  const double s = std::sinh(a4 / (2.0 * k));
  return std::sinh((a4 + a3) / (2.0 * k)) * std::sinh((a4 - a3) / (2.0 * k)) / (s * s);
}

ChebyshevPoly compose_selection(int k, double eps) {
  if (k < 1 || k % 2 == 0) fail(ErrorCode::InvalidParameter, "composite selection needs odd k");
  const ChebyshevPoly q = selection_poly(eps);
  const ChebyshevPoly r = cheb_compose(q, fast_forward_poly(0.25, k));
  const double d = delta_k(0.25, k);
  const double c = selection_constant(k);
  if (!grid_verified(r, eps, {-1.0, 1.0 - d}, {1.0 - c * d, 1.0})) {
    fail(ErrorCode::ConstructionFailed, "composite selection failed grid verification");
  }
  return r;
}

Matrix apply_to_symmetric(const ChebyshevPoly& p, const Matrix& m) {
  if (!is_symmetric(m, 1e-10)) fail(ErrorCode::NotSymmetric, "matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Vector& lam = es.eigenvalues();
  if (lam.cwiseAbs().maxCoeff() > 1.0 + 1e-10) fail(ErrorCode::NormTooLarge, "spectral norm exceeds 1");
  Vector f = lam.unaryExpr([&p](double x) { return p(x); });
  return es.eigenvectors() * f.asDiagonal() * es.eigenvectors().transpose();
}

Matrix apply_to_singular(const ChebyshevPoly& p, const Matrix& a) {
  if (p.parity() != Parity::even) fail(ErrorCode::NotEvenParity, "singular value transform needs even p");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  if (s.size() > 0 && s(0) > 1.0 + 1e-10) fail(ErrorCode::NormTooLarge, "spectral norm exceeds 1");
  const Index n = a.cols();
  Vector f(n);
  for (Index i = 0; i < n; ++i) f(i) = p(i < s.size() ? s(i) : 0.0);
  return svd.matrixV() * f.asDiagonal() * svd.matrixV().transpose();
}

std::string to_text(const ChebyshevPoly& p) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "degree " << p.degree() << '\n';
  for (int n = 0; n <= p.degree(); ++n) os << p[n] << '\n';
  return os.str();
}

ChebyshevPoly from_text(const std::string& text) {
  std::istringstream is(text);
  std::string word;
  int d = -1;
  if (!(is >> word >> d) || word != "degree" || d < 0) {
    fail(ErrorCode::InvalidParameter, "polynomial text must start with 'degree <d>'");
  }
  Vector c(d + 1);
  for (int n = 0; n <= d; ++n) {
    if (!(is >> c(n))) fail(ErrorCode::InvalidParameter, "missing Chebyshev coefficient");
  }
  if (is >> word) fail(ErrorCode::InvalidParameter, "trailing data after coefficients");
  return ChebyshevPoly(std::move(c));
}

}  // namespace revwalk
