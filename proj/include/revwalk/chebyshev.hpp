#pragma once

#include "revwalk/errors.hpp"
#include "revwalk/linalg.hpp"

#include <complex>
#include <string>

namespace revwalk {

enum class Parity { even, odd, mixed };

inline constexpr double kCoeffTolerance = 1e-14;

/// Real polynomial sum_n a_n T_n(x) in the Chebyshev basis.
class ChebyshevPoly {
 public:
  ChebyshevPoly() : coeffs_(Vector::Zero(1)) {}
  /// Trailing coefficients with |a_n| <= 1e-14 are dropped.
  explicit ChebyshevPoly(Vector coeffs);
  /// T_n
  static ChebyshevPoly basis(int n);

  const Vector& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  Parity parity() const noexcept { return parity_; }
  double operator[](int n) const { return n <= degree() ? coeffs_(n) : 0.0; }

  /// Clenshaw recurrence. Valid for any real (or complex) argument.
  template <typename Scalar>
  Scalar operator()(Scalar x) const {
    Scalar b1(0), b2(0);
    for (int n = degree(); n >= 1; --n) {
      const Scalar b0 = Scalar(coeffs_(n)) + Scalar(2) * x * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return Scalar(coeffs_(0)) + x * b1 - b2;
  }

  /// Signal-processing polynomial sum_n a_n z^n.
  std::complex<double> signal(std::complex<double> z) const;
  ChebyshevPoly even_part() const;
  ChebyshevPoly odd_part() const;

  friend ChebyshevPoly operator+(const ChebyshevPoly& a, const ChebyshevPoly& b);
  friend ChebyshevPoly operator-(const ChebyshevPoly& a, const ChebyshevPoly& b);
  friend ChebyshevPoly operator*(double s, const ChebyshevPoly& p);

 private:
  Vector coeffs_;
  Parity parity_ = Parity::even;
};

inline double cheb_eval(const ChebyshevPoly& p, double x) { return p(x); }

/// sum_n a_n T_n(M) by the matrix Clenshaw recurrence.
template <typename Derived>
Matrix cheb_eval_matrix(const ChebyshevPoly& p, const Eigen::MatrixBase<Derived>& m) {
  const Index n = m.rows();
  const Matrix x = m.eval();
  Matrix b1 = Matrix::Zero(n, n), b2 = Matrix::Zero(n, n);
  for (int k = p.degree(); k >= 1; --k) {
    Matrix b0 = 2.0 * x * b1 - b2;
    b0.diagonal().array() += p[k];
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  Matrix out = x * b1 - b2;
  out.diagonal().array() += p[0];
  return out;
}

/// Product via T_m T_n = (T_{m+n} + T_{|m-n|}) / 2.
ChebyshevPoly cheb_multiply(const ChebyshevPoly& a, const ChebyshevPoly& b);
/// outer(inner(x)), by Clenshaw over polynomial arithmetic.
ChebyshevPoly cheb_compose(const ChebyshevPoly& outer, const ChebyshevPoly& inner);
/// Chebyshev interpolant of degree `degree` through the first-kind nodes.
template <typename F>
ChebyshevPoly cheb_interpolate(F&& f, int degree) {
  const int m = degree + 1;
  const double pi = std::acos(-1.0);
  Vector values(m);
  for (int j = 0; j < m; ++j) values(j) = f(std::cos(pi * (j + 0.5) / m));
  Vector c = Vector::Zero(m);
  for (int k = 0; k < m; ++k) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += values(j) * std::cos(pi * k * (j + 0.5) / m);
    c(k) = (k == 0 ? 1.0 : 2.0) * s / m;
  }
  return ChebyshevPoly(std::move(c));
}

/// cosh(y acosh(x)) for x >= 1.
double cheb_T_fractional(double y, double x);

/// (T_{1/k}(1/eps) - 1) / T_{1/k}(1/eps)
double delta_k(double eps, int k);

/// eps T_d(x T_{1/d}(1/eps))
ChebyshevPoly fast_forward_poly(double eps, int d);

/// max |sum a_n z^n| on the unit circle over max |p| on [-1, 1].
double scaling_factor(const ChebyshevPoly& p, int grid_size = 8192);

/// Polynomial with |q| <= 1 on [-1,1], |q| <= eps on [-1,1/4] and
/// q >= 1 - eps on [3/4,1], checked on a 10 000 point grid.
ChebyshevPoly selection_poly(double eps);

/// (1 - largest preimage of 3/4 under the fast-forward polynomial
/// with eps = 1/4 and degree k) / delta_k(1/4, k).
double selection_constant(int k);

/// q_eps composed with the fast-forward polynomial (eps = 1/4, degree k).
/// |r| <= eps on [-1, 1 - delta_k] and r >= 1 - eps on
/// [1 - c_k delta_k, 1], with delta_k = delta_k(1/4, k), c_k as above.
ChebyshevPoly compose_selection(int k, double eps);

/// V p(Lambda) V^T from a symmetric eigendecomposition.
Matrix apply_to_symmetric(const ChebyshevPoly& p, const Matrix& m);
/// For A = U Sigma V^T, returns V p(Sigma) V^T; p must be even.
Matrix apply_to_singular(const ChebyshevPoly& p, const Matrix& a);

/// "degree <d>\n" then one coefficient per line, 17 significant digits.
std::string to_text(const ChebyshevPoly& p);
ChebyshevPoly from_text(const std::string& text);

}  // namespace revwalk
