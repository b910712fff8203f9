#pragma once

// Small dense helpers shared by every module. All of them accept arbitrary
// Eigen expressions so callers can pass blocks, products and maps directly.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace revwalk {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Largest singular value.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  return static_cast<double>(svd.singularValues()(0));
}

template <typename Derived>
double asymmetry(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m, double tol) {
  return m.rows() == m.cols() && asymmetry(m) <= tol;
}

/// Eigenvalues of a symmetric matrix in ascending order. Only the lower
/// triangle is read.
template <typename Derived>
Vector symmetric_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.eval(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Spectrum of a general real square matrix.
template <typename Derived>
ComplexVector general_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  Eigen::EigenSolver<Matrix> es(m.eval(), false);
  return es.eigenvalues();
}

template <typename Derived>
ComplexVector as_complex(const Eigen::MatrixBase<Derived>& v) {
  return v.template cast<std::complex<double>>();
}

/// Distance between two spectra viewed as multisets: both lists are sorted
/// by (real, imag), then every entry of `a` is paired greedily with the
/// nearest unused entry of `b`. Returns the largest paired distance, or
/// +inf when the sizes differ.
inline double spectrum_distance(ComplexVector a, ComplexVector b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  auto by_parts = [](const std::complex<double>& x, const std::complex<double>& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(a.data(), a.data() + a.size(), by_parts);
  std::sort(b.data(), b.data() + b.size(), by_parts);
  std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    Index best_j = -1;
    for (Index j = 0; j < b.size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double d = std::abs(a(i) - b(j));
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    used[static_cast<std::size_t>(best_j)] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

/// Sparsity pattern as a 0/1 matrix (entries strictly positive -> 1).
template <typename Derived>
Matrix support_of(const Eigen::MatrixBase<Derived>& m) {
  return (m.array() > 0.0).template cast<double>().matrix();
}

}  // namespace revwalk
