#pragma once

#include "revwalk/chebyshev.hpp"
#include "revwalk/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace revwalk {

/// Walk-space operations act on C^n (x) C^n; n is capped so the doubled
/// space stays at most 4096-dimensional.
inline constexpr Index kMaxWalkStates = 64;

/// n^2 x n isometry; column x is sum_y sqrt(P(x,y)) e_x (x) e_y, stored at
/// row x*n + y.
struct IsometryEncoding {
  Matrix mat;

  Index states() const { return mat.cols(); }
  Index dim() const { return mat.rows(); }
};

enum class WalkKind { swap, reflection, qubitized, hermitianized, general };

struct WalkOperator {
  Matrix u;
  WalkKind kind = WalkKind::general;
  /// Set when u is a permutation: (u x)(i) = x(perm[i]).
  std::vector<Index> perm;

  Index dim() const { return u.rows(); }
  /// u * x, using the permutation when there is one.
  Matrix apply(const Matrix& x) const;
};

IsometryEncoding isometry(const Kernel& p);
WalkOperator swap_op(Index n);
/// 2 mat mat^T - I
WalkOperator szegedy_reflection(const IsometryEncoding& iso);

/// ||left^T U right - A||
double pue_verify(const WalkOperator& u, const IsometryEncoding& left,
                  const IsometryEncoding& right, const Matrix& a);

/// (2 iso iso^T - I) U, formed explicitly. Requires U symmetric.
WalkOperator qubitized_walk(const WalkOperator& u, const IsometryEncoding& iso);
/// iso^T W^m iso for m = 0..m_max, computed by applying W to iso one step
/// at a time (W is never formed).
std::vector<Matrix> chebyshev_ladder(const WalkOperator& u, const IsometryEncoding& iso, int m_max);

struct Hermitianization {
  WalkOperator u;
  IsometryEncoding iso;
};

/// [[0, U], [U^T, 0]] with diag(left, right); encodes [[0, A], [A^T, 0]].
Hermitianization hermitianize(const WalkOperator& u, const IsometryEncoding& left,
                              const IsometryEncoding& right);

struct TransformResult {
  Matrix block;
  int walk_uses = 0;
  /// Scaling factor of the requested polynomial. When it exceeds 1 the
  /// block holds p(A) / beta.
  double beta = 1.0;
  bool rescaled = false;
};

/// sum_m a_m iso^T W^m iso for a symmetric encoding (U, iso, iso).
TransformResult gqet_emulate(const WalkOperator& u, const IsometryEncoding& iso,
                             const ChebyshevPoly& p);
/// Lower-right block of gqet_emulate on the hermitianization; p must be even.
TransformResult gqsvt_emulate(const WalkOperator& u, const IsometryEncoding& left,
                              const IsometryEncoding& right, const ChebyshevPoly& p);

enum class ReflectionMethod { flat, curved, mixed };
std::string to_string(ReflectionMethod m);

struct ReflectionResult {
  Matrix approx;
  ReflectionMethod method = ReflectionMethod::curved;
  double error_vs_pi = 0.0;
  /// Flat and mixed routes only.
  std::optional<double> error_vs_mu;
  /// <mu|pi> = sum sqrt(mu pi); flat and mixed routes only.
  std::optional<double> overlap_pi_mu;
  int walk_uses = 0;
  int degree = 0;
  /// Kernel steps per walk application.
  long k_steps = 1;
  double beta = 1.0;
  /// Name of the polynomial family used.
  std::string polynomial;
  ChebyshevPoly poly;
  /// Whether the measured spectrum certifies the polynomial meets eps.
  bool certified = true;
  /// Gap that sized the polynomial.
  double gap = 0.0;
  /// Flat route: 1 - (lambda_max - <pi|D|pi>) / (lambda_max gamma(Q)).
  std::optional<double> overlap_bound;
  /// Mixed route: <mu|pi> >= 1 - 3 sqrt(8) eps_mix - 0.1.
  std::optional<bool> overlap_bound_holds;
};

/// Reflection about sqrt(pi) from the curved discriminant of P^k,
/// k = tau_rev, through the singular value transform.
ReflectionResult reflect_curved(const Kernel& p, const Distribution& pi, double eps, int k_max = 64);
/// Reflection about sqrt(mu) from the flat discriminant of P^t_rev.
ReflectionResult reflect_flat(const Kernel& p, const Distribution& pi, double eps, double rho,
                              long j_max);
/// Reflection about sqrt(mu(t)) for t the smaller of the Hellinger mixing
/// time of P and the mixing time of P*.
ReflectionResult reflect_mixed(const Kernel& p, const Distribution& pi, double eps_mix, double eta,
                               long t_max = 0);

}  // namespace revwalk
