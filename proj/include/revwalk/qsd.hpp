#pragma once

#include "revwalk/reversibilization.hpp"

#include <vector>

namespace revwalk {

using StateSet = std::vector<Index>;

/// Disjoint subsets E_1..E_m of the state space; the boundary of E_i is
/// everything outside it.
class AbsorbingDecomposition {
 public:
  /// Throws InvalidParameter for empty, out-of-range, repeated, overlapping
  /// or whole-space subsets.
  static AbsorbingDecomposition make(Index n, std::vector<StateSet> subsets);

  Index states() const noexcept { return n_; }
  const std::vector<StateSet>& subsets() const noexcept { return subsets_; }
  StateSet boundary(std::size_t i) const;

 private:
  AbsorbingDecomposition(Index n, std::vector<StateSet> subsets)
      : n_(n), subsets_(std::move(subsets)) {}
  Index n_;
  std::vector<StateSet> subsets_;
};

/// |E| x |E| block of P on E (in the order given).
Matrix restrict(const Kernel& p, const StateSet& e);

struct QuasiStationary {
  /// Left Perron vector of the block, normalized to a probability vector.
  Distribution nu;
  /// Perron value: per-step survival probability started from nu.
  double rate;
};

QuasiStationary qsd(const Kernel& p, const StateSet& e);

/// P_x(no exit from E in j steps): row sum of (block^j) at x.
double survival(const Kernel& p, const StateSet& e, Index x, long j);
/// Law of X_j given survival, on E (ordered as `e`).
Distribution conditional_law(const Kernel& p, const StateSet& e, Index x, long j);

struct QsdBound {
  double lhs;
  double rhs;
  double pi_mass;       // pi(E_1 u ... u E_m)
  double min_survival;  // min over i and x in E_i
  double mixing_factor; // min over i of 1 - 2 E[d_TV(law, nu_i)] - d_TV(product term)
};

/// <pi|D_j|pi> against the three-factor lower bound. The expectation over
/// E_i uses pi restricted to E_i and renormalized.
QsdBound qsd_lower_bound(const Kernel& p, const Distribution& pi,
                         const AbsorbingDecomposition& decomp, long j);

}  // namespace revwalk
