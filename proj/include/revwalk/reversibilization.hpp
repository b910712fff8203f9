#pragma once

#include "revwalk/markov.hpp"

namespace revwalk {

enum class DiscriminantFlavor { flat, curved, cross };

/// Nonnegative matrix sqrt(P1(x,y) P2(y,x)).
struct Discriminant {
  Matrix entries;
  DiscriminantFlavor flavor = DiscriminantFlavor::cross;
  bool symmetric = false;

  Index size() const { return entries.rows(); }
};

Discriminant cross_discriminant(const Kernel& p1, const Kernel& p2);
/// Discriminant of P^j with itself; shared by P and its time-reversal.
Discriminant flat_discriminant(const Kernel& p, long j = 1);
/// Discriminant of P^j against (P*)^j, i.e. diag(sqrt pi) P^j diag(sqrt pi)^-1.
Discriminant curved_discriminant(const Kernel& p, const Distribution& pi, long j = 1);

/// (P + P*) / 2
Kernel additive_rev(const Kernel& p, const Distribution& pi);
/// P P*
Kernel multiplicative_rev(const Kernel& p, const Distribution& pi);

/// Boolean Wielandt test: support^((n-1)^2 + 1) > 0 entrywise.
bool is_primitive(const Matrix& nonnegative);
inline bool is_primitive(const Discriminant& d) { return is_primitive(d.entries); }

struct MostReversible {
  Distribution mu;
  /// <mu|D|mu>, the Perron root of D.
  double lambda_max;
  /// Positive unit Perron vector, sqrt(mu).
  Vector perron;
  /// All eigenvalues of D, descending.
  Vector spectrum;
};

/// Squared Perron vector of a primitive flat discriminant.
MostReversible most_reversible_distribution(const Discriminant& d);

struct GeometricRev {
  Kernel q;
  Distribution mu;
  double lambda_max;
  Vector spectrum;  // of D, descending
};

/// Q(x,y) = sqrt(mu(y)/mu(x)) D(x,y) / <mu|D|mu>, reversible w.r.t. mu.
GeometricRev geometric_rev(const Discriminant& flat);
GeometricRev geometric_rev(const Kernel& p, long j = 1);

/// <pi|D|pi> = sum sqrt(pi(x) pi(y)) D(x,y).
double pi_average(const Discriminant& d, const Distribution& pi);

struct GroupDeviation {
  double lhs;  // ||D - D_A||, D_A the curved discriminant of (P+P*)/2
  double rhs;  // 1 - <pi|D|pi>
};

GroupDeviation group_deviation(const Kernel& p);

}  // namespace revwalk
