// SPDX-License-Identifier: MIT
// Operator algebra: Hermitian operators, spectral decompositions, the Loewner
// order, and predicates with eigenvalues in [0, +infinity]. An infinite-valued
// predicate is stored canonically as a PSD finite part P plus a projection X
// onto the infinite eigenspace, with supp(P) orthogonal to X. The conventions
// a + inf = inf and 0 * inf = 0 drive every operation here.
#pragma once

#include <limits>
#include <vector>

#include "cqverify/config.hpp"
#include "cqverify/linalg.hpp"

namespace cqverify {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class HermOp {
public:
  explicit HermOp(Mat m, double hermTol = Tolerances{}.herm);
  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& mat() const { return m_; }

private:
  Mat m_;
};

struct SpectralDecomp {
  std::vector<double> eigenvalues;  // distinct, ascending
  std::vector<Mat> projectors;      // orthogonal, summing to the identity
};

// Eigenvalues closer than `clusterTol` are merged into one projector; a
// negative clusterTol selects the default 1e-7 * max(1, ||A||).
SpectralDecomp spectral_decompose(const Mat& a, double clusterTol = -1.0,
                                  double hermTol = Tolerances{}.herm);

// min eig(B - A) >= -tol.
bool loewner_leq(const Mat& a, const Mat& b, double tol);

HermOp tensor_op(const HermOp& a, const HermOp& b);
HermOp partial_trace(const HermOp& m, int side, int d1, int d2);

class IVPredicate {
public:
  // Canonicalizes: X is rounded to an exact projector, P is compressed onto
  // the complement of X and must be PSD within tol (slightly negative
  // eigenvalues are clipped to zero; worse ones throw NotPSD).
  static IVPredicate make(const Mat& finite, const Mat& infSubspace,
                          double tol = Tolerances{}.canon);
  static IVPredicate zero(int dim);
  static IVPredicate bounded(const Mat& psd, double tol = Tolerances{}.canon);
  static IVPredicate infinity(const Mat& projection,
                              double tol = Tolerances{}.canon);

  int dim() const { return static_cast<int>(p_.rows()); }
  const Mat& finitePart() const { return p_; }
  const Mat& infSubspace() const { return x_; }
  bool isBounded(double tol = Tolerances{}.canon) const;

private:
  IVPredicate(Mat p, Mat x) : p_(std::move(p)), x_(std::move(x)) {}
  Mat p_, x_;
};

// tr(A rho): +infinity iff tr(X_A rho) > suppTol, else tr(P_A rho).
// rho must be PSD within psdTol (NotPSD) and of matching dimension.
double ivp_expect(const IVPredicate& a, const Mat& rho,
                  double suppTol = Tolerances{}.supp,
                  double psdTol = Tolerances{}.canon);

IVPredicate ivp_add(const IVPredicate& a, const IVPredicate& b,
                    double tol = Tolerances{}.canon);
// c >= 0 finite; c == 0 yields the zero predicate (0 * inf = 0).
IVPredicate ivp_scale(double c, const IVPredicate& a,
                      double tol = Tolerances{}.canon);
// inf * A: every nonzero eigenvalue becomes infinite.
IVPredicate ivp_scale_infinite(const IVPredicate& a,
                               double tol = Tolerances{}.canon);
IVPredicate ivp_tensor(const IVPredicate& a, const IVPredicate& b,
                       double tol = Tolerances{}.canon);
// Predicate transformer dual to rho |-> M rho M^dag: result has
// X' = supp(M^dag X_A M), P' = Pi' (M^dag P_A M) Pi' with Pi' = (X')^perp, so
// that tr(result * rho) = ivp_expect(A, M rho M^dag) for every PSD rho.
// M may be rectangular (dim(A) x dim(result)).
IVPredicate ivp_conjugate(const Mat& m, const IVPredicate& a,
                          double tol = Tolerances{}.canon);
// trunc(A, n): eigenvalues (including infinite ones) capped at n >= 0.
HermOp ivp_trunc(const IVPredicate& a, double n);
// Projective guard X | A = A + inf * X^perp. Throws NotProjection.
IVPredicate guard_embed(const Mat& x, const IVPredicate& a,
                        double tol = Tolerances{}.canon);

// A ⊑ B on infinite-valued predicates: X_A ⊆ X_B as subspaces and, compressed
// to the complement of X_B, finite parts in Loewner order within tol.
bool ivp_leq(const IVPredicate& a, const IVPredicate& b, double tol);

}  // namespace cqverify
