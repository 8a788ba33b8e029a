// SPDX-License-Identifier: MIT
#include "cqverify/opalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace cqverify {

// ---------------------------------------------------------------------------
// linalg helpers
// ---------------------------------------------------------------------------

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat ptrace(const Mat& m, int side, int d1, int d2) {
  if (m.rows() != static_cast<Eigen::Index>(d1) * d2 || m.rows() != m.cols())
    throw DimMismatch("partial trace of a " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()) + " operator against split " +
                      std::to_string(d1) + "x" + std::to_string(d2));
  if (side == 2) {
    Mat out = Mat::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        for (int k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
    return out;
  }
  if (side == 1) {
    Mat out = Mat::Zero(d2, d2);
    for (int k = 0; k < d2; ++k)
      for (int l = 0; l < d2; ++l)
        for (int i = 0; i < d1; ++i) out(k, l) += m(i * d2 + k, i * d2 + l);
    return out;
  }
  throw DimMismatch("partial trace side must be 1 or 2, got " +
                    std::to_string(side));
}

void herm_eig(const Mat& m, Eigen::VectorXd& evals, Mat& evecs) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success)
    throw EigenFailure("self-adjoint eigensolver did not converge on a " +
                       std::to_string(m.rows()) + "-dimensional operator");
  evals = es.eigenvalues();
  evecs = es.eigenvectors();
}

double op_norm(const Mat& herm) {
  if (herm.rows() == 0) return 0.0;
  Eigen::VectorXd ev;
  Mat v;
  herm_eig(herm, ev, v);
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

double trace_norm(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

double min_eig(const Mat& herm) {
  Eigen::VectorXd ev;
  Mat v;
  herm_eig(herm, ev, v);
  return ev.minCoeff();
}

Mat support_projector(const Mat& psd, double tol) {
  Eigen::VectorXd ev;
  Mat v;
  herm_eig(psd, ev, v);
  Mat out = Mat::Zero(psd.rows(), psd.cols());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > tol) out += v.col(i) * v.col(i).adjoint();
  return out;
}

Mat round_projector(const Mat& x, double tol) {
  if (!is_hermitian(x, tol))
    throw NotProjection("projection candidate is not Hermitian within " +
                        std::to_string(tol));
  Eigen::VectorXd ev;
  Mat v;
  herm_eig(x, ev, v);
  Mat out = Mat::Zero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= tol) continue;
    if (std::abs(ev(i) - 1.0) > tol)
      throw NotProjection("eigenvalue " + std::to_string(ev(i)) +
                          " is neither 0 nor 1 within " + std::to_string(tol));
    out += v.col(i) * v.col(i).adjoint();
  }
  return out;
}

Mat proj_join(const Mat& x, const Mat& y, double tol) {
  return support_projector(x + y, tol);
}

Mat proj_meet(const Mat& x, const Mat& y, double tol) {
  const Mat id = Mat::Identity(x.rows(), x.cols());
  return id - support_projector((id - x) + (id - y), tol);
}

Mat eig_clip_below(const Mat& herm, double floor) {
  Eigen::VectorXd ev;
  Mat v;
  herm_eig(herm, ev, v);
  Mat out = Mat::Zero(herm.rows(), herm.cols());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    out += std::max(ev(i), floor) * (v.col(i) * v.col(i).adjoint());
  return out;
}

Mat eig_clip_above(const Mat& herm, double ceil) {
  Eigen::VectorXd ev;
  Mat v;
  herm_eig(herm, ev, v);
  Mat out = Mat::Zero(herm.rows(), herm.cols());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    out += std::min(ev(i), ceil) * (v.col(i) * v.col(i).adjoint());
  return out;
}

Mat sqrt_psd(const Mat& psd, double tol) {
  Eigen::VectorXd ev;
  Mat v;
  herm_eig(psd, ev, v);
  Mat out = Mat::Zero(psd.rows(), psd.cols());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > tol) out += std::sqrt(ev(i)) * (v.col(i) * v.col(i).adjoint());
  return out;
}

Mat pinv_sqrt_psd(const Mat& psd, double tol) {
  Eigen::VectorXd ev;
  Mat v;
  herm_eig(psd, ev, v);
  Mat out = Mat::Zero(psd.rows(), psd.cols());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > tol)
      out += (1.0 / std::sqrt(ev(i))) * (v.col(i) * v.col(i).adjoint());
  return out;
}

Vec basis_ket(int v, int dim) {
  if (v < 0 || v >= dim)
    throw DimMismatch("basis index " + std::to_string(v) +
                      " out of range for dimension " + std::to_string(dim));
  Vec k = Vec::Zero(dim);
  k(v) = 1.0;
  return k;
}

int space_dim(const Space& s) {
  int d = 1;
  for (const auto& r : s) d *= r.dim;
  return d;
}

Space space_concat(const Space& a, const Space& b) {
  Space out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Mat lift_operator(const Mat& op, const std::vector<std::string>& regs,
                  const Space& space) {
  const int n = static_cast<int>(space.size());
  std::vector<int> pos;
  pos.reserve(regs.size());
  for (const auto& name : regs) {
    int found = -1;
    for (int k = 0; k < n; ++k)
      if (space[k].name == name) {
        found = k;
        break;
      }
    if (found < 0)
      throw UnboundVariable("quantum register '" + name +
                            "' is not part of the current space");
    for (int p : pos)
      if (p == found)
        throw TypeError("quantum register '" + name +
                        "' is listed twice in one operation");
    pos.push_back(found);
  }
  long long dt = 1;
  for (int p : pos) dt *= space[p].dim;
  if (op.rows() != dt || op.cols() != dt)
    throw DimMismatch("operator is " + std::to_string(op.rows()) + "x" +
                      std::to_string(op.cols()) + " but the named registers span " +
                      std::to_string(dt) + " dimensions");

  std::vector<bool> targeted(n, false);
  for (int p : pos) targeted[p] = true;
  std::vector<int> rest;
  for (int k = 0; k < n; ++k)
    if (!targeted[k]) rest.push_back(k);
  long long dr = 1;
  for (int k : rest) dr *= space[k].dim;

  const int D = space_dim(space);
  // strides of each factor in the full row-major index
  std::vector<long long> stride(n, 1);
  for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * space[k + 1].dim;

  auto digits_of = [&](long long flat, const std::vector<int>& which) {
    std::vector<int> d(which.size());
    long long rem = flat;
    for (int k = static_cast<int>(which.size()) - 1; k >= 0; --k) {
      d[k] = static_cast<int>(rem % space[which[k]].dim);
      rem /= space[which[k]].dim;
    }
    return d;
  };
  auto full_index = [&](const std::vector<int>& tDigits,
                        const std::vector<int>& rDigits) {
    long long idx = 0;
    for (size_t k = 0; k < pos.size(); ++k) idx += tDigits[k] * stride[pos[k]];
    for (size_t k = 0; k < rest.size(); ++k) idx += rDigits[k] * stride[rest[k]];
    return idx;
  };

  Mat out = Mat::Zero(D, D);
  for (long long it = 0; it < dt; ++it) {
    auto di = digits_of(it, pos);
    for (long long jt = 0; jt < dt; ++jt) {
      if (op(it, jt) == cxd(0.0, 0.0)) continue;
      auto dj = digits_of(jt, pos);
      for (long long r = 0; r < dr; ++r) {
        auto drg = digits_of(r, rest);
        out(full_index(di, drg), full_index(dj, drg)) = op(it, jt);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// HermOp / spectral decomposition / Loewner order
// ---------------------------------------------------------------------------

HermOp::HermOp(Mat m, double hermTol) {
  if (m.rows() != m.cols())
    throw DimMismatch("Hermitian operator must be square, got " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  if (!is_hermitian(m, hermTol))
    throw NotHermitian("operator deviates from its adjoint by more than " +
                       std::to_string(hermTol));
  m_ = 0.5 * (m + m.adjoint());
}

SpectralDecomp spectral_decompose(const Mat& a, double clusterTol,
                                  double hermTol) {
  if (a.rows() != a.cols())
    throw DimMismatch("spectral decomposition needs a square operator");
  if (!is_hermitian(a, hermTol))
    throw NotHermitian("spectral decomposition input deviates from its adjoint "
                       "by more than " + std::to_string(hermTol));
  Eigen::VectorXd ev;
  Mat v;
  herm_eig(0.5 * (a + a.adjoint()), ev, v);
  double tol = clusterTol;
  if (tol < 0) {
    const double nrm =
        ev.size() ? std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()))
                  : 0.0;
    tol = 1e-7 * std::max(1.0, nrm);
  }
  SpectralDecomp out;
  Eigen::Index i = 0;
  while (i < ev.size()) {
    Eigen::Index j = i;
    while (j + 1 < ev.size() && ev(j + 1) - ev(j) <= tol) ++j;
    Mat proj = Mat::Zero(a.rows(), a.cols());
    double lambda = 0.0;
    for (Eigen::Index k = i; k <= j; ++k) {
      proj += v.col(k) * v.col(k).adjoint();
      lambda += ev(k);
    }
    lambda /= static_cast<double>(j - i + 1);
    out.eigenvalues.push_back(lambda);
    out.projectors.push_back(proj);
    i = j + 1;
  }
  return out;
}

bool loewner_leq(const Mat& a, const Mat& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimMismatch("Loewner comparison of a " + std::to_string(a.rows()) +
                      "-dim and a " + std::to_string(b.rows()) +
                      "-dim operator");
  if (a.rows() == 0) return true;
  return min_eig(b - a) >= -tol;
}

HermOp tensor_op(const HermOp& a, const HermOp& b) {
  return HermOp(kron(a.mat(), b.mat()));
}

HermOp partial_trace(const HermOp& m, int side, int d1, int d2) {
  return HermOp(ptrace(m.mat(), side, d1, d2));
}

// ---------------------------------------------------------------------------
// IVPredicate
// ---------------------------------------------------------------------------

IVPredicate IVPredicate::make(const Mat& finite, const Mat& infSubspace,
                              double tol) {
  if (finite.rows() != finite.cols() || infSubspace.rows() != infSubspace.cols() ||
      finite.rows() != infSubspace.rows())
    throw DimMismatch("predicate parts must be square and of equal dimension");
  if (!is_hermitian(finite, tol))
    throw NotHermitian("finite part of a predicate must be Hermitian");
  const Mat x = round_projector(infSubspace, std::max(tol, 1e-7));
  const Mat pi = Mat::Identity(x.rows(), x.cols()) - x;
  Mat p = pi * (0.5 * (finite + finite.adjoint())) * pi;
  p = 0.5 * (p + p.adjoint());
  // Clip numerical negatives introduced by the compression; reject real ones.
  const double lo = p.rows() ? min_eig(p) : 0.0;
  if (lo < -std::max(tol, 1e-7) * std::max(1.0, op_norm(p)))
    throw NotPSD("finite part of a predicate has eigenvalue " +
                 std::to_string(lo));
  if (lo < 0) p = eig_clip_below(p, 0.0);
  return IVPredicate(std::move(p), x);
}

IVPredicate IVPredicate::zero(int dim) {
  return IVPredicate(Mat::Zero(dim, dim), Mat::Zero(dim, dim));
}

IVPredicate IVPredicate::bounded(const Mat& psd, double tol) {
  return make(psd, Mat::Zero(psd.rows(), psd.cols()), tol);
}

IVPredicate IVPredicate::infinity(const Mat& projection, double tol) {
  return make(Mat::Zero(projection.rows(), projection.cols()), projection, tol);
}

bool IVPredicate::isBounded(double tol) const {
  return x_.rows() == 0 || x_.cwiseAbs().maxCoeff() <= tol;
}

double ivp_expect(const IVPredicate& a, const Mat& rho, double suppTol,
                  double psdTol) {
  if (rho.rows() != rho.cols() || rho.rows() != a.dim())
    throw DimMismatch("expectation of a " + std::to_string(a.dim()) +
                      "-dim predicate against a " + std::to_string(rho.rows()) +
                      "x" + std::to_string(rho.cols()) + " state");
  if (!is_hermitian(rho, std::max(psdTol, 1e-8)))
    throw NotPSD("state is not Hermitian");
  const double lo = min_eig(rho);
  if (lo < -std::max(psdTol, 1e-8) * std::max(1.0, op_norm(rho)))
    throw NotPSD("state has eigenvalue " + std::to_string(lo));
  const double infMass = (a.infSubspace() * rho).trace().real();
  if (infMass > suppTol) return kInf;
  return (a.finitePart() * rho).trace().real();
}

IVPredicate ivp_add(const IVPredicate& a, const IVPredicate& b, double tol) {
  if (a.dim() != b.dim())
    throw DimMismatch("adding predicates of dimensions " +
                      std::to_string(a.dim()) + " and " +
                      std::to_string(b.dim()));
  const Mat x = proj_join(a.infSubspace(), b.infSubspace(), tol);
  return IVPredicate::make(a.finitePart() + b.finitePart(), x, tol);
}

IVPredicate ivp_scale(double c, const IVPredicate& a, double tol) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw NotPSD("predicate scale factor must be finite and nonnegative, got " +
                 std::to_string(c));
  if (c == 0.0) return IVPredicate::zero(a.dim());
  return IVPredicate::make(c * a.finitePart(), a.infSubspace(), tol);
}

IVPredicate ivp_scale_infinite(const IVPredicate& a, double tol) {
  const Mat x = proj_join(support_projector(a.finitePart(), tol),
                          a.infSubspace(), tol);
  return IVPredicate::infinity(x, tol);
}

IVPredicate ivp_tensor(const IVPredicate& a, const IVPredicate& b, double tol) {
  // Infinite exactly where one factor is infinite and the other nonzero:
  // X = X_a (x) (X_b v supp(P_b))  v  (X_a v supp(P_a)) (x) X_b.
  const Mat sa = proj_join(a.infSubspace(), support_projector(a.finitePart(), tol), tol);
  const Mat sb = proj_join(b.infSubspace(), support_projector(b.finitePart(), tol), tol);
  const Mat x = proj_join(kron(a.infSubspace(), sb), kron(sa, b.infSubspace()), tol);
  return IVPredicate::make(kron(a.finitePart(), b.finitePart()), x, tol);
}

IVPredicate ivp_conjugate(const Mat& m, const IVPredicate& a, double tol) {
  if (m.rows() != a.dim())
    throw DimMismatch("conjugation map has " + std::to_string(m.rows()) +
                      " rows but the predicate dimension is " +
                      std::to_string(a.dim()));
  const Mat x = support_projector(m.adjoint() * a.infSubspace() * m, tol);
  const Mat pi = Mat::Identity(m.cols(), m.cols()) - x;
  const Mat p = pi * (m.adjoint() * a.finitePart() * m) * pi;
  return IVPredicate::make(p, x, tol);
}

HermOp ivp_trunc(const IVPredicate& a, double n) {
  if (!(n >= 0.0) || !std::isfinite(n))
    throw NotPSD("truncation level must be finite and nonnegative");
  return HermOp(eig_clip_above(a.finitePart(), n) + n * a.infSubspace());
}

IVPredicate guard_embed(const Mat& x, const IVPredicate& a, double tol) {
  if (x.rows() != a.dim())
    throw DimMismatch("guard projection dimension " + std::to_string(x.rows()) +
                      " does not match predicate dimension " +
                      std::to_string(a.dim()));
  const Mat xr = round_projector(x, std::max(tol, 1e-7));
  const Mat comp = Mat::Identity(xr.rows(), xr.cols()) - xr;
  return ivp_add(a, IVPredicate::infinity(comp, tol), tol);
}

bool ivp_leq(const IVPredicate& a, const IVPredicate& b, double tol) {
  if (a.dim() != b.dim())
    throw DimMismatch("comparing predicates of dimensions " +
                      std::to_string(a.dim()) + " and " +
                      std::to_string(b.dim()));
  const int d = a.dim();
  if (d == 0) return true;
  const Mat pi = Mat::Identity(d, d) - b.infSubspace();
  // X_a must sit inside X_b ...
  if ((pi * a.infSubspace() * pi).cwiseAbs().maxCoeff() > std::max(tol, 1e-9))
    return false;
  // ... and on the complement the finite parts obey the Loewner order.
  const Mat diff = pi * (b.finitePart() - a.finitePart()) * pi;
  return min_eig(0.5 * (diff + diff.adjoint())) >= -tol;
}

}  // namespace cqverify
