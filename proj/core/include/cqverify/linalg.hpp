// SPDX-License-Identifier: MIT
// Small dense linear-algebra helpers on complex Hermitian matrices, shared by
// all modules. Everything is desk-scale: dimensions stay in the tens.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "cqverify/errors.hpp"

namespace cqverify {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat dagger(const Mat& m) { return m.adjoint(); }

bool is_hermitian(const Mat& m, double tol);

// Kronecker product, row-major convention: (A (x) B)[(i1,i2),(j1,j2)] = A(i1,j1)B(i2,j2).
Mat kron(const Mat& a, const Mat& b);

// Trace out subsystem `side` (1 or 2) of an operator on C^{d1} (x) C^{d2}.
Mat ptrace(const Mat& m, int side, int d1, int d2);

// Eigendecomposition wrappers for Hermitian matrices (ascending eigenvalues).
void herm_eig(const Mat& m, Eigen::VectorXd& evals, Mat& evecs);

double op_norm(const Mat& herm);     // max |eigenvalue|
double trace_norm(const Mat& m);     // sum of singular values
double min_eig(const Mat& herm);

// Projector onto the support (range) of a PSD matrix; eigenvalues <= tol count as zero.
Mat support_projector(const Mat& psd, double tol);

// Round a nearly-idempotent Hermitian matrix to an exact projector; throws
// NotProjection if an eigenvalue is farther than tol from {0, 1}.
Mat round_projector(const Mat& x, double tol);

Mat proj_join(const Mat& x, const Mat& y, double tol);  // onto range(x)+range(y)
Mat proj_meet(const Mat& x, const Mat& y, double tol);  // onto range(x) ∩ range(y)

// Clip eigenvalues below `floor` up to `floor` (used for PSD projection).
Mat eig_clip_below(const Mat& herm, double floor);
// Clip eigenvalues above `ceil` down to `ceil`.
Mat eig_clip_above(const Mat& herm, double ceil);

// Hermitian square root / pseudo-inverse square root (eigenvalues <= tol treated as 0).
Mat sqrt_psd(const Mat& psd, double tol);
Mat pinv_sqrt_psd(const Mat& psd, double tol);

// Computational basis column vector |v> in C^dim.
Vec basis_ket(int v, int dim);

// Named quantum registers in declaration order; the composite space is the
// ordered tensor product of the factors.
struct QReg {
  std::string name;
  int dim = 2;
};
using Space = std::vector<QReg>;

int space_dim(const Space& s);
Space space_concat(const Space& a, const Space& b);

// Embed `op`, acting on the listed registers (in list order), into the full
// space: all other factors get the identity. Throws UnboundVariable for an
// unknown register name and DimMismatch if op's size disagrees.
Mat lift_operator(const Mat& op, const std::vector<std::string>& regs, const Space& space);

}  // namespace cqverify
