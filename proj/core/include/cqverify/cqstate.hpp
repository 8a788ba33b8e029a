// SPDX-License-Identifier: MIT
// Classical-quantum states: finitely supported maps from classical
// environments to partial density operators on a fixed-dimension space, with
// total trace at most one. Joint states over product environments carry the
// tensor split and the variable partition of the two sides.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqverify/opalg.hpp"

namespace cqverify {

class ClassicalEnv {
public:
  ClassicalEnv() = default;
  explicit ClassicalEnv(std::map<std::string, int> vars)
      : vars_(std::move(vars)) {}

  int get(const std::string& name) const;
  void set(const std::string& name, int value) { vars_[name] = value; }
  bool has(const std::string& name) const { return vars_.count(name) > 0; }
  const std::map<std::string, int>& vars() const { return vars_; }

  // Merge of two envs over disjoint variable sets (DuplicateDecl otherwise).
  static ClassicalEnv merged(const ClassicalEnv& a, const ClassicalEnv& b);
  // Restriction to the listed variables (UnboundVariable if one is missing).
  ClassicalEnv project(const std::vector<std::string>& names) const;

  bool operator<(const ClassicalEnv& o) const { return vars_ < o.vars_; }
  bool operator==(const ClassicalEnv& o) const { return vars_ == o.vars_; }
  std::string str() const;

private:
  std::map<std::string, int> vars_;
};

using EnvPred = std::function<bool(const ClassicalEnv&)>;
using EnvPredicateFn = std::function<IVPredicate(const ClassicalEnv&)>;

class CqState {
public:
  explicit CqState(int qdim = 1) : qdim_(qdim) {}

  int qdim() const { return qdim_; }
  const std::map<ClassicalEnv, Mat>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // Accumulates mat onto the entry at env (DimMismatch on wrong size).
  void add(const ClassicalEnv& env, const Mat& mat);
  const Mat* find(const ClassicalEnv& env) const;

  double totalTrace() const;
  void scale(double c);
  CqState plus(const CqState& o) const;
  // Removes entries with trace below tol; returns the mass removed.
  double prune(double tol);

  // Checks PSD entries and total trace <= 1 + traceTol; throws NotPSD /
  // MassMismatch with context on violation.
  void validate(double psdTol, double traceTol) const;

  // Classical marginal: env -> trace of its operator.
  std::map<ClassicalEnv, double> classicalDistribution() const;

  // Sum over the union of supports of the branch-wise trace-norm difference.
  static double distance(const CqState& a, const CqState& b);

  static CqState simple(const ClassicalEnv& env, const Mat& rho);

private:
  int qdim_;
  std::map<ClassicalEnv, Mat> entries_;
};

// sum over the support of ivp_expect(phi(env), rho); +infinity absorbs.
double expectation(const CqState& delta, const EnvPredicateFn& phi,
                   double suppTol = Tolerances{}.supp);

// Entries whose env satisfies b (TypeError surfaces from b itself).
CqState restrict_state(const CqState& delta, const EnvPred& b);

struct JointCqState {
  CqState state;                    // envs carry both sides' variables
  int d1 = 1, d2 = 1;               // tensor split of the quantum space
  std::vector<std::string> cls1;    // side-1 classical variables
  std::vector<std::string> cls2;    // side-2 classical variables

  JointCqState() : state(1) {}
  JointCqState(CqState s, int dim1, int dim2, std::vector<std::string> c1,
               std::vector<std::string> c2);

  // Marginal on the given side: project envs and partial-trace the operator.
  CqState marginal(int side) const;
};

// Both marginals of joint match delta1/delta2 within trace-norm tol, env-wise.
bool is_coupling(const JointCqState& joint, const CqState& delta1,
                 const CqState& delta2, double tol);

}  // namespace cqverify
