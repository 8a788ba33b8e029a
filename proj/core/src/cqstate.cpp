// SPDX-License-Identifier: MIT
#include "cqverify/cqstate.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace cqverify {

int ClassicalEnv::get(const std::string& name) const {
  auto it = vars_.find(name);
  if (it == vars_.end())
    throw UnboundVariable("classical variable '" + name +
                          "' is not bound in the environment " + str());
  return it->second;
}

ClassicalEnv ClassicalEnv::merged(const ClassicalEnv& a, const ClassicalEnv& b) {
  ClassicalEnv out = a;
  for (const auto& [k, v] : b.vars_) {
    if (out.vars_.count(k))
      throw DuplicateDecl("variable '" + k +
                          "' appears on both sides of a joint environment");
    out.vars_[k] = v;
  }
  return out;
}

ClassicalEnv ClassicalEnv::project(const std::vector<std::string>& names) const {
  ClassicalEnv out;
  for (const auto& n : names) out.set(n, get(n));
  return out;
}

std::string ClassicalEnv::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [k, v] : vars_) {
    if (!first) os << ", ";
    os << k << "=" << v;
    first = false;
  }
  os << "}";
  return os.str();
}

void CqState::add(const ClassicalEnv& env, const Mat& mat) {
  if (mat.rows() != qdim_ || mat.cols() != qdim_)
    throw DimMismatch("state entry is " + std::to_string(mat.rows()) + "x" +
                      std::to_string(mat.cols()) + " but the state space is " +
                      std::to_string(qdim_) + "-dimensional");
  auto it = entries_.find(env);
  if (it == entries_.end())
    entries_.emplace(env, mat);
  else
    it->second += mat;
}

const Mat* CqState::find(const ClassicalEnv& env) const {
  auto it = entries_.find(env);
  return it == entries_.end() ? nullptr : &it->second;
}

double CqState::totalTrace() const {
  double t = 0.0;
  for (const auto& [e, m] : entries_) t += m.trace().real();
  return t;
}

void CqState::scale(double c) {
  for (auto& [e, m] : entries_) m *= c;
}

CqState CqState::plus(const CqState& o) const {
  if (qdim_ != o.qdim_)
    throw DimMismatch("adding cq states over spaces of dimension " +
                      std::to_string(qdim_) + " and " + std::to_string(o.qdim_));
  CqState out = *this;
  for (const auto& [e, m] : o.entries_) out.add(e, m);
  return out;
}

double CqState::prune(double tol) {
  double removed = 0.0;
  for (auto it = entries_.begin(); it != entries_.end();) {
    const double t = it->second.trace().real();
    if (t < tol) {
      removed += t;
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
  return removed;
}

void CqState::validate(double psdTol, double traceTol) const {
  for (const auto& [e, m] : entries_) {
    if (!is_hermitian(m, std::max(psdTol, 1e-8)))
      throw NotPSD("state entry at " + e.str() + " is not Hermitian");
    const double lo = min_eig(0.5 * (m + m.adjoint()));
    if (lo < -std::max(psdTol, 1e-8) * std::max(1.0, op_norm(m)))
      throw NotPSD("state entry at " + e.str() + " has eigenvalue " +
                   std::to_string(lo));
  }
  const double t = totalTrace();
  if (t > 1.0 + traceTol)
    throw MassMismatch("total trace " + std::to_string(t) + " exceeds 1");
}

std::map<ClassicalEnv, double> CqState::classicalDistribution() const {
  std::map<ClassicalEnv, double> out;
  for (const auto& [e, m] : entries_) out[e] = m.trace().real();
  return out;
}

double CqState::distance(const CqState& a, const CqState& b) {
  if (a.qdim_ != b.qdim_)
    throw DimMismatch("comparing cq states over different spaces");
  std::set<ClassicalEnv> envs;
  for (const auto& [e, m] : a.entries_) envs.insert(e);
  for (const auto& [e, m] : b.entries_) envs.insert(e);
  double sum = 0.0;
  const Mat zero = Mat::Zero(a.qdim_, a.qdim_);
  for (const auto& e : envs) {
    const Mat* ma = a.find(e);
    const Mat* mb = b.find(e);
    sum += trace_norm((ma ? *ma : zero) - (mb ? *mb : zero));
  }
  return sum;
}

CqState CqState::simple(const ClassicalEnv& env, const Mat& rho) {
  CqState s(static_cast<int>(rho.rows()));
  s.add(env, rho);
  return s;
}

double expectation(const CqState& delta, const EnvPredicateFn& phi,
                   double suppTol) {
  double total = 0.0;
  for (const auto& [env, rho] : delta.entries()) {
    const double v = ivp_expect(phi(env), rho, suppTol);
    if (v == kInf) return kInf;
    total += v;
  }
  return total;
}

CqState restrict_state(const CqState& delta, const EnvPred& b) {
  CqState out(delta.qdim());
  for (const auto& [env, rho] : delta.entries())
    if (b(env)) out.add(env, rho);
  return out;
}

JointCqState::JointCqState(CqState s, int dim1, int dim2,
                           std::vector<std::string> c1,
                           std::vector<std::string> c2)
    : state(std::move(s)), d1(dim1), d2(dim2), cls1(std::move(c1)),
      cls2(std::move(c2)) {
  if (state.qdim() != d1 * d2)
    throw DimMismatch("joint state space " + std::to_string(state.qdim()) +
                      " does not factor as " + std::to_string(d1) + "x" +
                      std::to_string(d2));
}

CqState JointCqState::marginal(int side) const {
  if (side != 1 && side != 2)
    throw DimMismatch("marginal side must be 1 or 2");
  CqState out(side == 1 ? d1 : d2);
  const auto& names = side == 1 ? cls1 : cls2;
  for (const auto& [env, rho] : state.entries())
    out.add(env.project(names), ptrace(rho, side == 1 ? 2 : 1, d1, d2));
  return out;
}

bool is_coupling(const JointCqState& joint, const CqState& delta1,
                 const CqState& delta2, double tol) {
  return CqState::distance(joint.marginal(1), delta1) <= tol &&
         CqState::distance(joint.marginal(2), delta2) <= tol;
}

}  // namespace cqverify
