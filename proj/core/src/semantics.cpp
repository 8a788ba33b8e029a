// SPDX-License-Identifier: MIT
#include "cqverify/semantics.hpp"

#include <cmath>

namespace cqverify {

Mat ket_vector(int dim, int ketValue) {
  Mat v = Mat::Zero(dim, 1);
  if (ketValue == -1 || ketValue == -2) {
    if (dim != 2) throw TypeError("ket(+|-) needs a 2-dimensional register");
    const double s = 1.0 / std::sqrt(2.0);
    v(0, 0) = s;
    v(1, 0) = ketValue == -1 ? s : -s;
    return v;
  }
  if (ketValue < 0 || ketValue >= dim)
    throw TypeError("ket(" + std::to_string(ketValue) + ") out of range for dimension " +
                    std::to_string(dim));
  v(ketValue, 0) = 1.0;
  return v;
}

CqState initial_state(const Decls& decls, const ClassicalEnv& env, const Mat& rho) {
  const int d = decls.totalQDim();
  if (rho.rows() != d || rho.cols() != d)
    throw DimMismatch("initial density operator has dimension " +
                      std::to_string(rho.rows()) + ", the declared space has " +
                      std::to_string(d));
  for (const auto& n : decls.classicalOrder)
    if (!env.has(n))
      throw UnboundVariable("initial environment misses variable '" + n + "'");
  CqState s(d);
  s.add(env, rho);
  return s;
}

namespace {

// Shared interpreter for the exact semantics and the syntactic approximants.
// `truncDepth < 0` means exact loops (partial sums until the residual
// tolerance or budget); otherwise every loop is unrolled exactly truncDepth
// times and leftover mass is dropped, mirroring while<n>.
struct Interp {
  const Decls& decls;
  const SemOpts& opts;
  long long truncDepth;
  double loopResidual = 0.0;
  bool budgetExhausted = false;
  long long loopIterations = 0;

  CqState run(const CommandPtr& c, const CqState& in) {
    switch (c->kind) {
      case Command::Kind::Skip:
        return in;
      case Command::Kind::Abort:
        return CqState(in.qdim());
      case Command::Kind::Assign:
        return assign(c, in);
      case Command::Kind::Sample:
        return sample(c, in);
      case Command::Kind::QInit:
        return qinit(c, in);
      case Command::Kind::Unitary:
        return unitary(c, in);
      case Command::Kind::Measure:
        return measure(c, in);
      case Command::Kind::Seq:
        return run(c->c2, run(c->c1, in));
      case Command::Kind::Cond: {
        const ExprPtr& g = c->guard;
        CqState thenIn = restrict_state(in, [&](const ClassicalEnv& e) {
          return eval_bexpr(g, e);
        });
        CqState elseIn = restrict_state(in, [&](const ClassicalEnv& e) {
          return !eval_bexpr(g, e);
        });
        return run(c->c1, thenIn).plus(run(c->c2, elseIn));
      }
      case Command::Kind::While:
        return loop(c, in);
    }
    throw TypeError("malformed command node");
  }

  CqState assign(const CommandPtr& c, const CqState& in) {
    CqState out(in.qdim());
    const VarDomain& dom = decls.domain(c->var);
    for (const auto& [env, rho] : in.entries()) {
      const long long v = eval_expr(c->expr, env);
      if (!dom.contains(v))
        throw DomainOverflow("assignment drives '" + c->var + "' to " +
                             std::to_string(v) + ", outside [" +
                             std::to_string(dom.lo) + ".." + std::to_string(dom.hi) +
                             "]");
      ClassicalEnv e2 = env;
      e2.set(c->var, static_cast<int>(v));
      out.add(e2, rho);
    }
    return out;
  }

  CqState sample(const CommandPtr& c, const CqState& in) {
    CqState out(in.qdim());
    const auto& weights = decls.dists.at(c->distName);
    for (const auto& [env, rho] : in.entries()) {
      for (const auto& [v, p] : weights) {
        if (p <= 0.0) continue;
        ClassicalEnv e2 = env;
        e2.set(c->var, v);
        out.add(e2, Mat(p * rho));
      }
    }
    return out;
  }

  CqState qinit(const CommandPtr& c, const CqState& in) {
    const int d = decls.qdim(c->qregs.front());
    const Mat target = ket_vector(d, c->ketValue);
    std::vector<Mat> kraus;
    for (int i = 0; i < d; ++i) {
      Mat k = target * Mat(Mat::Identity(d, d)).row(i);
      kraus.push_back(lift_operator(k, c->qregs, decls.qspace));
    }
    CqState out(in.qdim());
    for (const auto& [env, rho] : in.entries()) {
      Mat acc = Mat::Zero(in.qdim(), in.qdim());
      for (const auto& k : kraus) acc += k * rho * k.adjoint();
      out.add(env, acc);
    }
    return out;
  }

  CqState unitary(const CommandPtr& c, const CqState& in) {
    const Mat u = lift_operator(decls.unitaries.at(c->opName), c->qregs, decls.qspace);
    CqState out(in.qdim());
    for (const auto& [env, rho] : in.entries())
      out.add(env, Mat(u * rho * u.adjoint()));
    return out;
  }

  CqState measure(const CommandPtr& c, const CqState& in) {
    const auto& outcomes = decls.measurements.at(c->opName);
    std::vector<std::pair<int, Mat>> lifted;
    for (const auto& [v, m] : outcomes)
      lifted.emplace_back(v, lift_operator(m, c->qregs, decls.qspace));
    CqState out(in.qdim());
    for (const auto& [env, rho] : in.entries()) {
      for (const auto& [v, m] : lifted) {
        Mat branch = m * rho * m.adjoint();
        if (branch.trace().real() <= 0.0 && branch.cwiseAbs().maxCoeff() < 1e-300)
          continue;
        ClassicalEnv e2 = env;
        e2.set(c->var, v);
        out.add(e2, branch);
      }
    }
    return out;
  }

  CqState loop(const CommandPtr& c, const CqState& in) {
    const ExprPtr& g = c->guard;
    auto holds = [&](const ClassicalEnv& e) { return eval_bexpr(g, e); };
    auto fails = [&](const ClassicalEnv& e) { return !eval_bexpr(g, e); };

    if (truncDepth >= 0) {
      // while<n>: n unrollings, then the guard aborts the remaining mass.
      CqState cur = in;
      CqState out(in.qdim());
      for (long long i = 0; i < truncDepth; ++i) {
        out = out.plus(restrict_state(cur, fails));
        CqState active = restrict_state(cur, holds);
        if (active.empty()) return out;
        cur = run(c->c1, active);
        cur.prune(opts.pruneTol());
      }
      out = out.plus(restrict_state(cur, fails));
      return out;
    }

    CqState cur = in;
    CqState out(in.qdim());
    for (long long i = 0;; ++i) {
      out = out.plus(restrict_state(cur, fails));
      CqState active = restrict_state(cur, holds);
      const double mass = active.totalTrace();
      if (mass <= opts.loopResidualTol()) {
        loopResidual += mass;
        return out;
      }
      if (i >= opts.loopBudget()) {
        loopResidual += mass;
        budgetExhausted = true;
        return out;
      }
      ++loopIterations;
      cur = run(c->c1, active);
      cur.prune(opts.pruneTol());
    }
  }
};

}  // namespace

SemReport denote(const CommandPtr& c, const Decls& decls, const CqState& in,
                 const SemOpts& opts) {
  Interp interp{decls, opts, -1};
  SemReport rep;
  rep.out = interp.run(c, in);
  rep.loopResidual = interp.loopResidual;
  rep.budgetExhausted = interp.budgetExhausted;
  rep.loopIterations = interp.loopIterations;
  return rep;
}

CqState denote_truncated(const CommandPtr& c, const Decls& decls,
                         const CqState& in, long long n, const SemOpts& opts) {
  Interp interp{decls, opts, n};
  return interp.run(c, in);
}

bool loop_free(const CommandPtr& c) {
  if (!c) return true;
  if (c->kind == Command::Kind::While) return false;
  return loop_free(c->c1) && loop_free(c->c2);
}

bool abort_free(const CommandPtr& c) {
  if (!c) return true;
  if (c->kind == Command::Kind::Abort) return false;
  return abort_free(c->c1) && abort_free(c->c2);
}

HastReport check_hast(const CommandPtr& c, const Decls& decls,
                      const std::vector<CqState>& probes, const SemOpts& opts) {
  HastReport rep;
  bool allDrained = true;
  for (const auto& probe : probes) {
    const SemReport r = denote(c, decls, probe, opts);
    rep.maxResidual = std::max(rep.maxResidual, r.loopResidual);
    ++rep.probesRun;
    if (r.budgetExhausted || r.loopResidual > opts.loopResidualTol() * 10.0)
      allDrained = false;
  }
  rep.verdict = allDrained ? HastReport::Verdict::Pass
                           : HastReport::Verdict::Inconclusive;
  return rep;
}

}  // namespace cqverify
