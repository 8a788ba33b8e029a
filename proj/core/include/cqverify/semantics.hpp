// SPDX-License-Identifier: MIT
// Forward semantics of programs as trace-nonincreasing maps on cq states:
// a program sends a finitely supported family {env -> rho_env} to another,
// with loops interpreted as limits of their partial unrollings. Mass lost to
// `abort` disappears; mass still circulating in a loop when the iteration
// budget or the residual tolerance stops the unrolling is reported separately.
#pragma once

#include "cqverify/cqstate.hpp"
#include "cqverify/lang.hpp"

namespace cqverify {

struct SemOpts {
  Config cfg;
  // Stop unrolling a loop once the active mass drops below this bound.
  double loopResidualTol() const { return cfg.tol.loop_residual; }
  long long loopBudget() const { return cfg.budget.loop_max_iters; }
  // Entries with trace below this are pruned between iterations.
  double pruneTol() const { return cfg.tol.prune; }
};

struct SemReport {
  CqState out;
  // Mass still inside some loop when its unrolling was cut off, summed over
  // all loops encountered. Zero for loop-free programs.
  double loopResidual = 0.0;
  // True if some loop hit the iteration budget with active mass above the
  // residual tolerance; the output is then only a lower approximation.
  bool budgetExhausted = false;
  long long loopIterations = 0;
};

// State preparation helpers.
Mat ket_vector(int dim, int ketValue);  // ketValue >= 0 basis, -1 |+>, -2 |->
CqState initial_state(const Decls& decls, const ClassicalEnv& env,
                      const Mat& rho);

// The induced map on cq states. Throws DomainOverflow if an assignment leaves
// the declared domain of its target on a branch with nonzero mass.
SemReport denote(const CommandPtr& c, const Decls& decls, const CqState& in,
                 const SemOpts& opts = SemOpts{});

// n-th syntactic approximant: while<0> diverges on the guard (drops the mass),
// while<n+1> unrolls once. Loop-free commands are interpreted exactly.
CqState denote_truncated(const CommandPtr& c, const Decls& decls,
                         const CqState& in, long long n,
                         const SemOpts& opts = SemOpts{});

// Syntactic shape tests. A loop-free and abort-free command denotes a
// trace-preserving map, hence is almost-surely terminating outright.
bool loop_free(const CommandPtr& c);
bool abort_free(const CommandPtr& c);

struct HastReport {
  enum class Verdict { Pass, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  // Largest loop residual observed over the probe inputs.
  double maxResidual = 0.0;
  long long probesRun = 0;
};

// Numerical termination probe: runs the program on each input and inspects
// the mass left circulating in loops. Pass means every probe drained its
// loops below the residual tolerance within budget; it is evidence, not a
// proof, unless the program is loop-free.
HastReport check_hast(const CommandPtr& c, const Decls& decls,
                      const std::vector<CqState>& probes,
                      const SemOpts& opts = SemOpts{});

}  // namespace cqverify
