// SPDX-License-Identifier: MIT
// Central numeric tolerances and budgets. Every module takes these through a
// Config value so the CLI can override them from a file or flags.
#pragma once

namespace cqverify {

struct Tolerances {
  double herm = 1e-10;           // hermiticity check on operator entries
  double canon = 1e-9;           // canonical-form orthogonality of (P, X)
  double supp = 1e-9;            // support test tr(X rho) for infinite value
  double trace = 1e-9;           // total-trace slack on cq states
  double prune = 1e-12;          // drop env entries below this trace
  double entail = 1e-8;          // Loewner slack in entailment checks
  double cluster_rel = 1e-7;     // eigenvalue clustering, relative to max(1,norm)
  double dist_sum = 1e-9;        // distribution weights must sum to 1 within this
  double meas_complete = 1e-8;   // sum Mi^dag Mi = I within this
  double unitary = 1e-8;         // U^dag U = I within this
  double loop_residual = 1e-10;  // loop partial-sum stopping threshold
  double solver = 1e-6;          // transport gap tolerance
  double marginal = 1e-8;        // coupling marginal tolerance
};

struct Budgets {
  int loop_max_iters = 10000;        // loop iteration budget
  long long entail_cap = 1000000;    // max classical envs enumerated
  long long transport_cap = 4096;    // max |A1|*|A2|*d1*d2 in primal_solve
  int solver_max_iters = 200000;     // transport solver iteration budget
  int wp_stable_rounds = 3;          // loop wp: rounds of stability required
};

struct Config {
  Tolerances tol;
  Budgets budget;
};

}  // namespace cqverify
