// SPDX-License-Identifier: MIT
// The guarded classical-quantum while language: declarations, expression and
// command ASTs, a recursive-descent parser with source positions, a
// pretty-printer whose output re-parses to the same tree, a typechecker, and
// exact integer expression evaluation.
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cqverify/cqstate.hpp"

namespace cqverify {

// ---------------------------------------------------------------------------
// expressions (integers; booleans are 0/1, any nonzero value counts as true)
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Const, Var, Unary, Binary, Forall };
  Kind kind = Kind::Const;
  long long value = 0;                  // Const
  std::string name;                     // Var
  std::string op;                       // "+","-","*","==","!=","<","<=",">",">=","&&","||","<->","!","neg"
  ExprPtr lhs, rhs;                     // Unary uses lhs only
  std::vector<std::string> bound;       // Forall: universally quantified vars
};

ExprPtr mk_const(long long v);
ExprPtr mk_var(const std::string& name);
ExprPtr mk_unary(const std::string& op, ExprPtr e);
ExprPtr mk_binary(const std::string& op, ExprPtr a, ExprPtr b);

long long eval_expr(const ExprPtr& e, const ClassicalEnv& env);
bool eval_bexpr(const ExprPtr& e, const ClassicalEnv& env);
std::string expr_str(const ExprPtr& e);
void expr_free_vars(const ExprPtr& e, std::set<std::string>& out);

// ---------------------------------------------------------------------------
// declarations
// ---------------------------------------------------------------------------

struct VarDomain {
  long long lo = 0, hi = 1;
  long long size() const { return hi - lo + 1; }
  bool contains(long long v) const { return v >= lo && v <= hi; }
};

struct Decls {
  std::map<std::string, VarDomain> classical;
  std::vector<std::string> classicalOrder;   // declaration order
  Space qspace;                              // quantum registers, declaration order
  std::map<std::string, std::vector<std::pair<int, double>>> dists;
  std::map<std::string, Mat> unitaries;
  std::map<std::string, std::vector<std::pair<int, Mat>>> measurements;

  bool hasClassical(const std::string& n) const { return classical.count(n) > 0; }
  const VarDomain& domain(const std::string& n) const;
  bool hasQuantum(const std::string& n) const;
  int qdim(const std::string& n) const;
  int totalQDim() const { return space_dim(qspace); }

  void addClassical(const std::string& n, VarDomain d);
  void addQuantum(const std::string& n, int dim);
  // Validates sum-to-one within distTol; weights nonnegative.
  void addDist(const std::string& n, std::vector<std::pair<int, double>> w,
               double distTol = Tolerances{}.dist_sum);
  // Validates U^dag U = I within unitaryTol.
  void addUnitary(const std::string& n, const Mat& u,
                  double unitaryTol = Tolerances{}.unitary);
  // Validates sum Mi^dag Mi = I within completeTol.
  void addMeasurement(const std::string& n, std::vector<std::pair<int, Mat>> ms,
                      double completeTol = Tolerances{}.meas_complete);

  // Enumerate all envs over the listed classical variables (declaration order
  // if names is empty). Throws DomainTooLarge past cap.
  std::vector<ClassicalEnv> enumerate(const std::vector<std::string>& names,
                                      long long cap) const;
};

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

struct SourceSpan {
  int line = 0, column = 0;
};

struct Command;
using CommandPtr = std::shared_ptr<const Command>;

struct Command {
  enum class Kind {
    Skip, Abort, Assign, Sample, QInit, Unitary, Measure, Seq, Cond, While
  };
  Kind kind = Kind::Skip;
  SourceSpan span;

  std::string var;                 // Assign/Sample/Measure target
  ExprPtr expr;                    // Assign rhs
  std::string distName;            // Sample
  std::vector<std::string> qregs;  // QInit/Unitary/Measure registers
  int ketValue = 0;                // QInit basis index; -1 = |+>, -2 = |->
  std::string opName;              // Unitary/Measure declared name
  ExprPtr guard;                   // Cond/While
  CommandPtr c1, c2;               // Seq both; Cond then/else; While body in c1
};

CommandPtr mk_skip();
CommandPtr mk_seq(CommandPtr a, CommandPtr b);
// Flatten nested Seq into a statement list and back.
std::vector<CommandPtr> seq_list(const CommandPtr& c);
CommandPtr seq_of(const std::vector<CommandPtr>& stmts);

// Classical variables written by the command (assign/sample/measure targets).
std::set<std::string> mod_vars(const CommandPtr& c);
// Classical variables read or written anywhere in the command.
std::set<std::string> used_classical(const CommandPtr& c);
std::set<std::string> used_quantum(const CommandPtr& c);

// ---------------------------------------------------------------------------
// modules (a declaration block plus named programs)
// ---------------------------------------------------------------------------

struct Module {
  Decls decls;
  std::map<std::string, CommandPtr> programs;
  std::vector<std::string> programOrder;
};

Module parse_module(const std::string& text);
std::string pretty(const Module& m);
std::string pretty_command(const CommandPtr& c, int indent = 0);

// Name resolution, dimension checks, constant domain checks, register reuse.
void typecheck(const Module& m);
void typecheck_command(const CommandPtr& c, const Decls& d);

}  // namespace cqverify
