#include <doctest.h>

#include "cqverify/semantics.hpp"

using namespace cqverify;

namespace {

const char* kCoinLoop = R"(
var x : [0 .. 1];
dist coin := { 0: 1/2, 1: 1/2 };
prog flip {
  while x == 1 {
    x <$ coin;
  }
}
)";

const char* kQuantumMix = R"(
var b : [0 .. 1];
qubit q;
unitary X := [[[0,0],[1,0]],[[1,0],[0,0]]];
measurement Mz := { 0: [[[1,0],[0,0]],[[0,0],[0,0]]],
                    1: [[[0,0],[0,0]],[[0,0],[1,0]]] };
prog mix {
  q := ket(+);
  b <- measure Mz q;
  if b == 1 {
    q *= X;
  }
}
)";

CqState unit_state(const Decls& d, std::map<std::string, int> vars, const Mat& rho) {
  return initial_state(d, ClassicalEnv(std::move(vars)), rho);
}

}  // namespace

TEST_CASE("ket vectors cover basis and superposition initializers") {
  CHECK(std::abs(ket_vector(2, 0)(0, 0) - cxd(1, 0)) < 1e-15);
  CHECK(std::abs(ket_vector(3, 2)(2, 0) - cxd(1, 0)) < 1e-15);
  const Mat plus = ket_vector(2, -1);
  CHECK(std::abs(plus(0, 0) - plus(1, 0)) < 1e-15);
  const Mat minus = ket_vector(2, -2);
  CHECK(std::abs(minus(0, 0) + minus(1, 0)) < 1e-15);
  CHECK_THROWS_AS(ket_vector(3, -1), TypeError);
  CHECK_THROWS_AS(ket_vector(2, 5), TypeError);
}

TEST_CASE("initialization resets a register regardless of its prior state") {
  Module m = parse_module("qubit q; prog p { q := ket(0); }");
  Mat one = Mat::Zero(2, 2);
  one(1, 1) = 1.0;
  CqState in = unit_state(m.decls, {}, one);
  const SemReport r = denote(m.programs.at("p"), m.decls, in);
  const Mat* out = r.out.find(ClassicalEnv{});
  REQUIRE(out != nullptr);
  CHECK(std::abs((*out)(0, 0) - cxd(1, 0)) < 1e-12);
  CHECK(std::abs((*out)(1, 1)) < 1e-12);
}

TEST_CASE("loop-free programs preserve trace and abort destroys it") {
  Module m = parse_module(
      "var x : [0 .. 3]; dist d := { 0: 1/4, 1: 3/4 }; "
      "prog keep { x <$ d; if x == 0 { x := 1; } else { x := 2; } } "
      "prog kill { x := 1; abort; }");
  CqState in = unit_state(m.decls, {{"x", 0}}, Mat::Identity(1, 1));
  const SemReport keep = denote(m.programs.at("keep"), m.decls, in);
  CHECK(keep.out.totalTrace() == doctest::Approx(1.0));
  CHECK(keep.loopResidual == 0.0);
  const SemReport kill = denote(m.programs.at("kill"), m.decls, in);
  CHECK(kill.out.totalTrace() == doctest::Approx(0.0));
}

TEST_CASE("the semantics is linear in the input state") {
  Module m = parse_module(kQuantumMix);
  const auto prog = m.programs.at("mix");
  Mat zero = Mat::Zero(2, 2);
  zero(0, 0) = 1.0;
  Mat one = Mat::Zero(2, 2);
  one(1, 1) = 1.0;
  CqState a = unit_state(m.decls, {{"b", 0}}, Mat(0.3 * zero));
  CqState b = unit_state(m.decls, {{"b", 1}}, Mat(0.7 * one));
  const CqState viaSum = denote(prog, m.decls, a.plus(b)).out;
  const CqState separate =
      denote(prog, m.decls, a).out.plus(denote(prog, m.decls, b).out);
  CHECK(CqState::distance(viaSum, separate) < 1e-12);
}

TEST_CASE("measurement splits mass by outcome and conditionals recombine it") {
  Module m = parse_module(kQuantumMix);
  Mat zero = Mat::Zero(2, 2);
  zero(0, 0) = 1.0;
  CqState in = unit_state(m.decls, {{"b", 0}}, zero);
  const SemReport r = denote(m.programs.at("mix"), m.decls, in);
  // ket(+) then a computational measurement: both outcomes carry mass 1/2,
  // and the else branch flips |1> back to |0>.
  CHECK(r.out.totalTrace() == doctest::Approx(1.0));
  for (const auto& [env, rho] : r.out.entries()) {
    CHECK(rho.trace().real() == doctest::Approx(0.5));
    CHECK(std::abs(rho(0, 0) - cxd(0.5, 0)) < 1e-12);  // register ends in |0>
  }
  CHECK(r.out.entries().size() == 2);
}

TEST_CASE("a fair-coin loop drains to the exit state") {
  Module m = parse_module(kCoinLoop);
  CqState in = unit_state(m.decls, {{"x", 1}}, Mat::Identity(1, 1));
  const SemReport r = denote(m.programs.at("flip"), m.decls, in);
  CHECK(r.out.totalTrace() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.loopResidual <= 1e-9);
  CHECK_FALSE(r.budgetExhausted);
  ClassicalEnv done;
  done.set("x", 0);
  const Mat* rho = r.out.find(done);
  REQUIRE(rho != nullptr);
  CHECK((*rho)(0, 0).real() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("truncated approximants grow monotonically to the loop limit") {
  Module m = parse_module(kCoinLoop);
  const auto prog = m.programs.at("flip");
  CqState in = unit_state(m.decls, {{"x", 1}}, Mat::Identity(1, 1));
  double prev = -1.0;
  for (long long n : {0LL, 1LL, 2LL, 5LL, 10LL}) {
    const double mass = denote_truncated(prog, m.decls, in, n).totalTrace();
    // exits after k flips with probability 2^-k, so while<n> emits 1 - 2^-n
    CHECK(mass == doctest::Approx(1.0 - std::ldexp(1.0, -static_cast<int>(n))));
    CHECK(mass >= prev);
    prev = mass;
  }
  const double exact = denote(prog, m.decls, in).out.totalTrace();
  CHECK(std::abs(denote_truncated(prog, m.decls, in, 40).totalTrace() - exact) < 1e-9);
}

TEST_CASE("truncation agrees with the exact semantics on loop-free programs") {
  Module m = parse_module(kQuantumMix);
  Mat plus = ket_vector(2, -1) * ket_vector(2, -1).adjoint();
  CqState in = unit_state(m.decls, {{"b", 0}}, plus);
  const CqState exact = denote(m.programs.at("mix"), m.decls, in).out;
  const CqState trunc = denote_truncated(m.programs.at("mix"), m.decls, in, 0);
  CHECK(CqState::distance(exact, trunc) < 1e-12);
}

TEST_CASE("assignments that leave the declared domain raise an overflow") {
  Module m = parse_module("var x : [0 .. 3]; prog p { x := x + 3; }");
  CqState ok = unit_state(m.decls, {{"x", 0}}, Mat::Identity(1, 1));
  CHECK_NOTHROW(denote(m.programs.at("p"), m.decls, ok));
  CqState bad = unit_state(m.decls, {{"x", 2}}, Mat::Identity(1, 1));
  CHECK_THROWS_AS(denote(m.programs.at("p"), m.decls, bad), DomainOverflow);
}

TEST_CASE("shape predicates classify programs syntactically") {
  Module m = parse_module(
      "var x : [0 .. 1]; prog straight { x := 1; if x == 1 { x := 0; } } "
      "prog looped { while x == 1 { x := 0; } } "
      "prog aborting { if x == 0 { abort; } }");
  CHECK(loop_free(m.programs.at("straight")));
  CHECK(abort_free(m.programs.at("straight")));
  CHECK_FALSE(loop_free(m.programs.at("looped")));
  CHECK(abort_free(m.programs.at("looped")));
  CHECK_FALSE(abort_free(m.programs.at("aborting")));
}

TEST_CASE("termination probing passes drained loops and flags stuck ones") {
  Module m = parse_module(kCoinLoop);
  CqState in = unit_state(m.decls, {{"x", 1}}, Mat::Identity(1, 1));
  const HastReport good = check_hast(m.programs.at("flip"), m.decls, {in});
  CHECK(good.verdict == HastReport::Verdict::Pass);
  CHECK(good.maxResidual <= 1e-9);

  Module stuck = parse_module("var x : [0 .. 1]; prog spin { while x == 1 { skip; } }");
  SemOpts opts;
  opts.cfg.budget.loop_max_iters = 50;
  CqState sin = unit_state(stuck.decls, {{"x", 1}}, Mat::Identity(1, 1));
  const HastReport bad = check_hast(stuck.programs.at("spin"), stuck.decls, {sin}, opts);
  CHECK(bad.verdict == HastReport::Verdict::Inconclusive);
  CHECK(bad.maxResidual == doctest::Approx(1.0));
}

TEST_CASE("initial states are validated against the declarations") {
  Module m = parse_module("var x : [0 .. 1]; qubit q;");
  CHECK_THROWS_AS(unit_state(m.decls, {{"x", 0}}, Mat::Identity(3, 3)), DimMismatch);
  CHECK_THROWS_AS(unit_state(m.decls, {}, Mat::Identity(2, 2)), UnboundVariable);
}
