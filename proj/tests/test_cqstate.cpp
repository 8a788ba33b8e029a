#include <doctest.h>

#include "cqverify/cqstate.hpp"

using namespace cqverify;

namespace {
Mat ketbra(int d, int i) {
  Mat m = Mat::Zero(d, d);
  m(i, i) = 1.0;
  return m;
}
}  // namespace

TEST_CASE("classical environments compare and merge") {
  ClassicalEnv a;
  a.set("x", 1);
  a.set("y", 2);
  ClassicalEnv b;
  b.set("z", 3);
  ClassicalEnv m = ClassicalEnv::merged(a, b);
  CHECK(m.get("x") == 1);
  CHECK(m.get("z") == 3);
  CHECK_THROWS_AS(ClassicalEnv::merged(a, a), DuplicateDecl);
  CHECK_THROWS_AS(a.get("missing"), UnboundVariable);
  ClassicalEnv p = m.project({"x", "z"});
  CHECK(p.vars().size() == 2);
}

TEST_CASE("states accumulate, prune, and report total mass") {
  CqState s(2);
  ClassicalEnv e1;
  e1.set("x", 0);
  ClassicalEnv e2;
  e2.set("x", 1);
  s.add(e1, Mat(0.5 * ketbra(2, 0)));
  s.add(e2, Mat(0.25 * ketbra(2, 1)));
  s.add(e1, Mat(0.25 * ketbra(2, 1)));  // accumulates onto e1
  CHECK(s.totalTrace() == doctest::Approx(1.0));
  CHECK(s.entries().size() == 2);

  s.add(e2, Mat(1e-15 * ketbra(2, 0)));
  CqState t = s;
  const double removed = t.prune(1e-12);
  CHECK(removed <= 1e-12);
  CHECK(t.entries().size() == 2);

  const auto dist = s.classicalDistribution();
  CHECK(dist.at(e1) == doctest::Approx(0.75));
}

TEST_CASE("state validation rejects negative blocks and mass overflow") {
  CqState s(2);
  ClassicalEnv e;
  e.set("x", 0);
  s.add(e, Mat(-0.1 * ketbra(2, 0)));
  CHECK_THROWS_AS(s.validate(1e-9, 1e-9), NotPSD);

  CqState big(2);
  big.add(e, Mat(2.0 * ketbra(2, 0)));
  CHECK_THROWS_AS(big.validate(1e-9, 1e-9), MassMismatch);
}

TEST_CASE("state distance is the summed trace distance over branches") {
  ClassicalEnv e1;
  e1.set("x", 0);
  ClassicalEnv e2;
  e2.set("x", 1);
  CqState a(2), b(2);
  a.add(e1, Mat(0.5 * ketbra(2, 0)));
  b.add(e1, Mat(0.5 * ketbra(2, 1)));
  b.add(e2, Mat(0.5 * ketbra(2, 0)));
  // branch e1 differs by two orthogonal halves (distance 1.0); branch e2 by 0.5
  CHECK(CqState::distance(a, b) == doctest::Approx(1.5));
}

TEST_CASE("expectation over a state multiplies branch weights") {
  CqState s(2);
  ClassicalEnv e1;
  e1.set("x", 0);
  ClassicalEnv e2;
  e2.set("x", 1);
  s.add(e1, Mat(0.5 * ketbra(2, 0)));
  s.add(e2, Mat(0.5 * ketbra(2, 1)));
  auto phi = [&](const ClassicalEnv& env) {
    if (env.get("x") == 0) return IVPredicate::bounded(Mat(2.0 * ketbra(2, 0)));
    return IVPredicate::bounded(Mat::Identity(2, 2));
  };
  // 0.5 * 2 + 0.5 * 1
  CHECK(expectation(s, phi) == doctest::Approx(1.5));

  auto inf = [&](const ClassicalEnv& env) {
    if (env.get("x") == 1) return IVPredicate::infinity(ketbra(2, 1));
    return IVPredicate::zero(2);
  };
  CHECK(expectation(s, inf) == kInf);
}

TEST_CASE("restriction keeps only branches satisfying the guard") {
  CqState s(2);
  ClassicalEnv e1;
  e1.set("x", 0);
  ClassicalEnv e2;
  e2.set("x", 5);
  s.add(e1, Mat(0.5 * Mat::Identity(2, 2)));
  s.add(e2, Mat(0.5 * ketbra(2, 0)));
  CqState r = restrict_state(s, [](const ClassicalEnv& env) { return env.get("x") > 2; });
  CHECK(r.totalTrace() == doctest::Approx(0.5));
  CHECK(r.entries().size() == 1);
}

TEST_CASE("joint states project to their marginals") {
  // joint over (x1 | q1) x (x2 | q2), both qubits
  ClassicalEnv e;
  e.set("x1", 0);
  e.set("x2", 1);
  CqState joint(4);
  Mat rho = kron(ketbra(2, 0), Mat(0.5 * Mat::Identity(2, 2)));
  joint.add(e, Mat(0.5 * rho));
  JointCqState j{joint, 2, 2, {"x1"}, {"x2"}};
  CqState m1 = j.marginal(1);
  CqState m2 = j.marginal(2);
  CHECK(m1.totalTrace() == doctest::Approx(0.5));
  ClassicalEnv e1;
  e1.set("x1", 0);
  const Mat* blk = m1.find(e1);
  REQUIRE(blk != nullptr);
  CHECK(((*blk) - Mat(0.5 * ketbra(2, 0))).cwiseAbs().maxCoeff() < 1e-10);
  ClassicalEnv e2;
  e2.set("x2", 1);
  const Mat* blk2 = m2.find(e2);
  REQUIRE(blk2 != nullptr);
  CHECK(((*blk2) - Mat(0.25 * Mat::Identity(2, 2))).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("coupling check accepts true couplings and rejects impostors") {
  // delta1 = uniform bit with |0><0|, delta2 = same; product joint is a coupling
  CqState d1(2), d2(2);
  for (int v = 0; v < 2; ++v) {
    ClassicalEnv e;
    e.set("a", v);
    d1.add(e, Mat(0.5 * ketbra(2, 0)));
    ClassicalEnv f;
    f.set("b", v);
    d2.add(f, Mat(0.5 * ketbra(2, 0)));
  }
  CqState joint(4);
  for (int v = 0; v < 2; ++v)
    for (int w = 0; w < 2; ++w) {
      ClassicalEnv e;
      e.set("a", v);
      e.set("b", w);
      joint.add(e, Mat(0.25 * kron(ketbra(2, 0), ketbra(2, 0))));
    }
  JointCqState j{joint, 2, 2, {"a"}, {"b"}};
  CHECK(is_coupling(j, d1, d2, 1e-9));

  // skewing one branch breaks the first marginal
  CqState bad(4);
  ClassicalEnv e00;
  e00.set("a", 0);
  e00.set("b", 0);
  bad.add(e00, Mat(0.5 * kron(ketbra(2, 0), ketbra(2, 0))));
  ClassicalEnv e11;
  e11.set("a", 1);
  e11.set("b", 1);
  bad.add(e11, Mat(0.5 * kron(ketbra(2, 1), ketbra(2, 0))));
  JointCqState jb{bad, 2, 2, {"a"}, {"b"}};
  CHECK_FALSE(is_coupling(jb, d1, d2, 1e-9));
}
