#include <doctest.h>

#include "cqverify/lang.hpp"

using namespace cqverify;

namespace {
const char* kWalkSource = R"(
// one-dimensional absorbing walk driven by a measured coin
var x : [-1 .. 45];
var b : [0 .. 1];
qubit q;

measurement Mpm := {
  0: [[[1/2, 0], [1/2, 0]], [[1/2, 0], [1/2, 0]]],
  1: [[[1/2, 0], [-1/2, 0]], [[-1/2, 0], [1/2, 0]]]
};

prog walk {
  while x >= 0 {
    q := ket(+);
    b <- measure Mpm q;
    x := x + 2 * b - 1;
  }
}
)";
}  // namespace

TEST_CASE("expression evaluation covers the operator set") {
  ClassicalEnv env;
  env.set("x", 3);
  env.set("y", -2);
  auto e = [&](const char* src) {
    Module m = parse_module(std::string("var x : [-10 .. 10]; var y : [-10 .. 10]; "
                                        "prog p { x := ") +
                            src + "; }");
    return eval_expr(seq_list(m.programs.at("p")).front()->expr, env);
  };
  CHECK(e("x + y * 2") == -1);
  CHECK(e("x - y") == 5);
  CHECK(e("x == 3 && y < 0") == 1);
  CHECK(e("x != 3 || y >= 0") == 0);
  CHECK(e("!(x < y)") == 1);
  CHECK(e("(x > 0) <-> (y > 0)") == 0);
  CHECK(e("-x + 1") == -2);
  CHECK_THROWS_AS(e("x + z"), UnboundVariable);
}

TEST_CASE("parsing a full module and printing it round trips") {
  Module m = parse_module(kWalkSource);
  CHECK(m.decls.hasClassical("x"));
  CHECK(m.decls.domain("x").lo == -1);
  CHECK(m.decls.domain("x").hi == 45);
  CHECK(m.decls.hasQuantum("q"));
  CHECK(m.decls.qdim("q") == 2);
  REQUIRE(m.decls.measurements.count("Mpm") == 1);
  REQUIRE(m.programs.count("walk") == 1);

  const std::string printed = pretty(m);
  Module m2 = parse_module(printed);
  CHECK(pretty(m2) == printed);  // printing is a fixed point after one pass
  CHECK(m2.decls.domain("x").hi == 45);
  const auto body = seq_list(m2.programs.at("walk"));
  REQUIRE(body.size() == 1);
  CHECK(body.front()->kind == Command::Kind::While);
  const auto loop = seq_list(body.front()->c1);
  REQUIRE(loop.size() == 3);
  CHECK(loop[0]->kind == Command::Kind::QInit);
  CHECK(loop[0]->ketValue == -1);
  CHECK(loop[1]->kind == Command::Kind::Measure);
  CHECK(loop[2]->kind == Command::Kind::Assign);
}

TEST_CASE("declaration validation catches inconsistent artifacts") {
  CHECK_THROWS_AS(parse_module("dist d := { 0: 1/2, 1: 1/3 };"), MassMismatch);
  CHECK_THROWS_AS(parse_module("dist d := { 0: 1/2, 0: 1/2 };"), DuplicateDecl);
  CHECK_THROWS_AS(parse_module("unitary U := [[[1, 0], [0, 0]], [[0, 0], [2, 0]]];"),
                  TypeError);
  CHECK_THROWS_AS(
      parse_module("measurement M := { 0: [[[1, 0], [0, 0]], [[0, 0], [0, 0]]] };"),
      MassMismatch);
  CHECK_THROWS_AS(parse_module("var x : [0 .. 3]; var x : [0 .. 3];"), DuplicateDecl);
  CHECK_THROWS_AS(parse_module("var x : [3 .. 0];"), TypeError);
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_module("var x : [0 .. 3];\nprog p { x := ; }");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 10);
  }
}

TEST_CASE("typechecking rejects ill-formed statements") {
  auto tc = [](const std::string& src) {
    Module m = parse_module(src);
    typecheck(m);
  };
  const std::string hdr =
      "var x : [0 .. 3]; qubit q; dist d := { 0: 1/2, 1: 1/2 }; "
      "unitary X := [[[0,0],[1,0]],[[1,0],[0,0]]]; "
      "measurement M := { 0: [[[1,0],[0,0]],[[0,0],[0,0]]], "
      "1: [[[0,0],[0,0]],[[0,0],[1,0]]] }; ";
  CHECK_NOTHROW(tc(hdr + "prog p { x <$ d; q *= X; x <- measure M q; }"));
  CHECK_THROWS_AS(tc(hdr + "prog p { y := 1; }"), TypeError);
  CHECK_THROWS_AS(tc(hdr + "prog p { x := 9; }"), TypeError);  // out of domain
  CHECK_THROWS_AS(tc(hdr + "prog p { x <$ nope; }"), TypeError);
  CHECK_THROWS_AS(tc(hdr + "prog p { q, q *= X; }"), TypeError);  // repeated register
  CHECK_THROWS_AS(tc(hdr + "prog p { q := ket(5); }"), TypeError);
  CHECK_THROWS_AS(tc(hdr + "qreg r : 3; prog p { r := ket(+); }"), TypeError);
  CHECK_THROWS_AS(tc(hdr + "prog p { while y > 0 { skip; } }"), TypeError);
  // measurement outcome outside the target domain
  CHECK_THROWS_AS(tc("var t : [0 .. 0]; qubit q; measurement M := { "
                     "0: [[[1,0],[0,0]],[[0,0],[0,0]]], "
                     "1: [[[0,0],[0,0]],[[0,0],[1,0]]] }; "
                     "prog p { t <- measure M q; }"),
                  TypeError);
}

TEST_CASE("variable usage analysis") {
  Module m = parse_module(
      "var x : [0 .. 3]; var y : [0 .. 3]; qubit q; qubit r; "
      "dist d := { 0: 1, 1: 0 }; "
      "prog p { x <$ d; if x == 1 { y := 2; q := ket(0); } else { r := ket(1); } }");
  const auto prog = m.programs.at("p");
  const auto mods = mod_vars(prog);
  CHECK(mods.count("x") == 1);
  CHECK(mods.count("y") == 1);
  CHECK(mods.count("q") == 0);
  const auto useC = used_classical(prog);
  CHECK(useC.count("x") == 1);
  CHECK(useC.count("y") == 1);
  const auto useQ = used_quantum(prog);
  CHECK(useQ.count("q") == 1);
  CHECK(useQ.count("r") == 1);
}

TEST_CASE("environment enumeration respects caps") {
  Module m = parse_module("var x : [0 .. 2]; var y : [0 .. 1];");
  const auto envs = m.decls.enumerate({}, 100);
  CHECK(envs.size() == 6);
  CHECK(envs.front().get("x") == 0);
  CHECK(envs.back().get("x") == 2);
  CHECK(envs.back().get("y") == 1);
  CHECK_THROWS_AS(m.decls.enumerate({}, 5), DomainTooLarge);
  const auto only = m.decls.enumerate({"y"}, 100);
  CHECK(only.size() == 2);
}

TEST_CASE("if without else gets an implicit skip branch") {
  Module m = parse_module("var x : [0 .. 1]; prog p { if x == 0 { x := 1; } }");
  const auto body = seq_list(m.programs.at("p"));
  REQUIRE(body.size() == 1);
  REQUIRE(body.front()->kind == Command::Kind::Cond);
  CHECK(body.front()->c2->kind == Command::Kind::Skip);
}
