// SPDX-License-Identifier: MIT
#include "cqverify/lang.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace cqverify {

// ---------------------------------------------------------------------------
// expressions
// ---------------------------------------------------------------------------

ExprPtr mk_const(long long v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Const;
  e->value = v;
  return e;
}

ExprPtr mk_var(const std::string& name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->name = name;
  return e;
}

ExprPtr mk_unary(const std::string& op, ExprPtr x) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Unary;
  e->op = op;
  e->lhs = std::move(x);
  return e;
}

ExprPtr mk_binary(const std::string& op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Binary;
  e->op = op;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

long long eval_expr(const ExprPtr& e, const ClassicalEnv& env) {
  switch (e->kind) {
    case Expr::Kind::Const:
      return e->value;
    case Expr::Kind::Var:
      return env.get(e->name);
    case Expr::Kind::Unary: {
      const long long v = eval_expr(e->lhs, env);
      if (e->op == "!") return v == 0 ? 1 : 0;
      if (e->op == "neg") return -v;
      throw TypeError("unknown unary operator '" + e->op + "'");
    }
    case Expr::Kind::Binary: {
      const long long a = eval_expr(e->lhs, env);
      const long long b = eval_expr(e->rhs, env);
      if (e->op == "+") return a + b;
      if (e->op == "-") return a - b;
      if (e->op == "*") return a * b;
      if (e->op == "==") return a == b;
      if (e->op == "!=") return a != b;
      if (e->op == "<") return a < b;
      if (e->op == "<=") return a <= b;
      if (e->op == ">") return a > b;
      if (e->op == ">=") return a >= b;
      if (e->op == "&&") return (a != 0 && b != 0) ? 1 : 0;
      if (e->op == "||") return (a != 0 || b != 0) ? 1 : 0;
      if (e->op == "<->") return ((a != 0) == (b != 0)) ? 1 : 0;
      throw TypeError("unknown binary operator '" + e->op + "'");
    }
    case Expr::Kind::Forall:
      throw TypeError("universal quantifier is only meaningful inside an "
                      "assertion with declared domains");
  }
  throw TypeError("malformed expression node");
}

bool eval_bexpr(const ExprPtr& e, const ClassicalEnv& env) {
  return eval_expr(e, env) != 0;
}

void expr_free_vars(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Var) out.insert(e->name);
  if (e->lhs) expr_free_vars(e->lhs, out);
  if (e->rhs) expr_free_vars(e->rhs, out);
  if (e->kind == Expr::Kind::Forall)
    for (const auto& b : e->bound) out.erase(b);
}

namespace {
int expr_prec(const Expr& e) {
  if (e.kind == Expr::Kind::Const || e.kind == Expr::Kind::Var) return 8;
  if (e.kind == Expr::Kind::Unary) return 7;
  if (e.kind == Expr::Kind::Forall) return 0;
  const std::string& op = e.op;
  if (op == "<->") return 1;
  if (op == "||") return 2;
  if (op == "&&") return 3;
  if (op == "*") return 6;
  if (op == "+" || op == "-") return 5;
  return 4;  // comparisons
}

void expr_print(const ExprPtr& e, std::ostringstream& os, int parentPrec) {
  const int prec = expr_prec(*e);
  const bool paren = prec < parentPrec;
  if (paren) os << "(";
  switch (e->kind) {
    case Expr::Kind::Const:
      os << e->value;
      break;
    case Expr::Kind::Var:
      os << e->name;
      break;
    case Expr::Kind::Unary:
      os << (e->op == "neg" ? "-" : e->op);
      expr_print(e->lhs, os, 7);
      break;
    case Expr::Kind::Binary:
      expr_print(e->lhs, os, prec);
      os << " " << e->op << " ";
      expr_print(e->rhs, os, prec + 1);
      break;
    case Expr::Kind::Forall:
      os << "forall";
      for (const auto& b : e->bound) os << " " << b;
      os << ". ";
      expr_print(e->lhs, os, 1);
      break;
  }
  if (paren) os << ")";
}
}  // namespace

std::string expr_str(const ExprPtr& e) {
  std::ostringstream os;
  expr_print(e, os, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// declarations
// ---------------------------------------------------------------------------

const VarDomain& Decls::domain(const std::string& n) const {
  auto it = classical.find(n);
  if (it == classical.end())
    throw UnboundVariable("classical variable '" + n + "' is not declared");
  return it->second;
}

bool Decls::hasQuantum(const std::string& n) const {
  for (const auto& r : qspace)
    if (r.name == n) return true;
  return false;
}

int Decls::qdim(const std::string& n) const {
  for (const auto& r : qspace)
    if (r.name == n) return r.dim;
  throw UnboundVariable("quantum register '" + n + "' is not declared");
}

void Decls::addClassical(const std::string& n, VarDomain d) {
  if (classical.count(n) || hasQuantum(n))
    throw DuplicateDecl("variable '" + n + "' is declared twice");
  if (d.lo > d.hi)
    throw TypeError("empty domain [" + std::to_string(d.lo) + ".." +
                    std::to_string(d.hi) + "] for variable '" + n + "'");
  classical[n] = d;
  classicalOrder.push_back(n);
}

void Decls::addQuantum(const std::string& n, int dim) {
  if (classical.count(n) || hasQuantum(n))
    throw DuplicateDecl("variable '" + n + "' is declared twice");
  if (dim < 1) throw TypeError("quantum register '" + n + "' needs dimension >= 1");
  qspace.push_back({n, dim});
}

void Decls::addDist(const std::string& n, std::vector<std::pair<int, double>> w,
                    double distTol) {
  if (dists.count(n)) throw DuplicateDecl("distribution '" + n + "' is declared twice");
  double sum = 0.0;
  std::set<int> seen;
  for (auto& [v, p] : w) {
    if (!seen.insert(v).second)
      throw DuplicateDecl("distribution '" + n + "' lists value " +
                          std::to_string(v) + " twice");
    if (p < -1e-15)
      throw NotPSD("distribution '" + n + "' has negative weight " +
                   std::to_string(p));
    p = std::max(p, 0.0);
    sum += p;
  }
  if (std::abs(sum - 1.0) > distTol)
    throw MassMismatch("distribution '" + n + "' sums to " + std::to_string(sum));
  dists[n] = std::move(w);
}

void Decls::addUnitary(const std::string& n, const Mat& u, double unitaryTol) {
  if (unitaries.count(n)) throw DuplicateDecl("unitary '" + n + "' is declared twice");
  if (u.rows() != u.cols()) throw DimMismatch("unitary '" + n + "' is not square");
  const Mat g = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
  if (g.cwiseAbs().maxCoeff() > unitaryTol)
    throw TypeError("operator '" + n + "' deviates from unitarity by " +
                    std::to_string(g.cwiseAbs().maxCoeff()));
  unitaries[n] = u;
}

void Decls::addMeasurement(const std::string& n,
                           std::vector<std::pair<int, Mat>> ms,
                           double completeTol) {
  if (measurements.count(n))
    throw DuplicateDecl("measurement '" + n + "' is declared twice");
  if (ms.empty()) throw TypeError("measurement '" + n + "' has no outcomes");
  const Eigen::Index d = ms.front().second.rows();
  Mat sum = Mat::Zero(d, d);
  std::set<int> seen;
  for (const auto& [v, m] : ms) {
    if (!seen.insert(v).second)
      throw DuplicateDecl("measurement '" + n + "' lists outcome " +
                          std::to_string(v) + " twice");
    if (m.rows() != d || m.cols() != d)
      throw DimMismatch("measurement '" + n + "' mixes operator sizes");
    sum += m.adjoint() * m;
  }
  if ((sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > completeTol)
    throw MassMismatch("measurement '" + n + "' is not complete: sum Mi^dag Mi "
                       "deviates from the identity by " +
                       std::to_string((sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff()));
  measurements[n] = std::move(ms);
}

std::vector<ClassicalEnv> Decls::enumerate(const std::vector<std::string>& names,
                                           long long cap) const {
  const std::vector<std::string>& vars = names.empty() ? classicalOrder : names;
  long long total = 1;
  for (const auto& n : vars) {
    total *= domain(n).size();
    if (total > cap)
      throw DomainTooLarge("environment enumeration over " +
                           std::to_string(vars.size()) + " variables exceeds the cap of " +
                           std::to_string(cap) + " environments");
  }
  std::vector<ClassicalEnv> out;
  out.reserve(static_cast<size_t>(total));
  std::vector<long long> cur;
  for (const auto& n : vars) cur.push_back(domain(n).lo);
  for (long long i = 0; i < total; ++i) {
    ClassicalEnv env;
    for (size_t k = 0; k < vars.size(); ++k)
      env.set(vars[k], static_cast<int>(cur[k]));
    out.push_back(env);
    for (int k = static_cast<int>(vars.size()) - 1; k >= 0; --k) {
      if (++cur[k] <= domain(vars[k]).hi) break;
      cur[k] = domain(vars[k]).lo;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

CommandPtr mk_skip() {
  auto c = std::make_shared<Command>();
  c->kind = Command::Kind::Skip;
  return c;
}

CommandPtr mk_seq(CommandPtr a, CommandPtr b) {
  auto c = std::make_shared<Command>();
  c->kind = Command::Kind::Seq;
  c->c1 = std::move(a);
  c->c2 = std::move(b);
  return c;
}

std::vector<CommandPtr> seq_list(const CommandPtr& c) {
  std::vector<CommandPtr> out;
  if (!c) return out;
  if (c->kind == Command::Kind::Seq) {
    auto a = seq_list(c->c1);
    auto b = seq_list(c->c2);
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }
  if (c->kind == Command::Kind::Skip) return out;  // skip is the empty spine
  out.push_back(c);
  return out;
}

CommandPtr seq_of(const std::vector<CommandPtr>& stmts) {
  if (stmts.empty()) return mk_skip();
  CommandPtr acc = stmts.front();
  for (size_t i = 1; i < stmts.size(); ++i) acc = mk_seq(acc, stmts[i]);
  return acc;
}

std::set<std::string> mod_vars(const CommandPtr& c) {
  std::set<std::string> out;
  if (!c) return out;
  switch (c->kind) {
    case Command::Kind::Assign:
    case Command::Kind::Sample:
    case Command::Kind::Measure:
      out.insert(c->var);
      break;
    default:
      break;
  }
  for (const auto& child : {c->c1, c->c2})
    if (child)
      for (const auto& v : mod_vars(child)) out.insert(v);
  return out;
}

std::set<std::string> used_classical(const CommandPtr& c) {
  std::set<std::string> out;
  if (!c) return out;
  if (!c->var.empty()) out.insert(c->var);
  if (c->expr) expr_free_vars(c->expr, out);
  if (c->guard) expr_free_vars(c->guard, out);
  for (const auto& child : {c->c1, c->c2})
    if (child)
      for (const auto& v : used_classical(child)) out.insert(v);
  return out;
}

std::set<std::string> used_quantum(const CommandPtr& c) {
  std::set<std::string> out;
  if (!c) return out;
  for (const auto& q : c->qregs) out.insert(q);
  for (const auto& child : {c->c1, c->c2})
    if (child)
      for (const auto& v : used_quantum(child)) out.insert(v);
  return out;
}

// ---------------------------------------------------------------------------
// tokenizer
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Kind { Ident, Int, Real, Sym, End };
  Kind kind = Kind::End;
  std::string text;
  long long intValue = 0;
  double realValue = 0.0;
  int line = 1, column = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    skipWs();
    tok_ = Token{};
    tok_.line = line_;
    tok_.column = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        id += src_[pos_];
        bump();
      }
      tok_.kind = Token::Kind::Ident;
      tok_.text = id;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      bool real = false;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        num += src_[pos_];
        bump();
      }
      if (pos_ + 1 < src_.size() && src_[pos_] == '.' && src_[pos_ + 1] != '.') {
        real = true;
        num += '.';
        bump();
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          num += src_[pos_];
          bump();
        }
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        real = true;
        num += src_[pos_];
        bump();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
          num += src_[pos_];
          bump();
        }
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          num += src_[pos_];
          bump();
        }
      }
      if (real) {
        tok_.kind = Token::Kind::Real;
        tok_.realValue = std::stod(num);
      } else {
        tok_.kind = Token::Kind::Int;
        tok_.intValue = std::stoll(num);
      }
      tok_.text = num;
      return;
    }
    static const char* multi[] = {"<->", ":=", "<$", "<-", "<=", ">=",
                                  "==", "!=", "&&", "||", "*=", ".."};
    for (const char* m : multi) {
      const size_t len = std::string(m).size();
      if (src_.compare(pos_, len, m) == 0) {
        tok_.kind = Token::Kind::Sym;
        tok_.text = m;
        for (size_t k = 0; k < len; ++k) bump();
        return;
      }
    }
    tok_.kind = Token::Kind::Sym;
    tok_.text = std::string(1, c);
    bump();
  }

  void skipWs() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else if (c == '#' ||
                 (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/')) {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Module parseModule() {
    Module m;
    while (!atEnd()) {
      const Token t = peek();
      if (isIdent("var")) {
        parseVarDecl(m.decls);
      } else if (isIdent("qubit")) {
        parseQubitDecl(m.decls);
      } else if (isIdent("qreg")) {
        parseQRegDecl(m.decls);
      } else if (isIdent("dist")) {
        parseDistDecl(m.decls);
      } else if (isIdent("unitary")) {
        parseUnitaryDecl(m.decls);
      } else if (isIdent("measurement")) {
        parseMeasurementDecl(m.decls);
      } else if (isIdent("prog")) {
        parseProg(m);
      } else {
        fail("expected a declaration or 'prog', found '" + t.text + "'");
      }
    }
    return m;
  }

  ExprPtr parseExprPublic() { return parseExpr(); }
  bool atEnd() { return peek().kind == Token::Kind::End; }

private:
  const Token& peek() { return lex_.peek(); }
  Token next() { return lex_.next(); }

  bool isIdent(const std::string& s) {
    return peek().kind == Token::Kind::Ident && peek().text == s;
  }
  bool isSym(const std::string& s) {
    return peek().kind == Token::Kind::Sym && peek().text == s;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw SyntaxError(msg, peek().line, peek().column);
  }

  Token expectSym(const std::string& s) {
    if (!isSym(s)) fail("expected '" + s + "', found '" + peek().text + "'");
    return next();
  }
  Token expectIdent() {
    if (peek().kind != Token::Kind::Ident)
      fail("expected an identifier, found '" + peek().text + "'");
    return next();
  }
  Token expectKeyword(const std::string& s) {
    if (!isIdent(s)) fail("expected '" + s + "', found '" + peek().text + "'");
    return next();
  }
  long long expectInt() {
    bool negate = false;
    if (isSym("-")) {
      next();
      negate = true;
    }
    if (peek().kind != Token::Kind::Int)
      fail("expected an integer, found '" + peek().text + "'");
    const long long v = next().intValue;
    return negate ? -v : v;
  }

  // constant real-valued expressions for matrix and distribution literals
  double parseCReal() {
    double acc = parseCTerm();
    while (isSym("+") || isSym("-")) {
      const bool add = next().text == "+";
      const double rhs = parseCTerm();
      acc = add ? acc + rhs : acc - rhs;
    }
    return acc;
  }
  double parseCTerm() {
    double acc = parseCFactor();
    while (isSym("*") || isSym("/")) {
      const bool mul = next().text == "*";
      const double rhs = parseCFactor();
      if (!mul && rhs == 0.0) fail("division by zero in a constant expression");
      acc = mul ? acc * rhs : acc / rhs;
    }
    return acc;
  }
  double parseCFactor() {
    if (isSym("-")) {
      next();
      return -parseCFactor();
    }
    if (isSym("(")) {
      next();
      const double v = parseCReal();
      expectSym(")");
      return v;
    }
    if (isIdent("sqrt")) {
      next();
      expectSym("(");
      const double v = parseCReal();
      expectSym(")");
      if (v < 0) fail("sqrt of a negative constant");
      return std::sqrt(v);
    }
    if (peek().kind == Token::Kind::Int) return static_cast<double>(next().intValue);
    if (peek().kind == Token::Kind::Real) return next().realValue;
    fail("expected a numeric constant, found '" + peek().text + "'");
  }

  Mat parseMatrix() {
    expectSym("[");
    std::vector<std::vector<cxd>> rows;
    while (true) {
      rows.push_back(parseMatrixRow());
      if (isSym(",")) {
        next();
        continue;
      }
      break;
    }
    expectSym("]");
    const size_t r = rows.size();
    const size_t c = rows.front().size();
    for (const auto& row : rows)
      if (row.size() != c) fail("matrix rows have inconsistent lengths");
    Mat m(r, c);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    return m;
  }
  std::vector<cxd> parseMatrixRow() {
    expectSym("[");
    std::vector<cxd> row;
    while (true) {
      row.push_back(parseMatrixEntry());
      if (isSym(",")) {
        next();
        continue;
      }
      break;
    }
    expectSym("]");
    return row;
  }
  cxd parseMatrixEntry() {
    expectSym("[");
    const double re = parseCReal();
    expectSym(",");
    const double im = parseCReal();
    expectSym("]");
    return cxd(re, im);
  }

  void parseVarDecl(Decls& d) {
    expectKeyword("var");
    const std::string name = expectIdent().text;
    expectSym(":");
    expectSym("[");
    const long long lo = expectInt();
    expectSym("..");
    const long long hi = expectInt();
    expectSym("]");
    expectSym(";");
    d.addClassical(name, VarDomain{lo, hi});
  }

  void parseQubitDecl(Decls& d) {
    expectKeyword("qubit");
    const std::string name = expectIdent().text;
    expectSym(";");
    d.addQuantum(name, 2);
  }

  void parseQRegDecl(Decls& d) {
    expectKeyword("qreg");
    const std::string name = expectIdent().text;
    expectSym(":");
    const long long dim = expectInt();
    expectSym(";");
    d.addQuantum(name, static_cast<int>(dim));
  }

  void parseDistDecl(Decls& d) {
    expectKeyword("dist");
    const std::string name = expectIdent().text;
    expectSym(":=");
    expectSym("{");
    std::vector<std::pair<int, double>> weights;
    while (!isSym("}")) {
      const long long v = expectInt();
      expectSym(":");
      weights.emplace_back(static_cast<int>(v), parseCReal());
      if (isSym(",")) next();
    }
    expectSym("}");
    expectSym(";");
    d.addDist(name, std::move(weights));
  }

  void parseUnitaryDecl(Decls& d) {
    expectKeyword("unitary");
    const std::string name = expectIdent().text;
    expectSym(":=");
    const Mat u = parseMatrix();
    expectSym(";");
    d.addUnitary(name, u);
  }

  void parseMeasurementDecl(Decls& d) {
    expectKeyword("measurement");
    const std::string name = expectIdent().text;
    expectSym(":=");
    expectSym("{");
    std::vector<std::pair<int, Mat>> ms;
    while (!isSym("}")) {
      const long long v = expectInt();
      expectSym(":");
      ms.emplace_back(static_cast<int>(v), parseMatrix());
      if (isSym(",")) next();
    }
    expectSym("}");
    expectSym(";");
    d.addMeasurement(name, std::move(ms));
  }

  void parseProg(Module& m) {
    expectKeyword("prog");
    const std::string name = expectIdent().text;
    if (m.programs.count(name))
      throw DuplicateDecl("program '" + name + "' is declared twice");
    m.programs[name] = parseBlock();
    m.programOrder.push_back(name);
  }

  CommandPtr parseBlock() {
    expectSym("{");
    std::vector<CommandPtr> stmts;
    while (!isSym("}")) stmts.push_back(parseStmt());
    expectSym("}");
    return seq_of(stmts);
  }

  CommandPtr parseStmt() {
    auto c = std::make_shared<Command>();
    c->span = {peek().line, peek().column};
    if (isIdent("skip")) {
      next();
      expectSym(";");
      c->kind = Command::Kind::Skip;
      return c;
    }
    if (isIdent("abort")) {
      next();
      expectSym(";");
      c->kind = Command::Kind::Abort;
      return c;
    }
    if (isIdent("if")) {
      next();
      c->kind = Command::Kind::Cond;
      c->guard = parseExpr();
      c->c1 = parseBlock();
      if (isIdent("else")) {
        next();
        c->c2 = parseBlock();
      } else {
        c->c2 = mk_skip();
      }
      return c;
    }
    if (isIdent("while")) {
      next();
      c->kind = Command::Kind::While;
      c->guard = parseExpr();
      c->c1 = parseBlock();
      return c;
    }
    // statements starting with an identifier
    const std::string first = expectIdent().text;
    if (isSym(":=")) {
      next();
      if (isIdent("ket")) {
        next();
        expectSym("(");
        c->kind = Command::Kind::QInit;
        c->qregs = {first};
        if (isSym("+")) {
          next();
          c->ketValue = -1;
        } else if (isSym("-")) {
          next();
          c->ketValue = -2;
        } else {
          c->ketValue = static_cast<int>(expectInt());
        }
        expectSym(")");
        expectSym(";");
        return c;
      }
      c->kind = Command::Kind::Assign;
      c->var = first;
      c->expr = parseExpr();
      expectSym(";");
      return c;
    }
    if (isSym("<$")) {
      next();
      c->kind = Command::Kind::Sample;
      c->var = first;
      c->distName = expectIdent().text;
      expectSym(";");
      return c;
    }
    if (isSym("<-")) {
      next();
      expectKeyword("measure");
      c->kind = Command::Kind::Measure;
      c->var = first;
      c->opName = expectIdent().text;
      c->qregs.push_back(expectIdent().text);
      while (isSym(",")) {
        next();
        c->qregs.push_back(expectIdent().text);
      }
      expectSym(";");
      return c;
    }
    if (isSym(",") || isSym("*=")) {
      c->kind = Command::Kind::Unitary;
      c->qregs.push_back(first);
      while (isSym(",")) {
        next();
        c->qregs.push_back(expectIdent().text);
      }
      expectSym("*=");
      c->opName = expectIdent().text;
      expectSym(";");
      return c;
    }
    fail("expected ':=', '<$', '<-', or '*=' after '" + first + "'");
  }

  // precedence climbing: <-> | || | && | comparison | additive | multiplicative
  ExprPtr parseExpr() { return parseIff(); }
  ExprPtr parseIff() {
    ExprPtr e = parseOr();
    while (isSym("<->")) {
      next();
      e = mk_binary("<->", e, parseOr());
    }
    return e;
  }
  ExprPtr parseOr() {
    ExprPtr e = parseAnd();
    while (isSym("||")) {
      next();
      e = mk_binary("||", e, parseAnd());
    }
    return e;
  }
  ExprPtr parseAnd() {
    ExprPtr e = parseCmp();
    while (isSym("&&")) {
      next();
      e = mk_binary("&&", e, parseCmp());
    }
    return e;
  }
  ExprPtr parseCmp() {
    ExprPtr e = parseAdd();
    for (const char* op : {"==", "!=", "<=", ">=", "<", ">"}) {
      if (isSym(op)) {
        next();
        return mk_binary(op, e, parseAdd());
      }
    }
    if (isSym("=")) {  // accepted alias, printed back as ==
      next();
      return mk_binary("==", e, parseAdd());
    }
    return e;
  }
  ExprPtr parseAdd() {
    ExprPtr e = parseMul();
    while (isSym("+") || isSym("-")) {
      const std::string op = next().text;
      e = mk_binary(op, e, parseMul());
    }
    return e;
  }
  ExprPtr parseMul() {
    ExprPtr e = parseUnary();
    while (isSym("*")) {
      next();
      e = mk_binary("*", e, parseUnary());
    }
    return e;
  }
  ExprPtr parseUnary() {
    if (isSym("!")) {
      next();
      return mk_unary("!", parseUnary());
    }
    if (isSym("-")) {
      next();
      return mk_unary("neg", parseUnary());
    }
    return parseAtom();
  }
  ExprPtr parseAtom() {
    if (isSym("(")) {
      next();
      ExprPtr e = parseExpr();
      expectSym(")");
      return e;
    }
    if (peek().kind == Token::Kind::Int) return mk_const(next().intValue);
    if (isIdent("true")) {
      next();
      return mk_const(1);
    }
    if (isIdent("false")) {
      next();
      return mk_const(0);
    }
    if (peek().kind == Token::Kind::Ident) return mk_var(next().text);
    fail("expected an expression, found '" + peek().text + "'");
  }

  Lexer lex_;
};

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void print_matrix(std::ostringstream& os, const Mat& m) {
  os << "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) os << ", ";
    os << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ", ";
      os << "[" << format_double(m(i, j).real()) << ", "
         << format_double(m(i, j).imag()) << "]";
    }
    os << "]";
  }
  os << "]";
}

void print_command(std::ostringstream& os, const CommandPtr& c, int indent);

void print_block(std::ostringstream& os, const CommandPtr& c, int indent) {
  os << "{\n";
  for (const auto& s : seq_list(c)) print_command(os, s, indent + 1);
  if (c && c->kind == Command::Kind::Skip) {
    os << std::string(2 * (indent + 1), ' ') << "skip;\n";
  }
  os << std::string(2 * indent, ' ') << "}";
}

void print_command(std::ostringstream& os, const CommandPtr& c, int indent) {
  const std::string pad(2 * indent, ' ');
  os << pad;
  switch (c->kind) {
    case Command::Kind::Skip:
      os << "skip;";
      break;
    case Command::Kind::Abort:
      os << "abort;";
      break;
    case Command::Kind::Assign:
      os << c->var << " := " << expr_str(c->expr) << ";";
      break;
    case Command::Kind::Sample:
      os << c->var << " <$ " << c->distName << ";";
      break;
    case Command::Kind::QInit:
      os << c->qregs.front() << " := ket(";
      if (c->ketValue == -1)
        os << "+";
      else if (c->ketValue == -2)
        os << "-";
      else
        os << c->ketValue;
      os << ");";
      break;
    case Command::Kind::Unitary: {
      for (size_t i = 0; i < c->qregs.size(); ++i)
        os << (i ? ", " : "") << c->qregs[i];
      os << " *= " << c->opName << ";";
      break;
    }
    case Command::Kind::Measure: {
      os << c->var << " <- measure " << c->opName << " ";
      for (size_t i = 0; i < c->qregs.size(); ++i)
        os << (i ? ", " : "") << c->qregs[i];
      os << ";";
      break;
    }
    case Command::Kind::Cond:
      os << "if " << expr_str(c->guard) << " ";
      print_block(os, c->c1, indent);
      if (c->c2 && c->c2->kind != Command::Kind::Skip) {
        os << " else ";
        print_block(os, c->c2, indent);
      }
      break;
    case Command::Kind::While:
      os << "while " << expr_str(c->guard) << " ";
      print_block(os, c->c1, indent);
      break;
    case Command::Kind::Seq:
      // Seq never appears directly: blocks print their flattened lists.
      for (const auto& s : seq_list(c)) print_command(os, s, indent);
      return;
  }
  os << "\n";
}

}  // namespace

Module parse_module(const std::string& text) {
  Parser p(text);
  return p.parseModule();
}

std::string pretty_command(const CommandPtr& c, int indent) {
  std::ostringstream os;
  if (c->kind == Command::Kind::Seq || c->kind == Command::Kind::Skip) {
    for (const auto& s : seq_list(c)) print_command(os, s, indent);
    if (seq_list(c).empty())
      os << std::string(2 * indent, ' ') << "skip;\n";
  } else {
    print_command(os, c, indent);
  }
  return os.str();
}

std::string pretty(const Module& m) {
  std::ostringstream os;
  for (const auto& n : m.decls.classicalOrder) {
    const auto& d = m.decls.classical.at(n);
    os << "var " << n << " : [" << d.lo << " .. " << d.hi << "];\n";
  }
  for (const auto& r : m.decls.qspace) {
    if (r.dim == 2)
      os << "qubit " << r.name << ";\n";
    else
      os << "qreg " << r.name << " : " << r.dim << ";\n";
  }
  for (const auto& [n, w] : m.decls.dists) {
    os << "dist " << n << " := { ";
    for (size_t i = 0; i < w.size(); ++i) {
      if (i) os << ", ";
      os << w[i].first << ": " << format_double(w[i].second);
    }
    os << " };\n";
  }
  for (const auto& [n, u] : m.decls.unitaries) {
    os << "unitary " << n << " := ";
    print_matrix(os, u);
    os << ";\n";
  }
  for (const auto& [n, ms] : m.decls.measurements) {
    os << "measurement " << n << " := { ";
    for (size_t i = 0; i < ms.size(); ++i) {
      if (i) os << ", ";
      os << ms[i].first << ": ";
      print_matrix(os, ms[i].second);
    }
    os << " };\n";
  }
  for (const auto& n : m.programOrder) {
    os << "prog " << n << " ";
    std::ostringstream body;
    print_block(body, m.programs.at(n), 0);
    os << body.str() << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// typechecking
// ---------------------------------------------------------------------------

namespace {
void check_expr_vars(const ExprPtr& e, const Decls& d) {
  std::set<std::string> vars;
  expr_free_vars(e, vars);
  for (const auto& v : vars)
    if (!d.hasClassical(v))
      throw TypeError("expression mentions undeclared classical variable '" + v + "'");
}

void check_regs(const std::vector<std::string>& regs, const Decls& d,
                Eigen::Index opDim, const std::string& what) {
  std::set<std::string> seen;
  long long dim = 1;
  for (const auto& q : regs) {
    if (!d.hasQuantum(q))
      throw TypeError(what + " names undeclared quantum register '" + q + "'");
    if (!seen.insert(q).second)
      throw TypeError(what + " lists quantum register '" + q + "' twice");
    dim *= d.qdim(q);
  }
  if (opDim >= 0 && dim != opDim)
    throw TypeError(what + " spans " + std::to_string(dim) +
                    " dimensions but the operator acts on " +
                    std::to_string(opDim));
}
}  // namespace

void typecheck_command(const CommandPtr& c, const Decls& d) {
  switch (c->kind) {
    case Command::Kind::Skip:
    case Command::Kind::Abort:
      return;
    case Command::Kind::Assign: {
      if (!d.hasClassical(c->var))
        throw TypeError("assignment to undeclared variable '" + c->var + "'");
      check_expr_vars(c->expr, d);
      if (c->expr->kind == Expr::Kind::Const &&
          !d.domain(c->var).contains(c->expr->value))
        throw TypeError("constant " + std::to_string(c->expr->value) +
                        " lies outside the domain of '" + c->var + "'");
      return;
    }
    case Command::Kind::Sample: {
      if (!d.hasClassical(c->var))
        throw TypeError("sampling into undeclared variable '" + c->var + "'");
      auto it = d.dists.find(c->distName);
      if (it == d.dists.end())
        throw TypeError("sampling from undeclared distribution '" +
                        c->distName + "'");
      for (const auto& [v, p] : it->second)
        if (!d.domain(c->var).contains(v))
          throw TypeError("distribution '" + c->distName + "' can produce " +
                          std::to_string(v) + ", outside the domain of '" +
                          c->var + "'");
      return;
    }
    case Command::Kind::QInit: {
      check_regs(c->qregs, d, -1, "initialization");
      const int dim = d.qdim(c->qregs.front());
      if (c->ketValue < 0) {
        if (dim != 2)
          throw TypeError("ket(+|-) needs a 2-dimensional register, '" +
                          c->qregs.front() + "' has dimension " +
                          std::to_string(dim));
      } else if (c->ketValue >= dim) {
        throw TypeError("ket(" + std::to_string(c->ketValue) +
                        ") is out of range for register '" + c->qregs.front() +
                        "' of dimension " + std::to_string(dim));
      }
      return;
    }
    case Command::Kind::Unitary: {
      auto it = d.unitaries.find(c->opName);
      if (it == d.unitaries.end())
        throw TypeError("application of undeclared unitary '" + c->opName + "'");
      check_regs(c->qregs, d, it->second.rows(), "unitary application");
      return;
    }
    case Command::Kind::Measure: {
      if (!d.hasClassical(c->var))
        throw TypeError("measurement into undeclared variable '" + c->var + "'");
      auto it = d.measurements.find(c->opName);
      if (it == d.measurements.end())
        throw TypeError("use of undeclared measurement '" + c->opName + "'");
      check_regs(c->qregs, d, it->second.front().second.rows(), "measurement");
      for (const auto& [v, m] : it->second)
        if (!d.domain(c->var).contains(v))
          throw TypeError("measurement '" + c->opName + "' can produce outcome " +
                          std::to_string(v) + ", outside the domain of '" +
                          c->var + "'");
      return;
    }
    case Command::Kind::Seq:
      typecheck_command(c->c1, d);
      typecheck_command(c->c2, d);
      return;
    case Command::Kind::Cond:
      check_expr_vars(c->guard, d);
      typecheck_command(c->c1, d);
      typecheck_command(c->c2, d);
      return;
    case Command::Kind::While:
      check_expr_vars(c->guard, d);
      typecheck_command(c->c1, d);
      return;
  }
}

void typecheck(const Module& m) {
  for (const auto& [name, prog] : m.programs) typecheck_command(prog, m.decls);
}

}  // namespace cqverify
