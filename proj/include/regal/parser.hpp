#pragma once

// Recursive-descent parser for the concrete syntax documented in
// docs/grammar.md.  Produces an unresolved SourceUnit; name resolution and
// typechecking happen in resolve.hpp.

#include <set>
#include <string>
#include <vector>

#include "regal/ast.hpp"
#include "regal/lexer.hpp"
#include "regal/source_unit.hpp"
#include "regal/syntax_ops.hpp"

namespace regal {

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  SourceUnit parse_unit() {
    SourceUnit u;
    while (!at_eof()) {
      if (accept_kw("class")) parse_class(u);
      else if (accept_kw("global")) parse_global(u);
      else if (accept_kw("import")) { u.main_imports.push_back(expect_ident()); expect(";"); }
      else if (accept_kw("interface")) parse_interface(u);
      else if (accept_kw("module")) parse_impl(u);
      else if (accept_kw("bimodule")) parse_bimodule(u);
      else if (accept_kw("meth")) u.main_meths.push_back(parse_meth(true));
      else if (accept_kw("bimeth")) u.bimeths.push_back(parse_bimeth());
      else if (accept_kw("bi")) parse_bare_bi(u);
      else if (accept_kw("check")) parse_check(u);
      else if (accept_kw("bounds")) parse_bounds(u);
      else fail("expected a declaration");
    }
    return u;
  }

  // entry points used by tests and the CLI
  CommandPtr parse_command_only() {
    auto c = parse_command();
    expect_eof();
    return c;
  }
  BiprogramPtr parse_biprogram_only() {
    auto b = parse_biprogram();
    expect_eof();
    return b;
  }
  FormulaPtr parse_formula_only() {
    auto f = parse_formula();
    expect_eof();
    return f;
  }
  RelFormulaPtr parse_rel_formula_only() {
    auto f = parse_rel_formula();
    expect_eof();
    return f;
  }
  ExprPtr parse_expr_only() {
    auto e = parse_expr();
    expect_eof();
    return e;
  }
  Effect parse_effect_only() {
    Effect eff = parse_effect_list(true);
    expect_eof();
    return eff;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  int next_label_ = 2;  // label 1 is reserved for skip-like constants

  const Token& cur() const { return toks_[pos_]; }
  bool at_eof() const { return cur().k == Token::K::Eof; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " (found '" + (at_eof() ? "<eof>" : cur().text) + "')",
                     cur().line, cur().col);
  }
  void expect_eof() {
    if (!at_eof()) fail("expected end of input");
  }
  bool peek_sym(const std::string& s, size_t off = 0) const {
    const Token& t = toks_[std::min(pos_ + off, toks_.size() - 1)];
    return t.k == Token::K::Sym && t.text == s;
  }
  bool peek_ident(size_t off = 0) const {
    const Token& t = toks_[std::min(pos_ + off, toks_.size() - 1)];
    return t.k == Token::K::Ident;
  }
  bool peek_kw(const std::string& s, size_t off = 0) const {
    const Token& t = toks_[std::min(pos_ + off, toks_.size() - 1)];
    return t.k == Token::K::Ident && t.text == s;
  }
  bool accept(const std::string& sym) {
    if (peek_sym(sym)) { pos_++; return true; }
    return false;
  }
  bool accept_kw(const std::string& kw) {
    if (peek_kw(kw)) { pos_++; return true; }
    return false;
  }
  void expect(const std::string& sym) {
    if (!accept(sym)) fail("expected '" + sym + "'");
  }
  void expect_kw(const std::string& kw) {
    if (!accept_kw(kw)) fail("expected '" + kw + "'");
  }
  Ident expect_ident() {
    if (cur().k != Token::K::Ident) fail("expected identifier");
    Ident s = cur().text;
    pos_++;
    return s;
  }
  long long expect_int() {
    bool neg = accept("-");
    if (cur().k != Token::K::Int) fail("expected integer");
    long long v = cur().num;
    pos_++;
    return neg ? -v : v;
  }
  int label() { return next_label_++; }

  static const std::set<std::string>& reserved() {
    static const std::set<std::string> kws = {
        "class", "global", "import", "interface", "module", "bimodule", "meth",
        "bimeth", "bi", "check", "bounds", "boundary", "public", "private",
        "invariant", "coupling", "requires", "ensures", "reads", "writes", "rel",
        "skip", "if", "then", "else", "fi", "while", "do", "od", "var", "in",
        "end", "let", "new", "null", "true", "false", "not", "forall", "exists",
        "iin", "subseteq", "Type", "agree", "left", "right", "both", "later",
        "lft", "rgt", "int", "bool", "rgn", "intlist", "partition", "nil",
        "cons", "tl", "rd", "wr", "rw", "unary", "link", "weave", "using",
        "client", "to"};
    return kws;
  }

  Ident expect_name() {  // identifier that is not a keyword; spec-only names
                         // (prefix s_) are rejected here and only admitted in
                         // formula positions
    Ident s = expect_ident();
    if (reserved().count(s)) fail("'" + s + "' is a reserved word");
    return s;
  }

  Type parse_type() {
    Ident s = expect_ident();
    if (s == "int") return Type::intt();
    if (s == "bool") return Type::boolt();
    if (s == "rgn") return Type::rgn();
    if (s == "intlist") return Type::intlist();
    if (s == "partition") return Type::partition();
    if (reserved().count(s)) fail("'" + s + "' is not a type");
    return Type::cls_t(s);
  }

  // ------------------------------------------------------------------ exprs

  // `in_formula`: stop before boolean connectives so the formula layer owns
  // them (they are also accepted inside program expressions).
  ExprPtr parse_expr(bool in_formula = false) {
    return parse_or(in_formula);
  }

  ExprPtr parse_or(bool in_formula) {
    auto a = parse_and(in_formula);
    while (!in_formula && peek_sym("\\/")) {
      pos_++;
      a = mk_bin(BinOp::Or, a, parse_and(in_formula));
    }
    return a;
  }
  ExprPtr parse_and(bool in_formula) {
    auto a = parse_cmp(in_formula);
    while (!in_formula && peek_sym("/\\")) {
      pos_++;
      a = mk_bin(BinOp::And, a, parse_cmp(in_formula));
    }
    return a;
  }
  ExprPtr parse_cmp(bool in_formula) {
    auto a = parse_add();
    if (in_formula) return a;  // comparisons belong to the formula layer there
    BinOp op;
    if (accept("=")) op = BinOp::Eq;
    else if (accept("<>")) op = BinOp::Ne;
    else if (accept("<=")) op = BinOp::Le;
    else if (accept(">=")) op = BinOp::Ge;
    else if (accept("<")) op = BinOp::Lt;
    else if (accept(">")) op = BinOp::Gt;
    else if (accept_kw("iin")) op = BinOp::In;
    else if (accept_kw("subseteq")) op = BinOp::Subset;
    else return a;
    return mk_bin(op, a, parse_add());
  }
  ExprPtr parse_add() {
    auto a = parse_mul();
    for (;;) {
      if (accept("+")) a = mk_bin(BinOp::Add, a, parse_mul());
      else if (accept("-")) a = mk_bin(BinOp::Sub, a, parse_mul());
      else if (accept("**")) a = mk_bin(BinOp::Union, a, parse_mul());
      else if (accept("\\")) a = mk_bin(BinOp::Diff, a, parse_mul());
      else return a;
    }
  }
  ExprPtr parse_mul() {
    auto a = parse_postfix();
    for (;;) {
      if (accept("*")) a = mk_bin(BinOp::Mul, a, parse_postfix());
      else if (accept("^")) a = mk_bin(BinOp::Inter, a, parse_postfix());
      else return a;
    }
  }
  ExprPtr parse_postfix() {
    auto a = parse_atom_expr();
    for (;;) {
      if (accept("`")) {
        a = mk_image(a, expect_ident());
      } else if (peek_sym("/") && peek_ident(1)) {
        pos_++;
        a = mk_restrict(a, expect_ident());
      } else {
        return a;
      }
    }
  }
  ExprPtr parse_atom_expr() {
    if (cur().k == Token::K::Int) {
      long long v = cur().num;
      pos_++;
      return mk_int(v);
    }
    if (accept("-")) {
      auto e = parse_postfix();
      if (e->k == Expr::K::IntLit) return mk_int(-e->num);
      return mk_un(UnOp::Neg, e);
    }
    if (accept_kw("not")) return mk_un(UnOp::Not, parse_postfix());
    if (accept_kw("true")) return mk_bool(true);
    if (accept_kw("false")) return mk_bool(false);
    if (accept_kw("null")) return mk_null();
    if (accept_kw("nil")) { Expr e; e.k = Expr::K::Nil; return mk_expr(std::move(e)); }
    if (accept_kw("cons")) {
      expect("(");
      auto h = parse_expr();
      expect(",");
      auto t = parse_expr();
      expect(")");
      Expr e; e.k = Expr::K::Cons; e.a = h; e.b = t;
      return mk_expr(std::move(e));
    }
    if (accept_kw("tl")) {
      expect("(");
      auto l = parse_expr();
      expect(")");
      Expr e; e.k = Expr::K::Tail; e.a = l;
      return mk_expr(std::move(e));
    }
    if (accept("{")) {
      if (accept("}")) return mk_empty_rgn();
      auto e = parse_expr();
      expect("}");
      return mk_sing(e);
    }
    if (accept("(")) {
      auto e = parse_expr();
      expect(")");
      return e;
    }
    if (cur().k == Token::K::Ident && !reserved().count(cur().text)) {
      return mk_var(expect_ident());
    }
    if (peek_kw("alloc")) {  // not reserved, but be explicit: alloc is a variable
      return mk_var(expect_ident());
    }
    fail("expected expression");
  }

  // -------------------------------------------------------------- left-exprs

  LeftExpr parse_left_expr() {
    // x | x.f | G`f  (the x.f form abbreviates {x}`f)
    if (peek_ident() && !reserved().count(cur().text) && peek_sym(".", 1)) {
      Ident x = expect_ident();
      expect(".");
      Ident f = expect_ident();
      return LeftExpr::mk_image(mk_sing(mk_var(x)), f);
    }
    auto e = parse_postfix();
    if (e->k == Expr::K::Image) return LeftExpr::mk_image(e->a, e->name);
    if (e->k == Expr::K::Var) return LeftExpr::mk_var(e->name);
    fail("expected a left-expression (variable or region image)");
  }

  // effect list: [rd|wr|rw] LE, ...   (bare LEs are reads when reads_default)
  Effect parse_effect_list(bool reads_default) {
    Effect eff;
    if (peek_sym("}")) return eff;
    for (;;) {
      int mode = reads_default ? 1 : 2;  // 1 rd, 2 wr, 3 rw
      if (accept_kw("rd")) mode = 1;
      else if (accept_kw("wr")) mode = 2;
      else if (accept_kw("rw")) mode = 3;
      LeftExpr le = parse_left_expr();
      if (mode & 1) effect_add(eff, {true, le});
      if (mode & 2) effect_add(eff, {false, le});
      if (!accept(",")) break;
    }
    return eff;
  }

  // ---------------------------------------------------------------- formulas

  FormulaPtr parse_formula() { return parse_f_imply(); }
  FormulaPtr parse_f_imply() {
    auto a = parse_f_or();
    if (accept("->")) return f_imply(a, parse_f_imply());
    return a;
  }
  FormulaPtr parse_f_or() {
    auto a = parse_f_and();
    while (accept("\\/")) a = f_or(a, parse_f_and());
    return a;
  }
  FormulaPtr parse_f_and() {
    auto a = parse_f_unary();
    while (accept("/\\")) a = f_and(a, parse_f_unary());
    return a;
  }
  FormulaPtr parse_f_unary() {
    if (accept_kw("not")) return f_not(parse_f_unary());
    if (peek_kw("forall") || peek_kw("exists")) {
      bool uni = cur().text == "forall";
      pos_++;
      Ident x = expect_ident();
      expect(":");
      Type t = parse_type();
      expect(".");
      auto body = parse_formula();
      return uni ? f_forall(x, t, body) : f_exists(x, t, body);
    }
    return parse_f_atom();
  }
  FormulaPtr parse_f_atom() {
    if (accept_kw("Type")) {
      expect("(");
      auto g = parse_expr();
      std::vector<Ident> ks;
      while (peek_ident()) ks.push_back(expect_ident());
      expect(")");
      return f_type_test(g, std::move(ks));
    }
    if (accept("(")) {
      auto f = parse_formula();
      expect(")");
      return f;
    }
    // points-to: IDENT . IDENT = F
    if (peek_ident() && !reserved().count(cur().text) && peek_sym(".", 1)) {
      Ident x = expect_ident();
      expect(".");
      Ident fld = expect_ident();
      expect("=");
      auto rhs = parse_expr(true);
      return f_points_to(x, fld, rhs);
    }
    // primitive predicate: IDENT ( args )
    if (peek_ident() && !reserved().count(cur().text) && peek_sym("(", 1)) {
      Ident name = expect_ident();
      expect("(");
      std::vector<ExprPtr> args;
      if (!peek_sym(")")) {
        args.push_back(parse_expr());
        while (accept(",")) args.push_back(parse_expr());
      }
      expect(")");
      return f_prim(name, std::move(args));
    }
    auto e = parse_expr(true);
    // comparisons parsed inside the expression yield Atom directly; but a
    // region/list/snapshot equation becomes Eq so S = F round-trips
    if (accept("=")) {
      auto rhs = parse_expr(true);
      return f_eq(e, rhs);
    }
    if (accept_kw("subseteq")) return f_subset(e, parse_expr(true));
    if (accept("#")) return f_disjoint(e, parse_expr(true));
    if (accept("<>")) return f_not(f_eq(e, parse_expr(true)));
    if (accept_kw("iin")) return f_atom(mk_bin(BinOp::In, e, parse_expr(true)));
    if (accept("<=")) return f_atom(mk_bin(BinOp::Le, e, parse_expr(true)));
    if (accept(">=")) return f_atom(mk_bin(BinOp::Ge, e, parse_expr(true)));
    if (accept("<")) return f_atom(mk_bin(BinOp::Lt, e, parse_expr(true)));
    if (accept(">")) return f_atom(mk_bin(BinOp::Gt, e, parse_expr(true)));
    return f_atom(e);
  }

  // ------------------------------------------------------- relation formulas

  RelFormulaPtr parse_rel_formula() { return parse_r_imply(); }
  RelFormulaPtr parse_r_imply() {
    auto a = parse_r_or();
    if (accept("->")) return r_imply(a, parse_r_imply());
    return a;
  }
  RelFormulaPtr parse_r_or() {
    auto a = parse_r_and();
    while (accept("\\/")) a = r_or(a, parse_r_and());
    return a;
  }
  RelFormulaPtr parse_r_and() {
    auto a = parse_r_unary();
    while (accept("/\\")) a = r_and(a, parse_r_unary());
    return a;
  }
  RelFormulaPtr parse_r_unary() {
    if (accept_kw("not")) return r_not(parse_r_unary());
    if (peek_kw("forall") || peek_kw("exists")) {
      bool uni = cur().text == "forall";
      pos_++;
      Ident x = expect_ident();
      expect(":");
      Type t = parse_type();
      expect("|");
      Ident x2 = expect_ident();
      expect(":");
      Type t2 = parse_type();
      expect(".");
      auto body = parse_rel_formula();
      return uni ? r_forall(x, t, x2, t2, body) : r_exists(x, t, x2, t2, body);
    }
    return parse_r_atom();
  }
  RelFormulaPtr parse_r_atom() {
    if (accept_kw("left")) {
      expect("(");
      auto f = parse_formula();
      expect(")");
      return r_left(f);
    }
    if (accept_kw("right")) {
      expect("(");
      auto f = parse_formula();
      expect(")");
      return r_right(f);
    }
    if (accept_kw("both")) {
      expect("(");
      auto f = parse_formula();
      expect(")");
      return r_both(f);
    }
    if (accept_kw("later")) {
      expect("(");
      auto p = parse_rel_formula();
      expect(")");
      return r_later(p);
    }
    if (accept_kw("agree")) return r_agree(parse_left_expr());
    if (accept_kw("true")) return r_true();
    if (accept_kw("false")) return r_false();
    if (accept("_")) return r_hole();
    // primitive relational predicate: IDENT ( (lft|rgt) F, ... )
    if (peek_ident() && !reserved().count(cur().text) && peek_sym("(", 1) &&
        (peek_kw("lft", 2) || peek_kw("rgt", 2))) {
      Ident name = expect_ident();
      expect("(");
      std::vector<std::pair<Side, ExprPtr>> args;
      for (;;) {
        Side s = accept_kw("lft") ? Side::Left
                                  : (expect_kw("rgt"), Side::Right);
        args.emplace_back(s, parse_expr());
        if (!accept(",")) break;
      }
      expect(")");
      return r_prim(name, std::move(args));
    }
    if (accept("(")) {
      // parenthesized relation formula or grouped expression of a bi-eq;
      // backtrack on failure
      size_t save = pos_;
      try {
        auto p = parse_rel_formula();
        expect(")");
        if (!peek_sym("=:=")) return p;
      } catch (const ParseError&) {
      }
      pos_ = save - 1;  // undo the '('
    }
    auto e = parse_expr(true);
    expect("=:=");
    auto e2 = parse_expr(true);
    return r_bieq(e, e2);
  }

  // ---------------------------------------------------------------- commands

  CommandPtr parse_command() {
    auto c = parse_stmt();
    while (accept(";")) {
      if (stmt_follows()) c = c_seq(c, parse_stmt());
      else break;  // trailing semicolon
    }
    return c;
  }

  bool stmt_follows() const {
    if (peek_kw("skip") || peek_kw("if") || peek_kw("while") || peek_kw("var") ||
        peek_kw("let"))
      return true;
    return peek_ident() && !reserved().count(cur().text);
  }

  CommandPtr parse_stmt() {
    if (accept_kw("skip")) return c_skip();
    if (accept_kw("if")) {
      auto e = parse_expr();
      expect_kw("then");
      auto t = parse_command();
      CommandPtr f = c_skip();
      if (accept_kw("else")) f = parse_command();
      expect_kw("fi");
      return c_if(e, t, f, label());
    }
    if (accept_kw("while")) {
      auto e = parse_expr();
      expect_kw("do");
      auto body = parse_command();
      expect_kw("od");
      return c_while(e, body, label());
    }
    if (accept_kw("var")) {
      Ident x = expect_name();
      expect(":");
      Type t = parse_type();
      expect_kw("in");
      auto body = parse_command();
      expect_kw("end");
      return c_var(x, t, body, label());
    }
    if (accept_kw("let")) {
      Ident m = expect_name();
      expect("=");
      auto body = parse_command();
      expect_kw("in");
      auto cont = parse_command();
      expect_kw("end");
      return c_let(m, body, cont, label());
    }
    Ident x = expect_name();
    if (accept("(")) {
      expect(")");
      return c_call(x, label());
    }
    if (accept(".")) {
      Ident f = expect_ident();
      expect(":=");
      Ident y = expect_name();
      return c_store(x, f, y, label());
    }
    expect(":=");
    if (accept_kw("new")) return c_alloc(x, expect_ident(), label());
    // load x := y.f, else general assignment
    if (peek_ident() && !reserved().count(cur().text) && peek_sym(".", 1)) {
      Ident y = expect_ident();
      expect(".");
      Ident f = expect_ident();
      return c_load(x, y, f, label());
    }
    return c_assign(x, parse_expr(), label());
  }

  // -------------------------------------------------------------- biprograms

  BiprogramPtr parse_biprogram() {
    auto b = parse_bistmt();
    while (accept(";")) {
      if (bistmt_follows()) b = b_seq(b, parse_bistmt());
      else break;
    }
    return b;
  }

  bool bistmt_follows() const {
    return peek_sym("|_") || peek_sym("(") || peek_kw("if") || peek_kw("while") ||
           peek_kw("var") || peek_kw("let");
  }

  BiprogramPtr parse_bistmt() {
    if (accept("|_")) {
      auto a = parse_stmt();
      if (!is_atomic(*a)) fail("sync form requires an atomic command");
      expect("_|");
      return b_sync(a, label());
    }
    if (accept("(")) {
      auto l = parse_command();
      expect("|");
      auto r = parse_command();
      expect(")");
      return b_com(l, r, label());
    }
    if (accept_kw("if")) {
      auto el = parse_expr();
      expect("|");
      auto er = parse_expr();
      expect_kw("then");
      auto t = parse_biprogram();
      BiprogramPtr f = b_skip();
      if (accept_kw("else")) f = parse_biprogram();
      expect_kw("fi");
      return b_if(el, er, t, f, label());
    }
    if (accept_kw("while")) {
      auto el = parse_expr();
      expect("|");
      auto er = parse_expr();
      RelFormulaPtr gl = r_false(), gr = r_false();
      if (accept(".")) {
        gl = parse_rel_formula();
        expect("|");
        gr = parse_rel_formula();
      }
      expect_kw("do");
      auto body = parse_biprogram();
      expect_kw("od");
      return b_while(el, er, gl, gr, body, label());
    }
    if (accept_kw("var")) {
      Ident xl = expect_name();
      expect(":");
      Type tl = parse_type();
      expect("|");
      Ident xr = expect_name();
      expect(":");
      Type tr = parse_type();
      expect_kw("in");
      auto body = parse_biprogram();
      expect_kw("end");
      return b_var(xl, tl, xr, tr, body, label());
    }
    if (accept_kw("let")) {
      Ident m = expect_name();
      expect("=");
      expect("(");
      auto bl = parse_command();
      expect("|");
      auto br = parse_command();
      expect(")");
      expect_kw("in");
      auto cont = parse_biprogram();
      expect_kw("end");
      return b_let(m, bl, br, cont, label());
    }
    fail("expected a biprogram statement");
  }

  // ------------------------------------------------------------ declarations

  void parse_class(SourceUnit& u) {
    ClassDecl cd;
    cd.name = expect_name();
    expect("{");
    while (!accept("}")) {
      Ident f = expect_name();
      expect(":");
      cd.fields.emplace_back(f, parse_type());
      accept(";");
    }
    u.classes.push_back(std::move(cd));
  }

  void parse_global(SourceUnit& u) {
    Ident x = expect_name();
    expect(":");
    u.globals.emplace_back(x, parse_type());
    expect(";");
  }

  // requires/ensures/reads/writes clauses in any order
  void parse_spec_clauses(MethDecl& m) {
    m.spec.pre = f_true();
    m.spec.post = f_true();
    for (;;) {
      if (accept_kw("requires")) {
        expect("{");
        m.spec.pre = parse_formula();
        expect("}");
        m.has_spec = true;
      } else if (accept_kw("ensures")) {
        expect("{");
        m.spec.post = parse_formula();
        expect("}");
        m.has_spec = true;
      } else if (accept_kw("reads")) {
        expect("{");
        for (auto& a : parse_effect_list(true))
          if (a.is_read) effect_add(m.spec.frame, a);
        expect("}");
        m.has_spec = true;
      } else if (accept_kw("writes")) {
        expect("{");
        for (auto& a : parse_effect_list(false))
          effect_add(m.spec.frame, a);
        expect("}");
        m.has_spec = true;
      } else if (peek_kw("rel")) {
        pos_++;
        if (!m.relspec) {
          RelSpec rs;
          rs.pre = r_true();
          rs.post = r_true();
          m.relspec = rs;
        }
        if (accept_kw("requires")) {
          expect("{");
          m.relspec->pre = parse_rel_formula();
          expect("}");
        } else if (accept_kw("ensures")) {
          expect("{");
          m.relspec->post = parse_rel_formula();
          expect("}");
        } else {
          fail("expected 'requires' or 'ensures' after 'rel'");
        }
      } else {
        break;
      }
    }
  }

  MethDecl parse_meth(bool with_body) {
    MethDecl m;
    m.line = cur().line;
    m.name = expect_name();
    expect("(");
    expect(")");
    parse_spec_clauses(m);
    if (with_body || peek_sym("=")) {
      expect("=");
      m.body = parse_command();
      expect_kw("end");
    }
    return m;
  }

  void parse_rel_spec_clauses(RelSpec& rs, bool& has) {
    for (;;) {
      if (accept_kw("requires")) {
        expect("{");
        rs.pre = parse_rel_formula();
        expect("}");
        has = true;
      } else if (accept_kw("ensures")) {
        expect("{");
        rs.post = parse_rel_formula();
        expect("}");
        has = true;
      } else if (accept_kw("reads")) {
        expect("{");
        Effect l = parse_effect_list(true);
        Effect r = l;
        if (accept("|")) r = parse_effect_list(true);
        expect("}");
        for (auto& a : l)
          if (a.is_read) effect_add(rs.frame_l, a);
        for (auto& a : r)
          if (a.is_read) effect_add(rs.frame_r, a);
        has = true;
      } else if (accept_kw("writes")) {
        expect("{");
        Effect l = parse_effect_list(false);
        Effect r = l;
        if (accept("|")) r = parse_effect_list(false);
        expect("}");
        for (auto& a : l) effect_add(rs.frame_l, a);
        for (auto& a : r) effect_add(rs.frame_r, a);
        has = true;
      } else {
        break;
      }
    }
  }

  BiMethDecl parse_bimeth() {
    BiMethDecl b;
    b.line = cur().line;
    b.name = expect_name();
    expect("(");
    expect(")");
    RelSpec rs;
    rs.pre = r_true();
    rs.post = r_true();
    bool has = false;
    parse_rel_spec_clauses(rs, has);
    if (has) b.relspec = rs;
    expect("=");
    b.body = parse_biprogram();
    expect_kw("end");
    return b;
  }

  void parse_interface(SourceUnit& u) {
    InterfaceDecl d;
    d.line = cur().line;
    d.name = expect_name();
    expect("=");
    for (;;) {
      if (accept_kw("import")) {
        d.imports.push_back(expect_ident());
        expect(";");
      } else if (accept_kw("boundary")) {
        expect("{");
        for (auto& a : parse_effect_list(true)) effect_add(d.boundary, a);
        expect("}");
        accept(";");
      } else if (accept_kw("public")) {
        expect_kw("invariant");
        expect("{");
        auto inv = parse_formula();
        expect("}");
        accept(";");
        d.public_inv = d.public_inv ? f_and(d.public_inv, inv) : inv;
      } else if (accept_kw("meth")) {
        d.meths.push_back(parse_meth(false));
        accept(";");
      } else if (accept_kw("end")) {
        break;
      } else {
        fail("expected interface item");
      }
    }
    u.interfaces.push_back(std::move(d));
  }

  void parse_impl(SourceUnit& u) {
    ImplDecl d;
    d.line = cur().line;
    d.name = expect_name();
    expect(":");
    d.iface = expect_ident();
    expect("=");
    for (;;) {
      if (accept_kw("private")) {
        expect_kw("invariant");
        expect("{");
        auto inv = parse_formula();
        expect("}");
        accept(";");
        d.private_inv = d.private_inv ? f_and(d.private_inv, inv) : inv;
      } else if (accept_kw("meth")) {
        d.meths.push_back(parse_meth(true));
        accept(";");
      } else if (accept_kw("end")) {
        break;
      } else {
        fail("expected module item");
      }
    }
    u.impls.push_back(std::move(d));
  }

  void parse_bimodule(SourceUnit& u) {
    BimoduleDecl d;
    d.line = cur().line;
    d.name = expect_name();
    expect(":");
    d.left_impl = expect_ident();
    expect("|");
    d.right_impl = expect_ident();
    expect("=");
    for (;;) {
      if (accept_kw("coupling")) {
        expect("{");
        auto c = parse_rel_formula();
        expect("}");
        accept(";");
        d.coupling = d.coupling ? r_and(d.coupling, c) : c;
      } else if (accept_kw("meth")) {
        d.meths.push_back(parse_bimeth());
        accept(";");
      } else if (accept_kw("end")) {
        break;
      } else {
        fail("expected bimodule item");
      }
    }
    u.bimodules.push_back(std::move(d));
  }

  void parse_bare_bi(SourceUnit& u) {
    BareBi b;
    b.line = cur().line;
    b.name = expect_name();
    expect("=");
    b.body = parse_biprogram();
    expect_kw("end");
    u.bis.push_back(std::move(b));
  }

  void parse_check(SourceUnit& u) {
    CheckDecl c;
    c.line = cur().line;
    if (accept_kw("unary")) {
      c.kind = CheckDecl::Kind::Unary;
      c.target = expect_ident();
      if (accept_kw("using")) {
        c.using_impls.push_back(expect_ident());
        while (accept(",")) c.using_impls.push_back(expect_ident());
      }
    } else if (accept_kw("rel")) {
      c.kind = CheckDecl::Kind::Rel;
      c.target = expect_ident();
      if (accept_kw("using")) {
        c.using_impls.push_back(expect_ident());
        while (accept(",")) c.using_impls.push_back(expect_ident());
      }
    } else if (accept_kw("link")) {
      c.kind = CheckDecl::Kind::Link;
      c.target = expect_ident();
      expect_kw("client");
      c.client = expect_ident();
    } else if (accept_kw("weave")) {
      c.kind = CheckDecl::Kind::Weave;
      c.target = expect_ident();
      expect_kw("to");
      c.target2 = expect_ident();
    } else {
      fail("expected 'unary', 'rel', 'link' or 'weave'");
    }
    expect(";");
    u.checks.push_back(std::move(c));
  }

  void parse_bounds(SourceUnit& u) {
    Bounds b = u.bounds ? *u.bounds : Bounds{};
    expect("{");
    while (!accept("}")) {
      Ident key = expect_ident();
      if (key == "ints") {
        expect("=");
        b.int_lo = expect_int();
        expect("..");
        b.int_hi = expect_int();
      } else if (key == "qints") {
        expect("=");
        b.qint_lo = expect_int();
        expect("..");
        b.qint_hi = expect_int();
      } else if (key == "heap") {
        if (peek_ident()) {
          Ident cls = expect_ident();
          expect("=");
          b.heap_per_class[cls] = static_cast<int>(expect_int());
        } else {
          expect("=");
          b.heap_default = static_cast<int>(expect_int());
        }
      } else if (key == "fuel") {
        expect("=");
        b.fuel = expect_int();
      } else if (key == "len") {
        expect("=");
        b.list_len = static_cast<int>(expect_int());
      } else if (key == "depth") {
        expect("=");
        b.weave_depth = static_cast<int>(expect_int());
      } else if (key == "predfuel") {
        expect("=");
        b.pred_fuel = static_cast<int>(expect_int());
      } else {
        fail("unknown bounds key '" + key + "'");
      }
      accept(";");
      accept(",");
    }
    expect(";");
    u.bounds = b;
  }
};

inline SourceUnit parse(const std::string& text) {
  Parser p(text);
  return p.parse_unit();
}

inline CommandPtr parse_command_text(const std::string& text) {
  Parser p(text);
  return p.parse_command_only();
}
inline BiprogramPtr parse_biprogram_text(const std::string& text) {
  Parser p(text);
  return p.parse_biprogram_only();
}
inline FormulaPtr parse_formula_text(const std::string& text) {
  Parser p(text);
  return p.parse_formula_only();
}
inline RelFormulaPtr parse_rel_formula_text(const std::string& text) {
  Parser p(text);
  return p.parse_rel_formula_only();
}
inline ExprPtr parse_expr_text(const std::string& text) {
  Parser p(text);
  return p.parse_expr_only();
}
inline Effect parse_effect_text(const std::string& text) {
  Parser p(text);
  return p.parse_effect_only();
}

}  // namespace regal
