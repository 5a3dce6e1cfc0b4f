#pragma once

// Core syntax: types, expressions, formulas, relation formulas, effects,
// commands, biprograms, specs and hypothesis contexts.
//
// All AST values are immutable after construction and shared via
// shared_ptr<const T>; they are safe to share across threads.

#include <cassert>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace regal {

using Ident = std::string;

// ---------------------------------------------------------------------------
// Types

struct Type {
  enum class K { Int, Bool, Rgn, Class, IntList, Partition, Meth };
  K k = K::Int;
  Ident cls;  // class name when k == Class

  static Type intt() { return {K::Int, {}}; }
  static Type boolt() { return {K::Bool, {}}; }
  static Type rgn() { return {K::Rgn, {}}; }
  static Type cls_t(Ident c) { return {K::Class, std::move(c)}; }
  static Type intlist() { return {K::IntList, {}}; }
  static Type partition() { return {K::Partition, {}}; }

  bool is_class() const { return k == K::Class; }
  bool is_math() const { return k == K::IntList || k == K::Partition; }
  bool operator==(const Type& o) const { return k == o.k && cls == o.cls; }
  bool operator!=(const Type& o) const { return !(*this == o); }
  bool operator<(const Type& o) const {
    return k != o.k ? k < o.k : cls < o.cls;
  }
};

// ---------------------------------------------------------------------------
// Expressions.  One node type covers program expressions E (heap independent)
// and region expressions G; well-formedness of each use site is checked
// during resolution.

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class UnOp { Neg, Not };
enum class BinOp {
  Add, Sub, Mul,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or,
  Union, Inter, Diff,   // region operators
  In, Subset            // region membership / inclusion (bool results)
};

struct Expr {
  enum class K {
    Var, IntLit, BoolLit, Null, EmptyRgn,
    Sing,       // {E}
    Image,      // G`f        (field = name)
    Restrict,   // G/K        (name = class)
    Un, Bin,
    Nil, Cons, Tail  // builtin int-list constructors
  };
  K k = K::Var;
  Ident name;        // Var; Image field; Restrict class
  long long num = 0; // IntLit
  bool bval = false; // BoolLit
  UnOp uop{};
  BinOp bop{};
  ExprPtr a, b;

  mutable Type type;  // filled in by the resolver
};

ExprPtr mk_var(Ident x);
inline ExprPtr mk_expr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
inline ExprPtr mk_var(Ident x) {
  Expr e; e.k = Expr::K::Var; e.name = std::move(x);
  return mk_expr(std::move(e));
}
inline ExprPtr mk_int(long long n) {
  Expr e; e.k = Expr::K::IntLit; e.num = n; return mk_expr(std::move(e));
}
inline ExprPtr mk_bool(bool b) {
  Expr e; e.k = Expr::K::BoolLit; e.bval = b; return mk_expr(std::move(e));
}
inline ExprPtr mk_null() { Expr e; e.k = Expr::K::Null; return mk_expr(std::move(e)); }
inline ExprPtr mk_empty_rgn() { Expr e; e.k = Expr::K::EmptyRgn; return mk_expr(std::move(e)); }
inline ExprPtr mk_sing(ExprPtr a) {
  Expr e; e.k = Expr::K::Sing; e.a = std::move(a); return mk_expr(std::move(e));
}
inline ExprPtr mk_image(ExprPtr g, Ident f) {
  Expr e; e.k = Expr::K::Image; e.a = std::move(g); e.name = std::move(f);
  return mk_expr(std::move(e));
}
inline ExprPtr mk_restrict(ExprPtr g, Ident cls) {
  Expr e; e.k = Expr::K::Restrict; e.a = std::move(g); e.name = std::move(cls);
  return mk_expr(std::move(e));
}
inline ExprPtr mk_un(UnOp op, ExprPtr a) {
  Expr e; e.k = Expr::K::Un; e.uop = op; e.a = std::move(a); return mk_expr(std::move(e));
}
inline ExprPtr mk_bin(BinOp op, ExprPtr a, ExprPtr b) {
  Expr e; e.k = Expr::K::Bin; e.bop = op; e.a = std::move(a); e.b = std::move(b);
  return mk_expr(std::move(e));
}

// ---------------------------------------------------------------------------
// Left-expressions and effects.
//
//   LE ::= x | G`f          eff ::= rd LE | wr LE | eff,eff | (empty)

struct LeftExpr {
  bool is_var = true;
  Ident var;    // when is_var
  ExprPtr rgn;  // when !is_var: region G of G`f
  Ident field;

  static LeftExpr mk_var(Ident x) { LeftExpr l; l.is_var = true; l.var = std::move(x); return l; }
  static LeftExpr mk_image(ExprPtr g, Ident f) {
    LeftExpr l; l.is_var = false; l.rgn = std::move(g); l.field = std::move(f); return l;
  }
};

struct EffAtom {
  bool is_read = true;
  LeftExpr le;
};

using Effect = std::vector<EffAtom>;

inline EffAtom rd_var(Ident x) { return {true, LeftExpr::mk_var(std::move(x))}; }
inline EffAtom wr_var(Ident x) { return {false, LeftExpr::mk_var(std::move(x))}; }
inline EffAtom rd_image(ExprPtr g, Ident f) { return {true, LeftExpr::mk_image(std::move(g), std::move(f))}; }
inline EffAtom wr_image(ExprPtr g, Ident f) { return {false, LeftExpr::mk_image(std::move(g), std::move(f))}; }

// ---------------------------------------------------------------------------
// Unary formulas.

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class K {
    Atom,      // boolean expression
    PointsTo,  // x.f = F   (x non-null and field value equals F)
    Subset,    // G subseteq G'
    TypeTest,  // Type(G, K...)
    Eq,        // F = F' at any type (used for snapshot equations)
    Prim,      // R(F...)   primitive predicate from the signature
    Not, And, Or, Imply,
    Forall, Exists
  };
  K k = K::Atom;
  ExprPtr e;                     // Atom; PointsTo rhs via e; Subset lhs; Eq lhs
  ExprPtr e2;                    // Subset rhs; Eq rhs
  Ident var;                     // PointsTo x; quantifier variable
  Ident field;                   // PointsTo f
  std::vector<Ident> classes;    // TypeTest
  Ident prim;                    // Prim name
  std::vector<ExprPtr> args;     // Prim args; TypeTest region via e
  Type qtype;                    // quantifier type
  FormulaPtr l, r;               // children
};

inline FormulaPtr mk_formula(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
inline FormulaPtr f_atom(ExprPtr e) {
  Formula f; f.k = Formula::K::Atom; f.e = std::move(e); return mk_formula(std::move(f));
}
inline FormulaPtr f_true() { return f_atom(mk_bool(true)); }
inline FormulaPtr f_false() { return f_atom(mk_bool(false)); }
inline FormulaPtr f_points_to(Ident x, Ident f, ExprPtr rhs) {
  Formula ff; ff.k = Formula::K::PointsTo; ff.var = std::move(x); ff.field = std::move(f);
  ff.e = std::move(rhs); return mk_formula(std::move(ff));
}
inline FormulaPtr f_subset(ExprPtr g, ExprPtr h) {
  Formula f; f.k = Formula::K::Subset; f.e = std::move(g); f.e2 = std::move(h);
  return mk_formula(std::move(f));
}
inline FormulaPtr f_type_test(ExprPtr g, std::vector<Ident> ks) {
  Formula f; f.k = Formula::K::TypeTest; f.e = std::move(g); f.classes = std::move(ks);
  return mk_formula(std::move(f));
}
inline FormulaPtr f_eq(ExprPtr a, ExprPtr b) {
  Formula f; f.k = Formula::K::Eq; f.e = std::move(a); f.e2 = std::move(b);
  return mk_formula(std::move(f));
}
inline FormulaPtr f_prim(Ident name, std::vector<ExprPtr> args) {
  Formula f; f.k = Formula::K::Prim; f.prim = std::move(name); f.args = std::move(args);
  return mk_formula(std::move(f));
}
inline FormulaPtr f_not(FormulaPtr p) {
  Formula f; f.k = Formula::K::Not; f.l = std::move(p); return mk_formula(std::move(f));
}
inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  Formula f; f.k = Formula::K::And; f.l = std::move(a); f.r = std::move(b);
  return mk_formula(std::move(f));
}
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  Formula f; f.k = Formula::K::Or; f.l = std::move(a); f.r = std::move(b);
  return mk_formula(std::move(f));
}
inline FormulaPtr f_imply(FormulaPtr a, FormulaPtr b) {
  Formula f; f.k = Formula::K::Imply; f.l = std::move(a); f.r = std::move(b);
  return mk_formula(std::move(f));
}
inline FormulaPtr f_forall(Ident x, Type t, FormulaPtr body) {
  Formula f; f.k = Formula::K::Forall; f.var = std::move(x); f.qtype = std::move(t);
  f.l = std::move(body); return mk_formula(std::move(f));
}
inline FormulaPtr f_exists(Ident x, Type t, FormulaPtr body) {
  Formula f; f.k = Formula::K::Exists; f.var = std::move(x); f.qtype = std::move(t);
  f.l = std::move(body); return mk_formula(std::move(f));
}
// G # H  is sugar for  G /\ H subseteq {null}
inline FormulaPtr f_disjoint(ExprPtr g, ExprPtr h) {
  return f_subset(mk_bin(BinOp::Inter, std::move(g), std::move(h)), mk_sing(mk_null()));
}

// ---------------------------------------------------------------------------
// Relation formulas (interpreted over a pair of states and a refperm).

struct RelFormula;
using RelFormulaPtr = std::shared_ptr<const RelFormula>;

// Side tag for embedded expressions in primitive relational predicates.
enum class Side { Left, Right };

struct RelFormula {
  enum class K {
    Left, Right,   // embedded unary formula
    BiEq,          // F =:= F'   (F in left state, F' in right, mod refperm)
    Agree,         // agree LE
    Later,         // later(P): some extension of the refperm satisfies P
    PrimRel,       // R(side-tagged exprs)
    Not, And, Or, Imply,
    ForallP, ExistsP,  // forall x:T | x':T' . P
    Hole           // guard placeholder used by the weaving search only
  };
  K k = K::Left;
  FormulaPtr u;                       // Left/Right
  ExprPtr e, e2;                      // BiEq
  LeftExpr le;                        // Agree
  Ident prim;                         // PrimRel
  std::vector<std::pair<Side, ExprPtr>> rargs;  // PrimRel args
  Ident lvar, rvar;                   // quantifier vars
  Type ltype, rtype;
  RelFormulaPtr l, r;                 // children
};

inline RelFormulaPtr mk_rel(RelFormula f) { return std::make_shared<const RelFormula>(std::move(f)); }
inline RelFormulaPtr r_left(FormulaPtr p) {
  RelFormula f; f.k = RelFormula::K::Left; f.u = std::move(p); return mk_rel(std::move(f));
}
inline RelFormulaPtr r_right(FormulaPtr p) {
  RelFormula f; f.k = RelFormula::K::Right; f.u = std::move(p); return mk_rel(std::move(f));
}
inline RelFormulaPtr r_and(RelFormulaPtr a, RelFormulaPtr b) {
  RelFormula f; f.k = RelFormula::K::And; f.l = std::move(a); f.r = std::move(b);
  return mk_rel(std::move(f));
}
inline RelFormulaPtr r_or(RelFormulaPtr a, RelFormulaPtr b) {
  RelFormula f; f.k = RelFormula::K::Or; f.l = std::move(a); f.r = std::move(b);
  return mk_rel(std::move(f));
}
inline RelFormulaPtr r_imply(RelFormulaPtr a, RelFormulaPtr b) {
  RelFormula f; f.k = RelFormula::K::Imply; f.l = std::move(a); f.r = std::move(b);
  return mk_rel(std::move(f));
}
inline RelFormulaPtr r_not(RelFormulaPtr a) {
  RelFormula f; f.k = RelFormula::K::Not; f.l = std::move(a); return mk_rel(std::move(f));
}
inline RelFormulaPtr r_both(FormulaPtr p) { return r_and(r_left(p), r_right(p)); }
inline RelFormulaPtr r_bieq(ExprPtr a, ExprPtr b) {
  RelFormula f; f.k = RelFormula::K::BiEq; f.e = std::move(a); f.e2 = std::move(b);
  return mk_rel(std::move(f));
}
inline RelFormulaPtr r_agree(LeftExpr le) {
  RelFormula f; f.k = RelFormula::K::Agree; f.le = std::move(le); return mk_rel(std::move(f));
}
inline RelFormulaPtr r_later(RelFormulaPtr p) {
  RelFormula f; f.k = RelFormula::K::Later; f.l = std::move(p); return mk_rel(std::move(f));
}
inline RelFormulaPtr r_prim(Ident name, std::vector<std::pair<Side, ExprPtr>> args) {
  RelFormula f; f.k = RelFormula::K::PrimRel; f.prim = std::move(name);
  f.rargs = std::move(args); return mk_rel(std::move(f));
}
inline RelFormulaPtr r_forall(Ident x, Type t, Ident x2, Type t2, RelFormulaPtr body) {
  RelFormula f; f.k = RelFormula::K::ForallP; f.lvar = std::move(x); f.ltype = std::move(t);
  f.rvar = std::move(x2); f.rtype = std::move(t2); f.l = std::move(body);
  return mk_rel(std::move(f));
}
inline RelFormulaPtr r_exists(Ident x, Type t, Ident x2, Type t2, RelFormulaPtr body) {
  RelFormula f; f.k = RelFormula::K::ExistsP; f.lvar = std::move(x); f.ltype = std::move(t);
  f.rvar = std::move(x2); f.rtype = std::move(t2); f.l = std::move(body);
  return mk_rel(std::move(f));
}
inline RelFormulaPtr r_hole() { RelFormula f; f.k = RelFormula::K::Hole; return mk_rel(std::move(f)); }
inline RelFormulaPtr r_true() { return r_both(f_true()); }
inline RelFormulaPtr r_false() { return r_both(f_false()); }

// agreement on the read part of an effect: conjunction of agree-atoms
inline RelFormulaPtr r_agree_effect(const Effect& eff) {
  RelFormulaPtr acc;
  for (const auto& at : eff) {
    if (!at.is_read) continue;
    auto a = r_agree(at.le);
    acc = acc ? r_and(acc, a) : a;
  }
  return acc ? acc : r_true();
}

// ---------------------------------------------------------------------------
// Commands and biprograms.
//
// Every non-sequence node carries a label assigned at parse time; labels make
// structurally identical if-branches distinct, as the correctness semantics
// requires executions to follow identical control paths.

struct Command;
using CommandPtr = std::shared_ptr<const Command>;

struct Command {
  enum class K {
    Skip, Call, Assign, Alloc, Load, Store,
    Seq, If, While, VarBlock, Let,
    // runtime-only endmarkers; never in source
    ECall, EVar, ELet
  };
  K k = K::Skip;
  int label = 0;
  Ident m;            // Call/ECall/Let/ELet method name
  Ident x;            // Assign/Alloc/Load target; Store receiver; VarBlock/EVar var
  Ident y;            // Load source var; Store source var
  Ident field;        // Load/Store field
  Ident cls;          // Alloc class
  Type var_type;      // VarBlock
  ExprPtr rhs;        // Assign rhs; If/While test via rhs
  CommandPtr c1, c2;  // children: Seq l/r, If then/else, While body (c1),
                      // VarBlock body (c1), Let body (c1) and continuation (c2)
};

struct Biprogram;
using BiprogramPtr = std::shared_ptr<const Biprogram>;

struct Biprogram {
  enum class K {
    Sync,     // |_ A _|
    BiCom,    // ( C | C' )
    BiComR,   // ( C | C' )>   runtime only: right side due to take a step
    BiSeq,
    BiIf,     // if E|E' then CC else DD fi
    BiWhile,  // while E|E' . P|P' do CC od
    BiVar,    // var x:T|x':T' in CC
    BiLet     // let m = (B|B') in CC
  };
  K k = K::Sync;
  int label = 0;
  CommandPtr atom;          // Sync
  CommandPtr cl, cr;        // BiCom/BiComR sides; BiLet bodies
  ExprPtr el, er;           // BiIf/BiWhile tests
  RelFormulaPtr gl, gr;     // BiWhile alignment guards
  Ident m;                  // BiLet method
  Ident xl, xr;             // BiVar names
  Type tl, tr;              // BiVar types
  BiprogramPtr b1, b2;      // BiSeq l/r; BiIf then/else; BiWhile body; BiVar/BiLet body
};

// label supply for programmatically built nodes
int fresh_label();
inline int fresh_label() {
  static int counter = 1'000'000;  // parse-time labels stay below this
  return counter++;
}

inline CommandPtr mk_cmd(Command c) { return std::make_shared<const Command>(std::move(c)); }
inline CommandPtr c_skip() {
  Command c; c.k = Command::K::Skip; return mk_cmd(std::move(c));
}
inline CommandPtr c_call(Ident m, int label = 0) {
  Command c; c.k = Command::K::Call; c.m = std::move(m);
  c.label = label ? label : fresh_label(); return mk_cmd(std::move(c));
}
inline CommandPtr c_assign(Ident x, ExprPtr rhs, int label = 0) {
  Command c; c.k = Command::K::Assign; c.x = std::move(x); c.rhs = std::move(rhs);
  c.label = label ? label : fresh_label(); return mk_cmd(std::move(c));
}
inline CommandPtr c_alloc(Ident x, Ident cls, int label = 0) {
  Command c; c.k = Command::K::Alloc; c.x = std::move(x); c.cls = std::move(cls);
  c.label = label ? label : fresh_label(); return mk_cmd(std::move(c));
}
inline CommandPtr c_load(Ident x, Ident y, Ident f, int label = 0) {
  Command c; c.k = Command::K::Load; c.x = std::move(x); c.y = std::move(y);
  c.field = std::move(f); c.label = label ? label : fresh_label();
  return mk_cmd(std::move(c));
}
inline CommandPtr c_store(Ident x, Ident f, Ident y, int label = 0) {
  Command c; c.k = Command::K::Store; c.x = std::move(x); c.field = std::move(f);
  c.y = std::move(y); c.label = label ? label : fresh_label();
  return mk_cmd(std::move(c));
}
inline CommandPtr c_seq(CommandPtr a, CommandPtr b) {
  Command c; c.k = Command::K::Seq; c.c1 = std::move(a); c.c2 = std::move(b);
  return mk_cmd(std::move(c));
}
inline CommandPtr c_if(ExprPtr e, CommandPtr t, CommandPtr f, int label = 0) {
  Command c; c.k = Command::K::If; c.rhs = std::move(e); c.c1 = std::move(t);
  c.c2 = std::move(f); c.label = label ? label : fresh_label();
  return mk_cmd(std::move(c));
}
inline CommandPtr c_while(ExprPtr e, CommandPtr body, int label = 0) {
  Command c; c.k = Command::K::While; c.rhs = std::move(e); c.c1 = std::move(body);
  c.label = label ? label : fresh_label(); return mk_cmd(std::move(c));
}
inline CommandPtr c_var(Ident x, Type t, CommandPtr body, int label = 0) {
  Command c; c.k = Command::K::VarBlock; c.x = std::move(x); c.var_type = std::move(t);
  c.c1 = std::move(body); c.label = label ? label : fresh_label();
  return mk_cmd(std::move(c));
}
inline CommandPtr c_let(Ident m, CommandPtr body, CommandPtr cont, int label = 0) {
  Command c; c.k = Command::K::Let; c.m = std::move(m); c.c1 = std::move(body);
  c.c2 = std::move(cont); c.label = label ? label : fresh_label();
  return mk_cmd(std::move(c));
}
inline CommandPtr c_ecall(Ident m) {
  Command c; c.k = Command::K::ECall; c.m = std::move(m); return mk_cmd(std::move(c));
}
inline CommandPtr c_evar(Ident x) {
  Command c; c.k = Command::K::EVar; c.x = std::move(x); return mk_cmd(std::move(c));
}
inline CommandPtr c_elet(Ident m) {
  Command c; c.k = Command::K::ELet; c.m = std::move(m); return mk_cmd(std::move(c));
}

inline bool is_atomic(const Command& c) {
  switch (c.k) {
    case Command::K::Skip: case Command::K::Call: case Command::K::Assign:
    case Command::K::Alloc: case Command::K::Load: case Command::K::Store:
    case Command::K::ECall: case Command::K::EVar: case Command::K::ELet:
      return true;
    default:
      return false;
  }
}

inline BiprogramPtr mk_bi(Biprogram b) { return std::make_shared<const Biprogram>(std::move(b)); }
inline BiprogramPtr b_sync(CommandPtr a, int label = 0) {
  assert(is_atomic(*a));
  Biprogram b; b.k = Biprogram::K::Sync; b.atom = std::move(a);
  b.label = label ? label : fresh_label(); return mk_bi(std::move(b));
}
inline BiprogramPtr b_skip() { return b_sync(c_skip(), 1); }
inline BiprogramPtr b_com(CommandPtr l, CommandPtr r, int label = 0) {
  Biprogram b; b.k = Biprogram::K::BiCom; b.cl = std::move(l); b.cr = std::move(r);
  b.label = label ? label : fresh_label(); return mk_bi(std::move(b));
}
inline BiprogramPtr b_com_r(CommandPtr l, CommandPtr r, int label = 0) {
  Biprogram b; b.k = Biprogram::K::BiComR; b.cl = std::move(l); b.cr = std::move(r);
  b.label = label ? label : fresh_label(); return mk_bi(std::move(b));
}
inline BiprogramPtr b_seq(BiprogramPtr a, BiprogramPtr b2) {
  Biprogram b; b.k = Biprogram::K::BiSeq; b.b1 = std::move(a); b.b2 = std::move(b2);
  return mk_bi(std::move(b));
}
inline BiprogramPtr b_if(ExprPtr el, ExprPtr er, BiprogramPtr t, BiprogramPtr f, int label = 0) {
  Biprogram b; b.k = Biprogram::K::BiIf; b.el = std::move(el); b.er = std::move(er);
  b.b1 = std::move(t); b.b2 = std::move(f); b.label = label ? label : fresh_label();
  return mk_bi(std::move(b));
}
inline BiprogramPtr b_while(ExprPtr el, ExprPtr er, RelFormulaPtr gl, RelFormulaPtr gr,
                            BiprogramPtr body, int label = 0) {
  Biprogram b; b.k = Biprogram::K::BiWhile; b.el = std::move(el); b.er = std::move(er);
  b.gl = std::move(gl); b.gr = std::move(gr); b.b1 = std::move(body);
  b.label = label ? label : fresh_label(); return mk_bi(std::move(b));
}
inline BiprogramPtr b_var(Ident xl, Type tl, Ident xr, Type tr, BiprogramPtr body, int label = 0) {
  Biprogram b; b.k = Biprogram::K::BiVar; b.xl = std::move(xl); b.tl = std::move(tl);
  b.xr = std::move(xr); b.tr = std::move(tr); b.b1 = std::move(body);
  b.label = label ? label : fresh_label(); return mk_bi(std::move(b));
}
inline BiprogramPtr b_let(Ident m, CommandPtr bl, CommandPtr br, BiprogramPtr cont, int label = 0) {
  Biprogram b; b.k = Biprogram::K::BiLet; b.m = std::move(m); b.cl = std::move(bl);
  b.cr = std::move(br); b.b1 = std::move(cont); b.label = label ? label : fresh_label();
  return mk_bi(std::move(b));
}

// ---------------------------------------------------------------------------
// Specs, contexts, module table.

struct Spec {
  FormulaPtr pre, post;
  Effect frame;
};

struct RelSpec {
  RelFormulaPtr pre, post;
  Effect frame_l, frame_r;
};

// Hypothesis context: method name -> spec.
using HypContext = std::map<Ident, Spec>;

// Relational hypothesis context (Phi0, Phi1, Phi2) over the same methods.
struct RelHypContext {
  HypContext phi0, phi1;
  std::map<Ident, RelSpec> phi2;
};

// The default module; also the module of main programs.
inline const Ident kDefaultModule = "<main>";
// The allocation-set variable, present in every state.
inline const Ident kAllocVar = "alloc";
// The datagroup covering all declared fields.
inline const Ident kAnyField = "any";

struct ModuleTable {
  std::map<Ident, Ident> mdl;          // method -> module
  std::map<Ident, Effect> boundaries;  // module -> boundary (reads only)
  std::set<std::pair<Ident, Ident>> imports;  // reflexive-transitive closed

  Ident module_of(const Ident& m) const {
    auto it = mdl.find(m);
    return it == mdl.end() ? kDefaultModule : it->second;
  }
  const Effect& boundary(const Ident& mod) const {
    static const Effect empty;
    auto it = boundaries.find(mod);
    return it == boundaries.end() ? empty : it->second;
  }
  bool imports_of(const Ident& m, const Ident& n) const {  // m ⪯ n
    return m == n || imports.count({m, n}) > 0;
  }
};

// ---------------------------------------------------------------------------
// Class table and variable declarations.

struct ClassDecl {
  Ident name;
  std::vector<std::pair<Ident, Type>> fields;
};

struct ClassTable {
  std::vector<ClassDecl> classes;

  const ClassDecl* find(const Ident& name) const {
    for (auto& c : classes)
      if (c.name == name) return &c;
    return nullptr;
  }
  // field names are unique across classes, so a field determines its class
  const ClassDecl* class_of_field(const Ident& f) const {
    for (auto& c : classes)
      for (auto& [fn, ft] : c.fields)
        if (fn == f) return &c;
    return nullptr;
  }
  std::optional<Type> field_type(const Ident& f) const {
    for (auto& c : classes)
      for (auto& [fn, ft] : c.fields)
        if (fn == f) return ft;
    return std::nullopt;
  }
  std::vector<Ident> all_fields() const {
    std::vector<Ident> out;
    for (auto& c : classes)
      for (auto& [fn, ft] : c.fields) out.push_back(fn);
    return out;
  }
};

inline bool is_spec_only(const Ident& x) { return x.rfind("s_", 0) == 0; }

}  // namespace regal
