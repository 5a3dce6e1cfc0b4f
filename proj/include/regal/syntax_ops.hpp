#pragma once

// Structural operations on the syntax: equality and hashing, the canonical
// representative of the syntactic-equivalence class (skip units removed,
// sequences right-associated), syntactic projections of biprograms and
// relation formulas, full alignment, the active (sub)command, the top module
// of a configuration command, and capture-free renaming of local variables.

#include <functional>
#include <string>
#include <vector>

#include "regal/ast.hpp"

namespace regal {

// ---------------------------------------------------------------------------
// Equality.  Commands and biprograms are compared including node labels by
// default; `mod_labels` equality ignores them (used when comparing programs
// that were parsed or constructed independently, e.g. by the weaving search).

bool expr_eq(const ExprPtr& a, const ExprPtr& b);
inline bool expr_eq(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->k != b->k) return false;
  using K = Expr::K;
  switch (a->k) {
    case K::Var: return a->name == b->name;
    case K::IntLit: return a->num == b->num;
    case K::BoolLit: return a->bval == b->bval;
    case K::Null: case K::EmptyRgn: case K::Nil: return true;
    case K::Sing: case K::Tail: return expr_eq(a->a, b->a);
    case K::Image: case K::Restrict:
      return a->name == b->name && expr_eq(a->a, b->a);
    case K::Un: return a->uop == b->uop && expr_eq(a->a, b->a);
    case K::Bin: return a->bop == b->bop && expr_eq(a->a, b->a) && expr_eq(a->b, b->b);
    case K::Cons: return expr_eq(a->a, b->a) && expr_eq(a->b, b->b);
  }
  return false;
}

inline bool lexpr_eq(const LeftExpr& a, const LeftExpr& b) {
  if (a.is_var != b.is_var) return false;
  if (a.is_var) return a.var == b.var;
  return a.field == b.field && expr_eq(a.rgn, b.rgn);
}

inline bool effect_atom_eq(const EffAtom& a, const EffAtom& b) {
  return a.is_read == b.is_read && lexpr_eq(a.le, b.le);
}

inline bool effect_contains(const Effect& e, const EffAtom& a) {
  for (auto& x : e)
    if (effect_atom_eq(x, a)) return true;
  return false;
}

// set-style append (effects are multisets quotiented to sets)
inline void effect_add(Effect& e, EffAtom a) {
  if (!effect_contains(e, a)) e.push_back(std::move(a));
}
inline Effect effect_union(const Effect& a, const Effect& b) {
  Effect out = a;
  for (auto& x : b) effect_add(out, x);
  return out;
}
inline bool effect_eq(const Effect& a, const Effect& b) {
  if (a.size() != b.size()) return false;
  for (auto& x : a)
    if (!effect_contains(b, x)) return false;
  return true;
}

bool formula_eq(const FormulaPtr& a, const FormulaPtr& b);
inline bool formula_eq(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->k != b->k) return false;
  using K = Formula::K;
  switch (a->k) {
    case K::Atom: return expr_eq(a->e, b->e);
    case K::PointsTo:
      return a->var == b->var && a->field == b->field && expr_eq(a->e, b->e);
    case K::Subset: case K::Eq:
      return expr_eq(a->e, b->e) && expr_eq(a->e2, b->e2);
    case K::TypeTest:
      return a->classes == b->classes && expr_eq(a->e, b->e);
    case K::Prim: {
      if (a->prim != b->prim || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); i++)
        if (!expr_eq(a->args[i], b->args[i])) return false;
      return true;
    }
    case K::Not: return formula_eq(a->l, b->l);
    case K::And: case K::Or: case K::Imply:
      return formula_eq(a->l, b->l) && formula_eq(a->r, b->r);
    case K::Forall: case K::Exists:
      return a->var == b->var && a->qtype == b->qtype && formula_eq(a->l, b->l);
  }
  return false;
}

bool rel_formula_eq(const RelFormulaPtr& a, const RelFormulaPtr& b);
inline bool rel_formula_eq(const RelFormulaPtr& a, const RelFormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->k != b->k) return false;
  using K = RelFormula::K;
  switch (a->k) {
    case K::Left: case K::Right: return formula_eq(a->u, b->u);
    case K::BiEq: return expr_eq(a->e, b->e) && expr_eq(a->e2, b->e2);
    case K::Agree: return lexpr_eq(a->le, b->le);
    case K::Later: case K::Not: return rel_formula_eq(a->l, b->l);
    case K::And: case K::Or: case K::Imply:
      return rel_formula_eq(a->l, b->l) && rel_formula_eq(a->r, b->r);
    case K::ForallP: case K::ExistsP:
      return a->lvar == b->lvar && a->rvar == b->rvar && a->ltype == b->ltype &&
             a->rtype == b->rtype && rel_formula_eq(a->l, b->l);
    case K::PrimRel: {
      if (a->prim != b->prim || a->rargs.size() != b->rargs.size()) return false;
      for (size_t i = 0; i < a->rargs.size(); i++)
        if (a->rargs[i].first != b->rargs[i].first ||
            !expr_eq(a->rargs[i].second, b->rargs[i].second))
          return false;
      return true;
    }
    case K::Hole: return true;
  }
  return false;
}

bool command_eq(const CommandPtr& a, const CommandPtr& b, bool mod_labels = false);
inline bool command_eq(const CommandPtr& a, const CommandPtr& b, bool mod_labels) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->k != b->k) return false;
  if (!mod_labels && a->k != Command::K::Seq && a->label != b->label) return false;
  using K = Command::K;
  switch (a->k) {
    case K::Skip: return true;
    case K::Call: case K::ECall: case K::ELet: return a->m == b->m;
    case K::Assign: return a->x == b->x && expr_eq(a->rhs, b->rhs);
    case K::Alloc: return a->x == b->x && a->cls == b->cls;
    case K::Load: return a->x == b->x && a->y == b->y && a->field == b->field;
    case K::Store: return a->x == b->x && a->field == b->field && a->y == b->y;
    case K::Seq:
      return command_eq(a->c1, b->c1, mod_labels) && command_eq(a->c2, b->c2, mod_labels);
    case K::If:
      return expr_eq(a->rhs, b->rhs) && command_eq(a->c1, b->c1, mod_labels) &&
             command_eq(a->c2, b->c2, mod_labels);
    case K::While:
      return expr_eq(a->rhs, b->rhs) && command_eq(a->c1, b->c1, mod_labels);
    case K::VarBlock:
      return a->x == b->x && a->var_type == b->var_type && command_eq(a->c1, b->c1, mod_labels);
    case K::Let:
      return a->m == b->m && command_eq(a->c1, b->c1, mod_labels) &&
             command_eq(a->c2, b->c2, mod_labels);
    case K::EVar: return a->x == b->x;
  }
  return false;
}

bool biprogram_eq(const BiprogramPtr& a, const BiprogramPtr& b, bool mod_labels = false,
                  bool holes_match = false);
inline bool biprogram_eq(const BiprogramPtr& a, const BiprogramPtr& b, bool mod_labels,
                         bool holes_match) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->k != b->k) return false;
  using K = Biprogram::K;
  auto guard_eq = [&](const RelFormulaPtr& x, const RelFormulaPtr& y) {
    if (holes_match && (x->k == RelFormula::K::Hole || y->k == RelFormula::K::Hole))
      return true;
    return rel_formula_eq(x, y);
  };
  switch (a->k) {
    case K::Sync: return command_eq(a->atom, b->atom, mod_labels);
    case K::BiCom: case K::BiComR:
      return command_eq(a->cl, b->cl, mod_labels) && command_eq(a->cr, b->cr, mod_labels);
    case K::BiSeq:
      return biprogram_eq(a->b1, b->b1, mod_labels, holes_match) &&
             biprogram_eq(a->b2, b->b2, mod_labels, holes_match);
    case K::BiIf:
      return expr_eq(a->el, b->el) && expr_eq(a->er, b->er) &&
             biprogram_eq(a->b1, b->b1, mod_labels, holes_match) &&
             biprogram_eq(a->b2, b->b2, mod_labels, holes_match);
    case K::BiWhile:
      return expr_eq(a->el, b->el) && expr_eq(a->er, b->er) && guard_eq(a->gl, b->gl) &&
             guard_eq(a->gr, b->gr) && biprogram_eq(a->b1, b->b1, mod_labels, holes_match);
    case K::BiVar:
      return a->xl == b->xl && a->xr == b->xr && a->tl == b->tl && a->tr == b->tr &&
             biprogram_eq(a->b1, b->b1, mod_labels, holes_match);
    case K::BiLet:
      return a->m == b->m && command_eq(a->cl, b->cl, mod_labels) &&
             command_eq(a->cr, b->cr, mod_labels) &&
             biprogram_eq(a->b1, b->b1, mod_labels, holes_match);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Canonicalization: unique representative of the ≡-class of Fig-3-style
// identities.  skip;C ≡ C, C;skip ≡ C, sequences right-associated;
// (skip|skip) ≡ |_skip_|, |_skip_|;CC ≡ CC, CC;|_skip_| ≡ CC.

inline bool is_skip(const CommandPtr& c) { return c && c->k == Command::K::Skip; }

inline void flatten_seq(const CommandPtr& c, std::vector<CommandPtr>& out) {
  if (c->k == Command::K::Seq) {
    flatten_seq(c->c1, out);
    flatten_seq(c->c2, out);
  } else if (!is_skip(c)) {
    out.push_back(c);
  }
}

CommandPtr canonicalize(const CommandPtr& c);
inline CommandPtr canon_node(const CommandPtr& c) {
  using K = Command::K;
  switch (c->k) {
    case K::If: {
      auto t = canonicalize(c->c1), f = canonicalize(c->c2);
      if (t == c->c1 && f == c->c2) return c;
      return c_if(c->rhs, t, f, c->label);
    }
    case K::While: {
      auto b = canonicalize(c->c1);
      return b == c->c1 ? c : c_while(c->rhs, b, c->label);
    }
    case K::VarBlock: {
      auto b = canonicalize(c->c1);
      return b == c->c1 ? c : c_var(c->x, c->var_type, b, c->label);
    }
    case K::Let: {
      auto b = canonicalize(c->c1), k = canonicalize(c->c2);
      if (b == c->c1 && k == c->c2) return c;
      return c_let(c->m, b, k, c->label);
    }
    default:
      return c;
  }
}

inline CommandPtr canonicalize(const CommandPtr& c) {
  std::vector<CommandPtr> parts;
  flatten_seq(c, parts);
  if (parts.empty()) return c_skip();
  CommandPtr acc = canon_node(parts.back());
  for (size_t i = parts.size() - 1; i-- > 0;)
    acc = c_seq(canon_node(parts[i]), acc);
  return acc;
}

inline bool is_bi_skip(const BiprogramPtr& b) {
  return b && b->k == Biprogram::K::Sync && is_skip(b->atom);
}

BiprogramPtr canonicalize_bi(const BiprogramPtr& b);
inline void flatten_bi_seq(const BiprogramPtr& b, std::vector<BiprogramPtr>& out) {
  if (b->k == Biprogram::K::BiSeq) {
    flatten_bi_seq(b->b1, out);
    flatten_bi_seq(b->b2, out);
  } else {
    auto cb = canonicalize_bi(b);
    if (!is_bi_skip(cb)) out.push_back(cb);
  }
}

inline BiprogramPtr canonicalize_bi(const BiprogramPtr& b) {
  using K = Biprogram::K;
  switch (b->k) {
    case K::Sync:
      return b;
    case K::BiCom: case K::BiComR: {
      auto l = canonicalize(b->cl), r = canonicalize(b->cr);
      if (is_skip(l) && is_skip(r)) return b_skip();
      if (l == b->cl && r == b->cr) return b;
      return b->k == K::BiCom ? b_com(l, r, b->label) : b_com_r(l, r, b->label);
    }
    case K::BiSeq: {
      std::vector<BiprogramPtr> parts;
      flatten_bi_seq(b, parts);
      if (parts.empty()) return b_skip();
      BiprogramPtr acc = parts.back();
      for (size_t i = parts.size() - 1; i-- > 0;) acc = b_seq(parts[i], acc);
      return acc;
    }
    case K::BiIf: {
      auto t = canonicalize_bi(b->b1), f = canonicalize_bi(b->b2);
      if (t == b->b1 && f == b->b2) return b;
      return b_if(b->el, b->er, t, f, b->label);
    }
    case K::BiWhile: {
      auto body = canonicalize_bi(b->b1);
      if (body == b->b1) return b;
      return b_while(b->el, b->er, b->gl, b->gr, body, b->label);
    }
    case K::BiVar: {
      auto body = canonicalize_bi(b->b1);
      if (body == b->b1) return b;
      return b_var(b->xl, b->tl, b->xr, b->tr, body, b->label);
    }
    case K::BiLet: {
      auto bl = canonicalize(b->cl), br = canonicalize(b->cr);
      auto body = canonicalize_bi(b->b1);
      if (bl == b->cl && br == b->cr && body == b->b1) return b;
      return b_let(b->m, bl, br, body, b->label);
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Syntactic projections of biprograms, relation formulas, and relational
// specs.  Results are canonical.

CommandPtr project(const BiprogramPtr& b, Side side);
FormulaPtr project_formula(const RelFormulaPtr& p, Side side);

inline CommandPtr project_raw(const BiprogramPtr& b, Side side) {
  using K = Biprogram::K;
  bool left = side == Side::Left;
  switch (b->k) {
    case K::Sync: return b->atom;
    case K::BiCom: case K::BiComR: return left ? b->cl : b->cr;
    case K::BiSeq: return c_seq(project_raw(b->b1, side), project_raw(b->b2, side));
    case K::BiIf:
      return c_if(left ? b->el : b->er, project_raw(b->b1, side), project_raw(b->b2, side),
                  b->label);
    case K::BiWhile:
      return c_while(left ? b->el : b->er, project_raw(b->b1, side), b->label);
    case K::BiVar:
      return c_var(left ? b->xl : b->xr, left ? b->tl : b->tr, project_raw(b->b1, side),
                   b->label);
    case K::BiLet:
      return c_let(b->m, left ? b->cl : b->cr, project_raw(b->b1, side), b->label);
  }
  return c_skip();
}

inline CommandPtr project(const BiprogramPtr& b, Side side) {
  return canonicalize(project_raw(b, side));
}

inline FormulaPtr project_formula(const RelFormulaPtr& p, Side side) {
  using K = RelFormula::K;
  bool left = side == Side::Left;
  switch (p->k) {
    case K::Left: return left ? p->u : f_true();
    case K::Right: return left ? f_true() : p->u;
    case K::Later: return project_formula(p->l, side);
    case K::BiEq: {
      auto e = left ? p->e : p->e2;
      return f_eq(e, e);
    }
    case K::Agree: {
      // projects to the reflexive equality of the left-expression's r-value
      ExprPtr e = p->le.is_var ? mk_var(p->le.var) : mk_image(p->le.rgn, p->le.field);
      return f_eq(e, e);
    }
    case K::ForallP:
      return f_forall(left ? p->lvar : p->rvar, left ? p->ltype : p->rtype,
                      project_formula(p->l, side));
    case K::ExistsP:
      return f_exists(left ? p->lvar : p->rvar, left ? p->ltype : p->rtype,
                      project_formula(p->l, side));
    case K::PrimRel: return f_true();
    case K::Not: return f_not(project_formula(p->l, side));
    case K::And: return f_and(project_formula(p->l, side), project_formula(p->r, side));
    case K::Or: return f_or(project_formula(p->l, side), project_formula(p->r, side));
    case K::Imply: return f_imply(project_formula(p->l, side), project_formula(p->r, side));
    case K::Hole: return f_true();
  }
  return f_true();
}

inline Spec project_spec(const RelSpec& rs, Side side) {
  Spec s;
  s.pre = project_formula(rs.pre, side);
  s.post = project_formula(rs.post, side);
  s.frame = side == Side::Left ? rs.frame_l : rs.frame_r;
  return s;
}

// ---------------------------------------------------------------------------
// Full alignment |_ C _| (the maximal weaving of (C|C)).

BiprogramPtr full_align(const CommandPtr& c);
inline BiprogramPtr full_align(const CommandPtr& c) {
  using K = Command::K;
  switch (c->k) {
    case K::Seq: return canonicalize_bi(b_seq(full_align(c->c1), full_align(c->c2)));
    case K::If:
      return b_if(c->rhs, c->rhs, full_align(c->c1), full_align(c->c2), c->label);
    case K::While:
      return b_while(c->rhs, c->rhs, r_false(), r_false(), full_align(c->c1), c->label);
    case K::VarBlock:
      return b_var(c->x, c->var_type, c->x, c->var_type, full_align(c->c1), c->label);
    case K::Let:
      return b_let(c->m, c->c1, c->c1, full_align(c->c2), c->label);
    default:
      return b_sync(c, c->label);
  }
}

// ---------------------------------------------------------------------------
// Active command / biprogram: the leftmost non-sequence constituent.

inline CommandPtr active(const CommandPtr& c) {
  return c->k == Command::K::Seq ? active(c->c1) : c;
}
inline BiprogramPtr active_bi(const BiprogramPtr& b) {
  return b->k == Biprogram::K::BiSeq ? active_bi(b->b1) : b;
}

// Residue after the active command: c ≡ active(c); rest.
inline CommandPtr after_active(const CommandPtr& c) {
  if (c->k != Command::K::Seq) return c_skip();
  auto rest = after_active(c->c1);
  return is_skip(rest) ? c->c2 : c_seq(rest, c->c2);
}
inline BiprogramPtr after_active_bi(const BiprogramPtr& b) {
  if (b->k != Biprogram::K::BiSeq) return b_skip();
  auto rest = after_active_bi(b->b1);
  return is_bi_skip(rest) ? b->b2 : b_seq(rest, b->b2);
}

// ---------------------------------------------------------------------------
// Top module of a configuration command: the module of the leftmost
// environment-call marker, else the current module.

inline bool leftmost_ecall(const CommandPtr& c, Ident& out) {
  if (c->k == Command::K::ECall) { out = c->m; return true; }
  if (c->k == Command::K::Seq)
    return leftmost_ecall(c->c1, out) || leftmost_ecall(c->c2, out);
  // endmarkers occur only at sequence spine positions, but `let` continuations
  // may hold further ecalls after an Endlet; those are not leftmost anyway
  return false;
}

inline Ident top_module(const CommandPtr& c, const Ident& current, const ModuleTable& mt) {
  Ident m;
  if (leftmost_ecall(c, m)) return mt.module_of(m);
  return current;
}

// ---------------------------------------------------------------------------
// Substitution of variables (used for local-variable renaming in the
// transition semantics; names are never re-declared, so this is plain).

ExprPtr subst_expr(const ExprPtr& e, const Ident& x, const Ident& y);
inline ExprPtr subst_expr(const ExprPtr& e, const Ident& x, const Ident& y) {
  if (!e) return e;
  using K = Expr::K;
  switch (e->k) {
    case K::Var:
      return e->name == x ? mk_var(y) : e;
    case K::IntLit: case K::BoolLit: case K::Null: case K::EmptyRgn: case K::Nil:
      return e;
    default: {
      Expr out = *e;
      out.a = subst_expr(e->a, x, y);
      out.b = subst_expr(e->b, x, y);
      return mk_expr(std::move(out));
    }
  }
}

FormulaPtr subst_formula(const FormulaPtr& f, const Ident& x, const Ident& y);
inline FormulaPtr subst_formula(const FormulaPtr& f, const Ident& x, const Ident& y) {
  if (!f) return f;
  Formula out = *f;
  if ((f->k == Formula::K::Forall || f->k == Formula::K::Exists) && f->var == x)
    return f;  // shadowed
  if (f->k == Formula::K::PointsTo && f->var == x) out.var = y;
  out.e = subst_expr(f->e, x, y);
  out.e2 = subst_expr(f->e2, x, y);
  for (auto& a : out.args) a = subst_expr(a, x, y);
  out.l = subst_formula(f->l, x, y);
  out.r = subst_formula(f->r, x, y);
  return mk_formula(std::move(out));
}

CommandPtr subst_command(const CommandPtr& c, const Ident& x, const Ident& y);
inline CommandPtr subst_command(const CommandPtr& c, const Ident& x, const Ident& y) {
  if (!c) return c;
  Command out = *c;
  auto ren = [&](const Ident& v) { return v == x ? y : v; };
  out.x = ren(c->x);
  out.y = ren(c->y);
  out.rhs = subst_expr(c->rhs, x, y);
  out.c1 = subst_command(c->c1, x, y);
  out.c2 = subst_command(c->c2, x, y);
  return mk_cmd(std::move(out));
}

// side-aware substitution in relation formulas: xl -> yl in left positions,
// xr -> yr in right positions (agreement atoms cannot occur where this is
// used: alignment guards are agreement-free)
RelFormulaPtr subst_rel(const RelFormulaPtr& p, const Ident& xl, const Ident& yl,
                        const Ident& xr, const Ident& yr);
inline RelFormulaPtr subst_rel(const RelFormulaPtr& p, const Ident& xl, const Ident& yl,
                               const Ident& xr, const Ident& yr) {
  if (!p) return p;
  using K = RelFormula::K;
  RelFormula out = *p;
  switch (p->k) {
    case K::Left: out.u = subst_formula(p->u, xl, yl); break;
    case K::Right: out.u = subst_formula(p->u, xr, yr); break;
    case K::BiEq:
      out.e = subst_expr(p->e, xl, yl);
      out.e2 = subst_expr(p->e2, xr, yr);
      break;
    case K::Agree:
      if (out.le.is_var) {
        // same name on both sides; alignment guards exclude agreements, so
        // this only happens in specs where bound sides share names
        if (out.le.var == xl && xl == xr && yl == yr) out.le.var = yl;
      } else {
        if (xl == xr && yl == yr) out.le.rgn = subst_expr(out.le.rgn, xl, yl);
      }
      break;
    case K::PrimRel:
      for (auto& [side, e] : out.rargs)
        e = side == Side::Left ? subst_expr(e, xl, yl) : subst_expr(e, xr, yr);
      break;
    case K::ForallP: case K::ExistsP:
      if (p->lvar == xl && p->rvar == xr) return p;
      break;
    default:
      break;
  }
  out.l = subst_rel(p->l, xl, yl, xr, yr);
  out.r = subst_rel(p->r, xl, yl, xr, yr);
  return mk_rel(std::move(out));
}

BiprogramPtr subst_biprogram(const BiprogramPtr& b, const Ident& xl, const Ident& yl,
                             const Ident& xr, const Ident& yr);
inline BiprogramPtr subst_biprogram(const BiprogramPtr& b, const Ident& xl, const Ident& yl,
                                    const Ident& xr, const Ident& yr) {
  if (!b) return b;
  Biprogram out = *b;
  if (b->atom) {
    // sync atoms act on both sides with the shared name
    auto a = subst_command(b->atom, xl, yl);
    out.atom = (xl == xr && yl == yr) ? a : subst_command(a, xr, yr);
  }
  if (b->cl) out.cl = subst_command(b->cl, xl, yl);
  if (b->cr) out.cr = subst_command(b->cr, xr, yr);
  if (b->el) out.el = subst_expr(b->el, xl, yl);
  if (b->er) out.er = subst_expr(b->er, xr, yr);
  if (b->gl) out.gl = subst_rel(b->gl, xl, yl, xr, yr);
  if (b->gr) out.gr = subst_rel(b->gr, xl, yl, xr, yr);
  out.b1 = subst_biprogram(b->b1, xl, yl, xr, yr);
  out.b2 = subst_biprogram(b->b2, xl, yl, xr, yr);
  return mk_bi(std::move(out));
}

// ---------------------------------------------------------------------------
// Hashing (structure modulo labels; good enough for memo tables).

inline void hash_mix(size_t& h, size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
}

size_t expr_hash(const ExprPtr& e);
inline size_t expr_hash(const ExprPtr& e) {
  if (!e) return 0;
  size_t h = static_cast<size_t>(e->k) * 31;
  hash_mix(h, std::hash<std::string>{}(e->name));
  hash_mix(h, std::hash<long long>{}(e->num));
  hash_mix(h, e->bval);
  hash_mix(h, static_cast<size_t>(e->k == Expr::K::Bin ? (int)e->bop : 0));
  hash_mix(h, expr_hash(e->a));
  hash_mix(h, expr_hash(e->b));
  return h;
}

size_t command_hash(const CommandPtr& c);
inline size_t command_hash(const CommandPtr& c) {
  if (!c) return 0;
  size_t h = static_cast<size_t>(c->k) * 131;
  hash_mix(h, std::hash<std::string>{}(c->m));
  hash_mix(h, std::hash<std::string>{}(c->x));
  hash_mix(h, std::hash<std::string>{}(c->y));
  hash_mix(h, std::hash<std::string>{}(c->field));
  hash_mix(h, std::hash<std::string>{}(c->cls));
  hash_mix(h, expr_hash(c->rhs));
  hash_mix(h, command_hash(c->c1));
  hash_mix(h, command_hash(c->c2));
  return h;
}

size_t biprogram_hash(const BiprogramPtr& b);
inline size_t biprogram_hash(const BiprogramPtr& b) {
  if (!b) return 0;
  size_t h = static_cast<size_t>(b->k) * 257;
  hash_mix(h, command_hash(b->atom));
  hash_mix(h, command_hash(b->cl));
  hash_mix(h, command_hash(b->cr));
  hash_mix(h, expr_hash(b->el));
  hash_mix(h, expr_hash(b->er));
  hash_mix(h, std::hash<std::string>{}(b->m));
  hash_mix(h, std::hash<std::string>{}(b->xl));
  hash_mix(h, std::hash<std::string>{}(b->xr));
  hash_mix(h, biprogram_hash(b->b1));
  hash_mix(h, biprogram_hash(b->b2));
  return h;
}

// ---------------------------------------------------------------------------
// Misc syntax queries.

inline bool command_contains(const CommandPtr& c, Command::K kind) {
  if (!c) return false;
  if (c->k == kind) return true;
  return command_contains(c->c1, kind) || command_contains(c->c2, kind);
}

inline void collect_calls(const CommandPtr& c, std::set<Ident>& out,
                          std::set<Ident> bound = {}) {
  if (!c) return;
  if (c->k == Command::K::Call && !bound.count(c->m)) out.insert(c->m);
  if (c->k == Command::K::Let) {
    collect_calls(c->c1, out, bound);
    bound.insert(c->m);
    collect_calls(c->c2, out, bound);
    return;
  }
  collect_calls(c->c1, out, bound);
  collect_calls(c->c2, out, bound);
}

inline void collect_expr_vars(const ExprPtr& e, std::set<Ident>& out) {
  if (!e) return;
  if (e->k == Expr::K::Var) out.insert(e->name);
  collect_expr_vars(e->a, out);
  collect_expr_vars(e->b, out);
}

inline void collect_formula_vars(const FormulaPtr& f, std::set<Ident>& out) {
  if (!f) return;
  if (f->k == Formula::K::PointsTo) out.insert(f->var);
  collect_expr_vars(f->e, out);
  collect_expr_vars(f->e2, out);
  for (auto& a : f->args) collect_expr_vars(a, out);
  std::set<Ident> sub;
  collect_formula_vars(f->l, sub);
  collect_formula_vars(f->r, sub);
  if (f->k == Formula::K::Forall || f->k == Formula::K::Exists) sub.erase(f->var);
  out.insert(sub.begin(), sub.end());
}

inline void collect_lexpr_vars(const LeftExpr& le, std::set<Ident>& out) {
  if (le.is_var) out.insert(le.var);
  else collect_expr_vars(le.rgn, out);
}

inline void collect_effect_vars(const Effect& e, std::set<Ident>& out) {
  for (auto& a : e) collect_lexpr_vars(a.le, out);
}

// variables read or written by a command's code (free occurrences)
inline void collect_command_vars(const CommandPtr& c, std::set<Ident>& out) {
  if (!c) return;
  using K = Command::K;
  switch (c->k) {
    case K::Assign: out.insert(c->x); collect_expr_vars(c->rhs, out); break;
    case K::Alloc: out.insert(c->x); break;
    case K::Load: out.insert(c->x); out.insert(c->y); break;
    case K::Store: out.insert(c->x); out.insert(c->y); break;
    case K::If: case K::While: collect_expr_vars(c->rhs, out); break;
    case K::VarBlock: {
      std::set<Ident> sub;
      collect_command_vars(c->c1, sub);
      sub.erase(c->x);
      out.insert(sub.begin(), sub.end());
      return;
    }
    default: break;
  }
  collect_command_vars(c->c1, out);
  collect_command_vars(c->c2, out);
}

}  // namespace regal
