#pragma once

// Concrete-syntax printer.  This is the normative formatter: `parse . print`
// is the identity on canonical ASTs, and `regal fmt` emits exactly this
// layout.  Also provides the s-expression encoding used by `regal
// obligations`.
//
// See docs/grammar.md for the grammar.

#include <sstream>
#include <string>

#include "regal/ast.hpp"
#include "regal/syntax_ops.hpp"

namespace regal {

// precedence levels for expressions, loosest to tightest:
//   0 bool or | 1 bool and | 2 not | 3 comparisons | 4 add/union/diff
//   5 mul/inter | 6 prefix minus | 7 postfix image/restrict | 8 atoms
inline int binop_prec(BinOp op) {
  switch (op) {
    case BinOp::Or: return 0;
    case BinOp::And: return 1;
    case BinOp::Eq: case BinOp::Ne: case BinOp::Lt: case BinOp::Le:
    case BinOp::Gt: case BinOp::Ge: case BinOp::In: case BinOp::Subset:
      return 3;
    case BinOp::Add: case BinOp::Sub: case BinOp::Union: case BinOp::Diff:
      return 4;
    case BinOp::Mul: case BinOp::Inter: return 5;
  }
  return 8;
}

inline const char* binop_str(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Eq: return "=";
    case BinOp::Ne: return "<>";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "/\\";
    case BinOp::Or: return "\\/";
    case BinOp::Union: return "**";
    case BinOp::Inter: return "^";
    case BinOp::Diff: return "\\";
    case BinOp::In: return "iin";
    case BinOp::Subset: return "subseteq";
  }
  return "?";
}

inline std::string type_str(const Type& t) {
  switch (t.k) {
    case Type::K::Int: return "int";
    case Type::K::Bool: return "bool";
    case Type::K::Rgn: return "rgn";
    case Type::K::Class: return t.cls;
    case Type::K::IntList: return "intlist";
    case Type::K::Partition: return "partition";
    case Type::K::Meth: return "meth";
  }
  return "?";
}

void print_expr(std::ostream& os, const ExprPtr& e, int min_prec = 0);
inline void print_expr(std::ostream& os, const ExprPtr& e, int min_prec) {
  using K = Expr::K;
  switch (e->k) {
    case K::Var: os << e->name; return;
    case K::IntLit: os << e->num; return;
    case K::BoolLit: os << (e->bval ? "true" : "false"); return;
    case K::Null: os << "null"; return;
    case K::EmptyRgn: os << "{}"; return;
    case K::Nil: os << "nil"; return;
    case K::Sing:
      os << "{";
      print_expr(os, e->a, 0);
      os << "}";
      return;
    case K::Image:
      print_expr(os, e->a, 7);
      os << "`" << e->name;
      return;
    case K::Restrict:
      print_expr(os, e->a, 7);
      os << "/" << e->name;
      return;
    case K::Cons:
      os << "cons(";
      print_expr(os, e->a, 0);
      os << ", ";
      print_expr(os, e->b, 0);
      os << ")";
      return;
    case K::Tail:
      os << "tl(";
      print_expr(os, e->a, 0);
      os << ")";
      return;
    case K::Un:
      if (e->uop == UnOp::Not) {
        if (min_prec > 2) os << "(";
        os << "not ";
        print_expr(os, e->a, 3);
        if (min_prec > 2) os << ")";
      } else {
        os << "-";
        print_expr(os, e->a, 7);
      }
      return;
    case K::Bin: {
      int p = binop_prec(e->bop);
      bool paren = p < min_prec;
      if (paren) os << "(";
      print_expr(os, e->a, p == 3 ? p + 1 : p);  // comparisons non-associative
      os << " " << binop_str(e->bop) << " ";
      print_expr(os, e->b, p + 1);
      if (paren) os << ")";
      return;
    }
  }
}

inline std::string expr_str(const ExprPtr& e) {
  std::ostringstream os;
  print_expr(os, e);
  return os.str();
}

inline std::string lexpr_str(const LeftExpr& le) {
  if (le.is_var) return le.var;
  std::ostringstream os;
  print_expr(os, le.rgn, 7);
  os << "`" << le.field;
  return os.str();
}

inline std::string effect_str(const Effect& eff) {
  std::ostringstream os;
  bool first = true;
  for (auto& a : eff) {
    if (!first) os << ", ";
    first = false;
    os << (a.is_read ? "rd " : "wr ") << lexpr_str(a.le);
  }
  return os.str();
}

// formula precedence: 0 imply (right assoc) | 1 or | 2 and | 3 not/quant | 4 atoms
void print_formula(std::ostream& os, const FormulaPtr& f, int min_prec = 0);
inline void print_formula(std::ostream& os, const FormulaPtr& f, int min_prec) {
  using K = Formula::K;
  auto paren = [&](int p, auto body) {
    if (p < min_prec) os << "(";
    body();
    if (p < min_prec) os << ")";
  };
  switch (f->k) {
    case K::Atom:
      print_expr(os, f->e, 3);  // boolean connectives belong to the formula layer
      return;
    case K::PointsTo:
      paren(3, [&] {
        os << f->var << "." << f->field << " = ";
        print_expr(os, f->e, 4);
      });
      return;
    case K::Subset:
      paren(3, [&] {
        print_expr(os, f->e, 4);
        os << " subseteq ";
        print_expr(os, f->e2, 4);
      });
      return;
    case K::Eq:
      paren(3, [&] {
        print_expr(os, f->e, 4);
        os << " = ";
        print_expr(os, f->e2, 4);
      });
      return;
    case K::TypeTest:
      os << "Type(";
      print_expr(os, f->e, 0);
      for (auto& k : f->classes) os << " " << k;
      os << ")";
      return;
    case K::Prim: {
      os << f->prim << "(";
      bool first = true;
      for (auto& a : f->args) {
        if (!first) os << ", ";
        first = false;
        print_expr(os, a, 0);
      }
      os << ")";
      return;
    }
    case K::Not:
      paren(3, [&] {
        os << "not ";
        print_formula(os, f->l, 4);
      });
      return;
    case K::And:
      paren(2, [&] {
        print_formula(os, f->l, 2);
        os << " /\\ ";
        print_formula(os, f->r, 3);
      });
      return;
    case K::Or:
      paren(1, [&] {
        print_formula(os, f->l, 1);
        os << " \\/ ";
        print_formula(os, f->r, 2);
      });
      return;
    case K::Imply:
      paren(0, [&] {
        print_formula(os, f->l, 1);
        os << " -> ";
        print_formula(os, f->r, 0);
      });
      return;
    case K::Forall: case K::Exists:
      paren(3, [&] {
        os << (f->k == K::Forall ? "forall " : "exists ") << f->var << ": "
           << type_str(f->qtype) << ". ";
        print_formula(os, f->l, 0);
      });
      return;
  }
}

inline std::string formula_str(const FormulaPtr& f) {
  std::ostringstream os;
  print_formula(os, f);
  return os.str();
}

void print_rel_formula(std::ostream& os, const RelFormulaPtr& p, int min_prec = 0);
inline void print_rel_formula(std::ostream& os, const RelFormulaPtr& p, int min_prec) {
  using K = RelFormula::K;
  auto paren = [&](int pr, auto body) {
    if (pr < min_prec) os << "(";
    body();
    if (pr < min_prec) os << ")";
  };
  switch (p->k) {
    case K::Left:
      os << "left(";
      print_formula(os, p->u, 0);
      os << ")";
      return;
    case K::Right:
      os << "right(";
      print_formula(os, p->u, 0);
      os << ")";
      return;
    case K::Later:
      os << "later(";
      print_rel_formula(os, p->l, 0);
      os << ")";
      return;
    case K::BiEq:
      paren(3, [&] {
        print_expr(os, p->e, 4);
        os << " =:= ";
        print_expr(os, p->e2, 4);
      });
      return;
    case K::Agree:
      paren(3, [&] { os << "agree " << lexpr_str(p->le); });
      return;
    case K::PrimRel: {
      os << p->prim << "(";
      bool first = true;
      for (auto& [side, e] : p->rargs) {
        if (!first) os << ", ";
        first = false;
        os << (side == Side::Left ? "lft " : "rgt ");
        print_expr(os, e, 4);
      }
      os << ")";
      return;
    }
    case K::Not:
      paren(3, [&] {
        os << "not ";
        print_rel_formula(os, p->l, 4);
      });
      return;
    case K::And:
      paren(2, [&] {
        print_rel_formula(os, p->l, 2);
        os << " /\\ ";
        print_rel_formula(os, p->r, 3);
      });
      return;
    case K::Or:
      paren(1, [&] {
        print_rel_formula(os, p->l, 1);
        os << " \\/ ";
        print_rel_formula(os, p->r, 2);
      });
      return;
    case K::Imply:
      paren(0, [&] {
        print_rel_formula(os, p->l, 1);
        os << " -> ";
        print_rel_formula(os, p->r, 0);
      });
      return;
    case K::ForallP: case K::ExistsP:
      paren(3, [&] {
        os << (p->k == K::ForallP ? "forall " : "exists ") << p->lvar << ": "
           << type_str(p->ltype) << " | " << p->rvar << ": " << type_str(p->rtype) << ". ";
        print_rel_formula(os, p->l, 0);
      });
      return;
    case K::Hole:
      os << "_";
      return;
  }
}

inline std::string rel_formula_str(const RelFormulaPtr& p) {
  std::ostringstream os;
  print_rel_formula(os, p);
  return os.str();
}

// ---------------------------------------------------------------------------
// Commands and biprograms.

inline std::string indent_of(int n) { return std::string(static_cast<size_t>(n) * 2, ' '); }

void print_command(std::ostream& os, const CommandPtr& c, int indent = 0);
inline void print_command(std::ostream& os, const CommandPtr& c, int indent) {
  using K = Command::K;
  std::string ind = indent_of(indent);
  switch (c->k) {
    case K::Skip: os << ind << "skip"; return;
    case K::Call: os << ind << c->m << "()"; return;
    case K::Assign:
      os << ind << c->x << " := ";
      print_expr(os, c->rhs, 0);
      return;
    case K::Alloc: os << ind << c->x << " := new " << c->cls; return;
    case K::Load: os << ind << c->x << " := " << c->y << "." << c->field; return;
    case K::Store: os << ind << c->x << "." << c->field << " := " << c->y; return;
    case K::Seq:
      print_command(os, c->c1, indent);
      os << ";\n";
      print_command(os, c->c2, indent);
      return;
    case K::If:
      os << ind << "if ";
      print_expr(os, c->rhs, 0);
      os << " then\n";
      print_command(os, c->c1, indent + 1);
      if (!is_skip(c->c2)) {
        os << "\n" << ind << "else\n";
        print_command(os, c->c2, indent + 1);
      }
      os << "\n" << ind << "fi";
      return;
    case K::While:
      os << ind << "while ";
      print_expr(os, c->rhs, 0);
      os << " do\n";
      print_command(os, c->c1, indent + 1);
      os << "\n" << ind << "od";
      return;
    case K::VarBlock:
      os << ind << "var " << c->x << ": " << type_str(c->var_type) << " in\n";
      print_command(os, c->c1, indent + 1);
      os << "\n" << ind << "end";
      return;
    case K::Let:
      os << ind << "let " << c->m << " =\n";
      print_command(os, c->c1, indent + 1);
      os << "\n" << ind << "in\n";
      print_command(os, c->c2, indent + 1);
      os << "\n" << ind << "end";
      return;
    case K::ECall: os << ind << "ecall(" << c->m << ")"; return;
    case K::EVar: os << ind << "evar(" << c->x << ")"; return;
    case K::ELet: os << ind << "elet(" << c->m << ")"; return;
  }
}

inline std::string command_str(const CommandPtr& c) {
  std::ostringstream os;
  print_command(os, c);
  return os.str();
}

// one-line rendering, for traces and diagnostics
inline std::string command_line_str(const CommandPtr& c) {
  std::string s = command_str(c);
  std::string out;
  for (char ch : s) {
    if (ch == '\n') {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else if (ch == ' ' && !out.empty() && out.back() == ' ') {
      // collapse
    } else {
      out += ch;
    }
  }
  return out;
}

void print_biprogram(std::ostream& os, const BiprogramPtr& b, int indent = 0);
inline void print_biprogram(std::ostream& os, const BiprogramPtr& b, int indent) {
  using K = Biprogram::K;
  std::string ind = indent_of(indent);
  switch (b->k) {
    case K::Sync:
      os << ind << "|_ " << command_line_str(b->atom) << " _|";
      return;
    case K::BiCom: case K::BiComR:
      os << ind << "( " << command_line_str(b->cl)
         << (b->k == K::BiComR ? " |> " : " | ") << command_line_str(b->cr) << " )";
      return;
    case K::BiSeq:
      print_biprogram(os, b->b1, indent);
      os << ";\n";
      print_biprogram(os, b->b2, indent);
      return;
    case K::BiIf:
      os << ind << "if ";
      print_expr(os, b->el, 0);
      os << " | ";
      print_expr(os, b->er, 0);
      os << " then\n";
      print_biprogram(os, b->b1, indent + 1);
      if (!is_bi_skip(b->b2)) {
        os << "\n" << ind << "else\n";
        print_biprogram(os, b->b2, indent + 1);
      }
      os << "\n" << ind << "fi";
      return;
    case K::BiWhile:
      os << ind << "while ";
      print_expr(os, b->el, 0);
      os << " | ";
      print_expr(os, b->er, 0);
      os << " . ";
      print_rel_formula(os, b->gl, 4);
      os << " | ";
      print_rel_formula(os, b->gr, 4);
      os << " do\n";
      print_biprogram(os, b->b1, indent + 1);
      os << "\n" << ind << "od";
      return;
    case K::BiVar:
      os << ind << "var " << b->xl << ": " << type_str(b->tl) << " | " << b->xr << ": "
         << type_str(b->tr) << " in\n";
      print_biprogram(os, b->b1, indent + 1);
      os << "\n" << ind << "end";
      return;
    case K::BiLet:
      os << ind << "let " << b->m << " = (\n";
      print_command(os, b->cl, indent + 1);
      os << "\n" << ind << "|\n";
      print_command(os, b->cr, indent + 1);
      os << "\n" << ind << ") in\n";
      print_biprogram(os, b->b1, indent + 1);
      os << "\n" << ind << "end";
      return;
  }
}

inline std::string biprogram_str(const BiprogramPtr& b) {
  std::ostringstream os;
  print_biprogram(os, b);
  return os.str();
}

inline std::string biprogram_line_str(const BiprogramPtr& b) {
  std::string s = biprogram_str(b);
  std::string out;
  for (char ch : s) {
    if (ch == '\n') {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else if (ch == ' ' && !out.empty() && out.back() == ' ') {
    } else {
      out += ch;
    }
  }
  return out;
}

inline std::string spec_str(const Spec& s) {
  std::ostringstream os;
  os << "requires { " << formula_str(s.pre) << " } ensures { " << formula_str(s.post)
     << " } [" << effect_str(s.frame) << "]";
  return os.str();
}

inline std::string rel_spec_str(const RelSpec& s) {
  std::ostringstream os;
  os << "requires { " << rel_formula_str(s.pre) << " } ensures { "
     << rel_formula_str(s.post) << " } [" << effect_str(s.frame_l) << " | "
     << effect_str(s.frame_r) << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// S-expression encodings (for `regal obligations`).

void sexp_expr(std::ostream& os, const ExprPtr& e);
inline void sexp_expr(std::ostream& os, const ExprPtr& e) {
  using K = Expr::K;
  switch (e->k) {
    case K::Var: os << e->name; return;
    case K::IntLit: os << e->num; return;
    case K::BoolLit: os << (e->bval ? "true" : "false"); return;
    case K::Null: os << "null"; return;
    case K::EmptyRgn: os << "(rgn-empty)"; return;
    case K::Nil: os << "nil"; return;
    case K::Sing: os << "(sing "; sexp_expr(os, e->a); os << ")"; return;
    case K::Image: os << "(image "; sexp_expr(os, e->a); os << " " << e->name << ")"; return;
    case K::Restrict: os << "(restrict "; sexp_expr(os, e->a); os << " " << e->name << ")"; return;
    case K::Cons: os << "(cons "; sexp_expr(os, e->a); os << " "; sexp_expr(os, e->b); os << ")"; return;
    case K::Tail: os << "(tl "; sexp_expr(os, e->a); os << ")"; return;
    case K::Un:
      os << (e->uop == UnOp::Neg ? "(neg " : "(not ");
      sexp_expr(os, e->a);
      os << ")";
      return;
    case K::Bin: {
      const char* op = "?";
      switch (e->bop) {
        case BinOp::Add: op = "+"; break;
        case BinOp::Sub: op = "-"; break;
        case BinOp::Mul: op = "*"; break;
        case BinOp::Eq: op = "="; break;
        case BinOp::Ne: op = "distinct"; break;
        case BinOp::Lt: op = "<"; break;
        case BinOp::Le: op = "<="; break;
        case BinOp::Gt: op = ">"; break;
        case BinOp::Ge: op = ">="; break;
        case BinOp::And: op = "and"; break;
        case BinOp::Or: op = "or"; break;
        case BinOp::Union: op = "rgn-union"; break;
        case BinOp::Inter: op = "rgn-inter"; break;
        case BinOp::Diff: op = "rgn-diff"; break;
        case BinOp::In: op = "rgn-member"; break;
        case BinOp::Subset: op = "rgn-subset"; break;
      }
      os << "(" << op << " ";
      sexp_expr(os, e->a);
      os << " ";
      sexp_expr(os, e->b);
      os << ")";
      return;
    }
  }
}

void sexp_formula(std::ostream& os, const FormulaPtr& f);
inline void sexp_formula(std::ostream& os, const FormulaPtr& f) {
  using K = Formula::K;
  switch (f->k) {
    case K::Atom: sexp_expr(os, f->e); return;
    case K::PointsTo:
      os << "(points-to " << f->var << " " << f->field << " ";
      sexp_expr(os, f->e);
      os << ")";
      return;
    case K::Subset:
      os << "(rgn-subset ";
      sexp_expr(os, f->e);
      os << " ";
      sexp_expr(os, f->e2);
      os << ")";
      return;
    case K::Eq:
      os << "(= ";
      sexp_expr(os, f->e);
      os << " ";
      sexp_expr(os, f->e2);
      os << ")";
      return;
    case K::TypeTest: {
      os << "(has-type ";
      sexp_expr(os, f->e);
      for (auto& k : f->classes) os << " " << k;
      os << ")";
      return;
    }
    case K::Prim: {
      os << "(" << f->prim;
      for (auto& a : f->args) {
        os << " ";
        sexp_expr(os, a);
      }
      os << ")";
      return;
    }
    case K::Not: os << "(not "; sexp_formula(os, f->l); os << ")"; return;
    case K::And: os << "(and "; sexp_formula(os, f->l); os << " "; sexp_formula(os, f->r); os << ")"; return;
    case K::Or: os << "(or "; sexp_formula(os, f->l); os << " "; sexp_formula(os, f->r); os << ")"; return;
    case K::Imply: os << "(=> "; sexp_formula(os, f->l); os << " "; sexp_formula(os, f->r); os << ")"; return;
    case K::Forall: case K::Exists:
      os << (f->k == K::Forall ? "(forall ((" : "(exists ((") << f->var << " "
         << type_str(f->qtype) << ")) ";
      sexp_formula(os, f->l);
      os << ")";
      return;
  }
}

void sexp_rel_formula(std::ostream& os, const RelFormulaPtr& p);
inline void sexp_rel_formula(std::ostream& os, const RelFormulaPtr& p) {
  using K = RelFormula::K;
  switch (p->k) {
    case K::Left: os << "(left "; sexp_formula(os, p->u); os << ")"; return;
    case K::Right: os << "(right "; sexp_formula(os, p->u); os << ")"; return;
    case K::BiEq:
      os << "(bi-eq ";
      sexp_expr(os, p->e);
      os << " ";
      sexp_expr(os, p->e2);
      os << ")";
      return;
    case K::Agree: {
      os << "(agree ";
      if (p->le.is_var) os << p->le.var;
      else { os << "(image "; sexp_expr(os, p->le.rgn); os << " " << p->le.field << ")"; }
      os << ")";
      return;
    }
    case K::Later: os << "(later "; sexp_rel_formula(os, p->l); os << ")"; return;
    case K::PrimRel: {
      os << "(" << p->prim;
      for (auto& [side, e] : p->rargs) {
        os << (side == Side::Left ? " (lft " : " (rgt ");
        sexp_expr(os, e);
        os << ")";
      }
      os << ")";
      return;
    }
    case K::Not: os << "(not "; sexp_rel_formula(os, p->l); os << ")"; return;
    case K::And: os << "(and "; sexp_rel_formula(os, p->l); os << " "; sexp_rel_formula(os, p->r); os << ")"; return;
    case K::Or: os << "(or "; sexp_rel_formula(os, p->l); os << " "; sexp_rel_formula(os, p->r); os << ")"; return;
    case K::Imply: os << "(=> "; sexp_rel_formula(os, p->l); os << " "; sexp_rel_formula(os, p->r); os << ")"; return;
    case K::ForallP: case K::ExistsP:
      os << (p->k == K::ForallP ? "(forall2 ((" : "(exists2 ((") << p->lvar << " "
         << type_str(p->ltype) << ") (" << p->rvar << " " << type_str(p->rtype) << ")) ";
      sexp_rel_formula(os, p->l);
      os << ")";
      return;
    case K::Hole: os << "_"; return;
  }
}

inline std::string sexp_effect_str(const Effect& eff) {
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (auto& a : eff) {
    if (!first) os << " ";
    first = false;
    os << (a.is_read ? "(rd " : "(wr ");
    if (a.le.is_var) os << a.le.var;
    else { os << "(image "; sexp_expr(os, a.le.rgn); os << " " << a.le.field << ")"; }
    os << ")";
  }
  os << ")";
  return os.str();
}

inline std::string sexp_formula_str(const FormulaPtr& f) {
  std::ostringstream os;
  sexp_formula(os, f);
  return os.str();
}

inline std::string sexp_rel_formula_str(const RelFormulaPtr& p) {
  std::ostringstream os;
  sexp_rel_formula(os, p);
  return os.str();
}

}  // namespace regal
