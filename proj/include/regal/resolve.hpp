#pragma once

// Name resolution, typechecking, datagroup expansion, and module-table
// construction.  Produces the resolved Program consumed by the interpreters
// and the checker, plus well-formedness diagnostics.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "regal/ast.hpp"
#include "regal/printer.hpp"
#include "regal/source_unit.hpp"
#include "regal/syntax_ops.hpp"

namespace regal {

struct Diagnostic {
  std::string clause;  // the wf clause violated
  std::string message;
  int line = 0;
};

struct MethInfo {
  Ident name;
  Ident module = kDefaultModule;
  Spec spec;                       // public invariant already conjoined
  std::optional<RelSpec> relspec;  // declared relational spec, if any
  CommandPtr body;                 // top-level methods carry their body here
};

struct ImplInfo {
  Ident name, iface;
  FormulaPtr private_inv;  // defaults to true
  std::map<Ident, CommandPtr> bodies;
};

struct BiMethInfo {
  Ident name;
  std::optional<RelSpec> relspec;
  BiprogramPtr body;
};

struct BimoduleInfo {
  Ident name, left_impl, right_impl;
  RelFormulaPtr coupling;  // defaults to true
  std::map<Ident, BiMethInfo> meths;
};

struct InterfaceInfo {
  Ident name;
  Effect boundary;  // datagroups expanded
  FormulaPtr public_inv;
  std::vector<Ident> meths;
};

struct Program {
  ClassTable classes;
  std::map<Ident, Type> globals;
  std::map<Ident, InterfaceInfo> interfaces;
  std::map<Ident, ImplInfo> impls;
  std::map<Ident, BimoduleInfo> bimodules;
  std::map<Ident, MethInfo> meths;  // interface methods and top-level methods
  std::map<Ident, BiMethInfo> bimeths;
  std::map<Ident, BiprogramPtr> bis;
  ModuleTable mt;
  std::vector<CheckDecl> checks;
  Bounds bounds;

  std::optional<Type> var_type(const Ident& x) const {
    if (x == kAllocVar) return Type::rgn();
    auto it = globals.find(x);
    if (it != globals.end()) return it->second;
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Datagroup expansion: G`any covers every declared field.

inline Effect expand_any(const Effect& eff, const ClassTable& ct) {
  Effect out;
  for (const auto& a : eff) {
    if (!a.le.is_var && a.le.field == kAnyField) {
      for (const auto& f : ct.all_fields())
        effect_add(out, {a.is_read, LeftExpr::mk_image(a.le.rgn, f)});
    } else {
      effect_add(out, a);
    }
  }
  return out;
}

inline RelFormulaPtr expand_any_rel(const RelFormulaPtr& p, const ClassTable& ct) {
  if (!p) return p;
  if (p->k == RelFormula::K::Agree && !p->le.is_var && p->le.field == kAnyField) {
    RelFormulaPtr acc;
    for (const auto& f : ct.all_fields()) {
      auto a = r_agree(LeftExpr::mk_image(p->le.rgn, f));
      acc = acc ? r_and(acc, a) : a;
    }
    return acc ? acc : r_true();
  }
  RelFormula out = *p;
  out.l = expand_any_rel(p->l, ct);
  out.r = expand_any_rel(p->r, ct);
  return mk_rel(std::move(out));
}

// ---------------------------------------------------------------------------
// Resolver.

class Resolver {
 public:
  Resolver(const SourceUnit& u, std::vector<Diagnostic>& diags) : u_(u), diags_(diags) {}

  Program run() {
    Program p;
    build_classes(p);
    build_globals(p);
    build_interfaces(p);
    build_impls(p);
    build_bimodules(p);
    build_main_meths(p);
    build_bimeths(p);
    for (const auto& b : u_.bis) {
      check_biprogram(p, b.body, b.line);
      p.bis[b.name] = canonicalize_bi(b.body);
    }
    close_imports(p);
    p.checks = u_.checks;
    if (u_.bounds) p.bounds = *u_.bounds;
    validate_checks(p);
    return p;
  }

 private:
  const SourceUnit& u_;
  std::vector<Diagnostic>& diags_;

  void err(const std::string& clause, const std::string& msg, int line = 0) {
    diags_.push_back({clause, msg, line});
  }

  // ------------------------------------------------------------------ passes

  void build_classes(Program& p) {
    std::set<Ident> fields_seen, classes_seen;
    for (const auto& c : u_.classes) {
      if (!classes_seen.insert(c.name).second)
        err("classes", "duplicate class '" + c.name + "'");
      for (auto& [f, t] : c.fields) {
        if (f == kAnyField) err("classes", "field name 'any' is reserved");
        if (!fields_seen.insert(f).second)
          err("classes", "field '" + f + "' declared in more than one class");
      }
      p.classes.classes.push_back(c);
    }
    // field types must name declared classes
    for (const auto& c : p.classes.classes)
      for (auto& [f, t] : c.fields)
        if (t.is_class() && !p.classes.find(t.cls))
          err("classes", "field '" + f + "' has unknown class type '" + t.cls + "'");
  }

  void build_globals(Program& p) {
    for (auto& [x, t] : u_.globals) {
      if (x == kAllocVar) {
        err("globals", "'alloc' is implicit and cannot be declared");
        continue;
      }
      if (is_spec_only(x)) err("globals", "global '" + x + "' uses the spec-only prefix");
      if (p.globals.count(x)) err("globals", "duplicate global '" + x + "'");
      if (t.is_class() && !p.classes.find(t.cls))
        err("globals", "global '" + x + "' has unknown class type '" + t.cls + "'");
      p.globals[x] = t;
    }
  }

  void build_interfaces(Program& p) {
    for (const auto& d : u_.interfaces) {
      InterfaceInfo info;
      info.name = d.name;
      info.boundary = expand_any(d.boundary, p.classes);
      info.public_inv = d.public_inv ? d.public_inv : f_true();
      check_boundary(p, info.boundary, d.name, d.line);
      check_formula(p, info.public_inv, {}, d.line, false);
      for (const auto& m : d.meths) {
        if (p.meths.count(m.name)) {
          err("frontend", "duplicate method '" + m.name + "'", m.line);
          continue;
        }
        MethInfo mi;
        mi.name = m.name;
        mi.module = d.name;
        mi.spec = m.spec;
        mi.spec.frame = expand_any(mi.spec.frame, p.classes);
        // a public invariant simply abbreviates a conjunct of each method's
        // pre- and postcondition
        if (d.public_inv) {
          mi.spec.pre = f_and(mi.spec.pre, d.public_inv);
          mi.spec.post = f_and(mi.spec.post, d.public_inv);
        }
        if (m.relspec) {
          RelSpec rs = *m.relspec;
          rs.frame_l = rs.frame_l.empty() ? mi.spec.frame : expand_any(rs.frame_l, p.classes);
          rs.frame_r = rs.frame_r.empty() ? mi.spec.frame : expand_any(rs.frame_r, p.classes);
          rs.pre = expand_any_rel(rs.pre, p.classes);
          rs.post = expand_any_rel(rs.post, p.classes);
          if (d.public_inv) {
            rs.pre = r_and(rs.pre, r_both(d.public_inv));
            rs.post = conjoin_post(rs.post, r_both(d.public_inv));
          }
          mi.relspec = rs;
        }
        check_spec(p, mi.spec, m.line);
        p.meths[m.name] = mi;
        p.mt.mdl[m.name] = d.name;
        info.meths.push_back(m.name);
      }
      p.mt.boundaries[d.name] = info.boundary;
      for (const auto& imp : d.imports) p.mt.imports.insert({d.name, imp});
      p.interfaces[d.name] = std::move(info);
    }
    for (const auto& imp : u_.main_imports) p.mt.imports.insert({kDefaultModule, imp});
    p.mt.boundaries[kDefaultModule] = {};
  }

  static RelFormulaPtr conjoin_post(const RelFormulaPtr& post, const RelFormulaPtr& q) {
    // standard form: conjoin under a trailing later(...) when present
    if (post->k == RelFormula::K::Later) return r_later(r_and(post->l, q));
    return r_and(post, q);
  }

  void build_impls(Program& p) {
    for (const auto& d : u_.impls) {
      if (!p.interfaces.count(d.iface)) {
        err("frontend", "module '" + d.name + "' implements unknown interface '" + d.iface + "'",
            d.line);
        continue;
      }
      ImplInfo info;
      info.name = d.name;
      info.iface = d.iface;
      info.private_inv = d.private_inv ? d.private_inv : f_true();
      check_formula(p, info.private_inv, {}, d.line, false);
      for (const auto& m : d.meths) {
        if (!p.meths.count(m.name) || p.meths[m.name].module != d.iface) {
          err("frontend", "method '" + m.name + "' is not declared by interface '" + d.iface + "'",
              m.line);
          continue;
        }
        check_body(p, m.body, m.line);
        info.bodies[m.name] = canonicalize(m.body);
      }
      for (const auto& mn : p.interfaces[d.iface].meths)
        if (!info.bodies.count(mn))
          err("frontend", "module '" + d.name + "' lacks a body for '" + mn + "'", d.line);
      p.impls[d.name] = std::move(info);
    }
  }

  void build_bimodules(Program& p) {
    for (const auto& d : u_.bimodules) {
      BimoduleInfo info;
      info.name = d.name;
      info.left_impl = d.left_impl;
      info.right_impl = d.right_impl;
      info.coupling = d.coupling ? expand_any_rel(d.coupling, p.classes) : r_true();
      check_rel_formula(p, info.coupling, {}, {}, d.line, false);
      if (!p.impls.count(d.left_impl) || !p.impls.count(d.right_impl)) {
        err("frontend", "bimodule '" + d.name + "' names unknown implementation(s)", d.line);
        continue;
      }
      if (p.impls[d.left_impl].iface != p.impls[d.right_impl].iface)
        err("Def 3.5", "bimodule '" + d.name + "' relates implementations of different interfaces",
            d.line);
      for (const auto& m : d.meths) {
        BiMethInfo bi;
        bi.name = m.name;
        bi.body = canonicalize_bi(m.body);
        check_biprogram(p, m.body, m.line);
        if (m.relspec) {
          RelSpec rs = *m.relspec;
          rs.frame_l = expand_any(rs.frame_l, p.classes);
          rs.frame_r = expand_any(rs.frame_r, p.classes);
          rs.pre = expand_any_rel(rs.pre, p.classes);
          rs.post = expand_any_rel(rs.post, p.classes);
          bi.relspec = rs;
          check_rel_spec(p, rs, m.line);
        }
        info.meths[m.name] = std::move(bi);
      }
      p.bimodules[d.name] = std::move(info);
    }
  }

  void build_main_meths(Program& p) {
    for (const auto& m : u_.main_meths) {
      if (p.meths.count(m.name)) {
        err("frontend", "duplicate method '" + m.name + "'", m.line);
        continue;
      }
      MethInfo mi;
      mi.name = m.name;
      mi.module = kDefaultModule;
      mi.spec = m.spec;
      mi.spec.frame = expand_any(mi.spec.frame, p.classes);
      mi.body = m.body ? canonicalize(m.body) : nullptr;
      if (m.body) check_body(p, m.body, m.line);
      check_spec(p, mi.spec, m.line);
      p.meths[m.name] = mi;
      p.mt.mdl[m.name] = kDefaultModule;
    }
  }

  void build_bimeths(Program& p) {
    for (const auto& m : u_.bimeths) {
      BiMethInfo bi;
      bi.name = m.name;
      bi.body = canonicalize_bi(m.body);
      check_biprogram(p, m.body, m.line);
      if (m.relspec) {
        RelSpec rs = *m.relspec;
        rs.frame_l = expand_any(rs.frame_l, p.classes);
        rs.frame_r = expand_any(rs.frame_r, p.classes);
        rs.pre = expand_any_rel(rs.pre, p.classes);
        rs.post = expand_any_rel(rs.post, p.classes);
        bi.relspec = rs;
        check_rel_spec(p, rs, m.line);
      }
      p.bimeths[m.name] = std::move(bi);
    }
  }

  // imports form a preorder: reflexive-transitive closure (cycles allowed)
  void close_imports(Program& p) {
    auto& imp = p.mt.imports;
    std::set<Ident> mods;
    mods.insert(kDefaultModule);
    for (auto& [n, i] : p.interfaces) mods.insert(n);
    for (auto& m : mods) imp.insert({m, m});
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::pair<Ident, Ident>> add;
      for (auto& [a, b] : imp)
        for (auto& [c, d] : imp)
          if (b == c && !imp.count({a, d})) add.push_back({a, d});
      for (auto& e : add) {
        imp.insert(e);
        changed = true;
      }
    }
  }

  void validate_checks(Program& p) {
    for (const auto& c : u_.checks) {
      switch (c.kind) {
        case CheckDecl::Kind::Unary:
          if (!p.meths.count(c.target))
            err("frontend", "check unary: unknown method '" + c.target + "'", c.line);
          break;
        case CheckDecl::Kind::Rel:
          if (!p.bimeths.count(c.target) && !find_bimodule_meth(p, c.target))
            err("frontend", "check rel: unknown bimethod '" + c.target + "'", c.line);
          break;
        case CheckDecl::Kind::Link:
          if (!p.bimodules.count(c.target))
            err("frontend", "check link: unknown bimodule '" + c.target + "'", c.line);
          if (!p.meths.count(c.client))
            err("frontend", "check link: unknown client '" + c.client + "'", c.line);
          break;
        case CheckDecl::Kind::Weave:
          if (!p.bis.count(c.target) && !p.bimeths.count(c.target))
            err("frontend", "check weave: unknown biprogram '" + c.target + "'", c.line);
          if (!p.bis.count(c.target2) && !p.bimeths.count(c.target2))
            err("frontend", "check weave: unknown biprogram '" + c.target2 + "'", c.line);
          break;
      }
      for (auto& i : c.using_impls)
        if (!p.impls.count(i))
          err("frontend", "check: unknown implementation '" + i + "'", c.line);
    }
  }

  static bool find_bimodule_meth(const Program& p, const Ident& name) {
    for (auto& [bn, bm] : p.bimodules)
      if (bm.meths.count(name)) return true;
    return false;
  }

  // --------------------------------------------------------------- wf checks

  std::optional<Type> lookup(const Program& p, const std::map<Ident, Type>& locals,
                             const Ident& x) const {
    auto it = locals.find(x);
    if (it != locals.end()) return it->second;
    return p.var_type(x);
  }

  // typecheck an expression; returns nullopt (and reports) on error
  std::optional<Type> check_expr(const Program& p, const ExprPtr& e,
                                 const std::map<Ident, Type>& locals, int line,
                                 bool allow_spec_only) {
    using K = Expr::K;
    auto fail = [&](const std::string& m) -> std::optional<Type> {
      err("typing", m, line);
      return std::nullopt;
    };
    switch (e->k) {
      case K::Var: {
        if (is_spec_only(e->name)) {
          if (!allow_spec_only) return fail("spec-only variable '" + e->name + "' not allowed here");
          auto it = locals.find(e->name);
          return it != locals.end() ? std::optional<Type>(it->second) : std::optional<Type>(Type::rgn());
        }
        auto t = lookup(p, locals, e->name);
        if (!t) return fail("unknown variable '" + e->name + "'");
        return t;
      }
      case K::IntLit: return Type::intt();
      case K::BoolLit: return Type::boolt();
      case K::Null: return Type::cls_t("");  // null is polymorphic over classes
      case K::EmptyRgn: return Type::rgn();
      case K::Nil: return Type::intlist();
      case K::Cons: {
        auto h = check_expr(p, e->a, locals, line, allow_spec_only);
        auto t = check_expr(p, e->b, locals, line, allow_spec_only);
        if (h && h->k != Type::K::Int) return fail("cons head must be int");
        if (t && t->k != Type::K::IntList) return fail("cons tail must be intlist");
        return Type::intlist();
      }
      case K::Tail: {
        auto t = check_expr(p, e->a, locals, line, allow_spec_only);
        if (t && t->k != Type::K::IntList) return fail("tl expects an intlist");
        return Type::intlist();
      }
      case K::Sing: {
        auto t = check_expr(p, e->a, locals, line, allow_spec_only);
        if (t && !t->is_class() && t->k != Type::K::Rgn)
          return fail("singleton takes a reference: {" + expr_str(e->a) + "}");
        return Type::rgn();
      }
      case K::Image: {
        auto t = check_expr(p, e->a, locals, line, allow_spec_only);
        if (t && t->k != Type::K::Rgn) return fail("image applies to a region");
        if (e->name != kAnyField && !p.classes.field_type(e->name))
          return fail("unknown field '" + e->name + "'");
        return Type::rgn();
      }
      case K::Restrict: {
        auto t = check_expr(p, e->a, locals, line, allow_spec_only);
        if (t && t->k != Type::K::Rgn) return fail("restriction applies to a region");
        if (!p.classes.find(e->name)) return fail("unknown class '" + e->name + "'");
        return Type::rgn();
      }
      case K::Un: {
        auto t = check_expr(p, e->a, locals, line, allow_spec_only);
        if (e->uop == UnOp::Neg) {
          if (t && t->k != Type::K::Int) return fail("negation expects int");
          return Type::intt();
        }
        if (t && t->k != Type::K::Bool) return fail("'not' expects bool");
        return Type::boolt();
      }
      case K::Bin: {
        auto ta = check_expr(p, e->a, locals, line, allow_spec_only);
        auto tb = check_expr(p, e->b, locals, line, allow_spec_only);
        if (!ta || !tb) return std::nullopt;
        switch (e->bop) {
          case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
            if (ta->k != Type::K::Int || tb->k != Type::K::Int)
              return fail("arithmetic expects ints");
            return Type::intt();
          case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
            if (ta->k != Type::K::Int || tb->k != Type::K::Int)
              return fail("comparison expects ints");
            return Type::boolt();
          case BinOp::Eq: case BinOp::Ne:
            if (ta->is_class() && (tb->is_class() || tb->k == Type::K::Class)) return Type::boolt();
            if (ta->k != tb->k && !(ta->is_class() && tb->is_class()))
              return fail("'='/'<>' compares values of one type");
            return Type::boolt();
          case BinOp::And: case BinOp::Or:
            if (ta->k != Type::K::Bool || tb->k != Type::K::Bool)
              return fail("boolean operator expects bools");
            return Type::boolt();
          case BinOp::Union: case BinOp::Inter: case BinOp::Diff:
            if (ta->k != Type::K::Rgn || tb->k != Type::K::Rgn)
              return fail("region operator expects regions");
            return Type::rgn();
          case BinOp::In:
            if (tb->k != Type::K::Rgn) return fail("'iin' expects a region on the right");
            return Type::boolt();
          case BinOp::Subset:
            if (ta->k != Type::K::Rgn || tb->k != Type::K::Rgn)
              return fail("'subseteq' expects regions");
            return Type::boolt();
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  // reference-typed program expressions use only null and equality; images
  // make an expression heap-dependent, which tests and assignments of
  // non-region type must avoid
  bool heap_dependent(const ExprPtr& e) const {
    if (!e) return false;
    if (e->k == Expr::K::Image) return true;
    return heap_dependent(e->a) || heap_dependent(e->b);
  }

  void check_formula(const Program& p, const FormulaPtr& f, std::map<Ident, Type> locals,
                     int line, bool allow_spec_only) {
    if (!f) return;
    using K = Formula::K;
    switch (f->k) {
      case K::Atom: {
        auto t = check_expr(p, f->e, locals, line, allow_spec_only);
        if (t && t->k != Type::K::Bool) err("typing", "formula atom must be boolean", line);
        return;
      }
      case K::PointsTo: {
        auto t = lookup(p, locals, f->var);
        if (!t && is_spec_only(f->var) && allow_spec_only) t = Type::cls_t("");
        if (!t) { err("typing", "unknown variable '" + f->var + "'", line); return; }
        if (!t->is_class()) err("typing", "points-to receiver must have class type", line);
        auto ft = p.classes.field_type(f->field);
        if (!ft) { err("typing", "unknown field '" + f->field + "'", line); return; }
        check_expr(p, f->e, locals, line, allow_spec_only);
        return;
      }
      case K::Subset:
        check_expr(p, f->e, locals, line, allow_spec_only);
        check_expr(p, f->e2, locals, line, allow_spec_only);
        return;
      case K::Eq: {
        if (f->e->k == Expr::K::Var && is_spec_only(f->e->name) && allow_spec_only) {
          // snapshot equation s = F: s takes F's type (bound in check_spec)
          check_expr(p, f->e2, locals, line, false);
          return;
        }
        check_expr(p, f->e, locals, line, allow_spec_only);
        check_expr(p, f->e2, locals, line, allow_spec_only);
        return;
      }
      case K::TypeTest:
        check_expr(p, f->e, locals, line, allow_spec_only);
        for (auto& k : f->classes)
          if (!p.classes.find(k)) err("typing", "unknown class '" + k + "'", line);
        return;
      case K::Prim:
        for (auto& a : f->args) check_expr(p, a, locals, line, allow_spec_only);
        return;
      case K::Not:
        check_formula(p, f->l, locals, line, allow_spec_only);
        return;
      case K::And: case K::Or: case K::Imply:
        check_formula(p, f->l, locals, line, allow_spec_only);
        check_formula(p, f->r, locals, line, allow_spec_only);
        return;
      case K::Forall: case K::Exists: {
        auto inner = locals;
        inner[f->var] = f->qtype;
        check_formula(p, f->l, inner, line, allow_spec_only);
        return;
      }
    }
  }

  void check_rel_formula(const Program& p, const RelFormulaPtr& f, std::map<Ident, Type> ll,
                         std::map<Ident, Type> rl, int line, bool allow_spec_only,
                         bool forbid_agreement = false) {
    if (!f) return;
    using K = RelFormula::K;
    switch (f->k) {
      case K::Left: check_formula(p, f->u, ll, line, allow_spec_only); return;
      case K::Right: check_formula(p, f->u, rl, line, allow_spec_only); return;
      case K::BiEq:
        check_expr(p, f->e, ll, line, allow_spec_only);
        check_expr(p, f->e2, rl, line, allow_spec_only);
        return;
      case K::Agree:
        if (forbid_agreement) {
          err("Def 3.6", "alignment guard contains agreement", line);
          return;
        }
        if (f->le.is_var) {
          if (!lookup(p, ll, f->le.var) && !(allow_spec_only && is_spec_only(f->le.var)))
            err("typing", "unknown variable '" + f->le.var + "' in agreement", line);
        } else {
          check_expr(p, f->le.rgn, ll, line, allow_spec_only);
          check_expr(p, f->le.rgn, rl, line, allow_spec_only);
        }
        return;
      case K::Later:
        if (forbid_agreement) err("Def 3.6", "alignment guard contains 'later'", line);
        check_rel_formula(p, f->l, ll, rl, line, allow_spec_only, forbid_agreement);
        return;
      case K::PrimRel:
        for (auto& [side, e] : f->rargs)
          check_expr(p, e, side == Side::Left ? ll : rl, line, allow_spec_only);
        return;
      case K::Not:
        check_rel_formula(p, f->l, ll, rl, line, allow_spec_only, forbid_agreement);
        return;
      case K::And: case K::Or: case K::Imply:
        check_rel_formula(p, f->l, ll, rl, line, allow_spec_only, forbid_agreement);
        check_rel_formula(p, f->r, ll, rl, line, allow_spec_only, forbid_agreement);
        return;
      case K::ForallP: case K::ExistsP: {
        auto il = ll, ir = rl;
        il[f->lvar] = f->ltype;
        ir[f->rvar] = f->rtype;
        check_rel_formula(p, f->l, il, ir, line, allow_spec_only, forbid_agreement);
        return;
      }
      case K::Hole:
        err("frontend", "guard placeholder '_' outside a weave query", line);
        return;
    }
  }

  void check_effect(const Program& p, const Effect& eff, int line) {
    for (const auto& a : eff) {
      if (a.le.is_var) {
        if (is_spec_only(a.le.var)) {
          err("Def 3.2", "spec-only variable '" + a.le.var + "' in frame condition", line);
        } else if (a.le.var != kAllocVar && !p.var_type(a.le.var)) {
          err("typing", "unknown variable '" + a.le.var + "' in effect", line);
        }
      } else {
        std::map<Ident, Type> none;
        check_expr(p, a.le.rgn, none, line, false);
        if (a.le.field != kAnyField && !p.classes.field_type(a.le.field))
          err("typing", "unknown field '" + a.le.field + "' in effect", line);
      }
    }
  }

  // candidate dynamic boundary: framed reads, no writes, no spec-only
  void check_boundary(const Program& p, const Effect& bnd, const Ident& mod, int line) {
    check_effect(p, bnd, line);
    for (const auto& a : bnd) {
      if (!a.is_read) {
        err("Def 3.1", "boundary of '" + mod + "' contains a write effect", line);
        continue;
      }
      if (a.le.is_var) continue;
      // rd G`f requires ftpt(G) in the boundary; footprint checked below in
      // effects.hpp terms, but stated here to keep diagnostics local
      if (!footprint_covered(bnd, a.le.rgn))
        err("Def 3.1", "boundary of '" + mod + "' is not framed: rd " + lexpr_str(a.le) +
                            " lacks ftpt(" + expr_str(a.le.rgn) + ")", line);
    }
  }

  // does eff contain the footprint of region expression g?
  static bool footprint_covered(const Effect& eff, const ExprPtr& g) {
    using K = Expr::K;
    switch (g->k) {
      case K::Var:
        return effect_contains(eff, rd_var(g->name));
      case K::EmptyRgn: case K::Null: case K::IntLit: case K::BoolLit: case K::Nil:
        return true;
      case K::Sing: case K::Restrict: case K::Tail:
        return footprint_covered(eff, g->a);
      case K::Image:
        return effect_contains(eff, rd_image(g->a, g->name)) && footprint_covered(eff, g->a);
      case K::Un:
        return footprint_covered(eff, g->a);
      case K::Bin: case K::Cons:
        return footprint_covered(eff, g->a) && footprint_covered(eff, g->b);
    }
    return true;
  }

  // Def 3.2: spec-only variables appear in the precondition only as top-level
  // snapshot conjuncts s = F (F spec-only free); post's spec-only occur in pre
  void check_spec(const Program& p, const Spec& s, int line) {
    std::set<Ident> snap_vars;
    collect_snapshots(s.pre, snap_vars, line);
    std::set<Ident> pre_vars, post_vars;
    collect_formula_vars(s.pre, pre_vars);
    collect_formula_vars(s.post, post_vars);
    for (auto& v : pre_vars)
      if (is_spec_only(v) && !snap_vars.count(v))
        err("Def 3.2", "spec-only variable '" + v + "' occurs outside a top-level snapshot",
            line);
    for (auto& v : post_vars)
      if (is_spec_only(v) && !snap_vars.count(v))
        err("Def 3.2", "spec-only variable '" + v + "' in postcondition is unbound", line);
    check_effect(p, s.frame, line);
    std::map<Ident, Type> locals = snapshot_types(p, s.pre, line);
    check_formula(p, s.pre, locals, line, true);
    check_formula(p, s.post, locals, line, true);
  }

  // types of snapshot variables, inferred from their equations' right sides
  std::map<Ident, Type> snapshot_types(const Program& p, const FormulaPtr& pre, int line) {
    std::map<Ident, Type> out;
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
      if (!f) return;
      if (f->k == Formula::K::And) {
        walk(f->l);
        walk(f->r);
        return;
      }
      if (f->k == Formula::K::Eq && f->e->k == Expr::K::Var && is_spec_only(f->e->name)) {
        std::map<Ident, Type> none;
        auto t = check_expr(p, f->e2, none, line, false);
        if (t) out[f->e->name] = *t;
      }
    };
    walk(pre);
    return out;
  }

  void check_rel_spec(const Program& p, const RelSpec& s, int line) {
    check_effect(p, s.frame_l, line);
    check_effect(p, s.frame_r, line);
    std::map<Ident, Type> ll, rl;
    std::function<void(const RelFormulaPtr&)> walk = [&](const RelFormulaPtr& f) {
      if (!f) return;
      if (f->k == RelFormula::K::And) {
        walk(f->l);
        walk(f->r);
        return;
      }
      if (f->k == RelFormula::K::Left)
        for (auto& [v, t] : snapshot_types(p, f->u, line)) ll[v] = t;
      if (f->k == RelFormula::K::Right)
        for (auto& [v, t] : snapshot_types(p, f->u, line)) rl[v] = t;
    };
    walk(s.pre);
    check_rel_formula(p, s.pre, ll, rl, line, true);
    check_rel_formula(p, s.post, ll, rl, line, true);
  }

  void collect_snapshots(const FormulaPtr& pre, std::set<Ident>& out, int line) {
    if (!pre) return;
    if (pre->k == Formula::K::And) {
      collect_snapshots(pre->l, out, line);
      collect_snapshots(pre->r, out, line);
      return;
    }
    if (pre->k == Formula::K::Eq && pre->e->k == Expr::K::Var && is_spec_only(pre->e->name)) {
      std::set<Ident> rhs;
      collect_expr_vars(pre->e2, rhs);
      for (auto& v : rhs)
        if (is_spec_only(v))
          err("Def 3.2", "snapshot right-hand side mentions spec-only '" + v + "'", line);
      out.insert(pre->e->name);
    }
  }

  // Def 3.3: source code has no spec-only variables, no alloc, no endmarkers
  void check_body(const Program& p, const CommandPtr& c, int line,
                  std::map<Ident, Type> locals = {}, bool in_let_body = false) {
    if (!c) return;
    using K = Command::K;
    auto known = [&](const Ident& x) -> std::optional<Type> {
      return lookup(p, locals, x);
    };
    auto require_known = [&](const Ident& x) -> std::optional<Type> {
      if (x == kAllocVar) {
        err("Def 3.3", "'alloc' occurs in code", line);
        return Type::rgn();
      }
      if (is_spec_only(x)) {
        err("Def 3.3", "spec-only variable '" + x + "' occurs in code", line);
        return std::nullopt;
      }
      auto t = known(x);
      if (!t) err("typing", "unknown variable '" + x + "'", line);
      return t;
    };
    switch (c->k) {
      case K::Skip: return;
      case K::Call:
        if (!p.meths.count(c->m) && !in_scope_let_.count(c->m))
          err("typing", "call to unknown method '" + c->m + "'", line);
        return;
      case K::Assign: {
        auto t = require_known(c->x);
        std::set<Ident> vars;
        collect_expr_vars(c->rhs, vars);
        for (auto& v : vars) require_known(v);
        auto rt = check_expr(p, c->rhs, locals, line, false);
        if (t && rt && t->k != Type::K::Rgn && heap_dependent(c->rhs))
          err("typing", "non-region assignment from heap-dependent expression", line);
        if (t && rt && !(t->is_class() && rt->is_class()) && t->k != rt->k)
          err("typing", "assignment type mismatch for '" + c->x + "'", line);
        return;
      }
      case K::Alloc: {
        require_known(c->x);
        if (!p.classes.find(c->cls)) err("typing", "new of unknown class '" + c->cls + "'", line);
        return;
      }
      case K::Load: {
        require_known(c->x);
        auto t = require_known(c->y);
        auto ft = p.classes.field_type(c->field);
        if (!ft) err("typing", "unknown field '" + c->field + "'", line);
        else if (t && t->is_class()) {
          auto cd = p.classes.class_of_field(c->field);
          if (cd && cd->name != t->cls)
            err("typing", "field '" + c->field + "' is not declared by class '" + t->cls + "'",
                line);
        }
        return;
      }
      case K::Store: {
        auto t = require_known(c->x);
        require_known(c->y);
        auto ft = p.classes.field_type(c->field);
        if (!ft) err("typing", "unknown field '" + c->field + "'", line);
        else if (t && t->is_class()) {
          auto cd = p.classes.class_of_field(c->field);
          if (cd && cd->name != t->cls)
            err("typing", "field '" + c->field + "' is not declared by class '" + t->cls + "'",
                line);
        }
        return;
      }
      case K::Seq:
        check_body(p, c->c1, line, locals, in_let_body);
        check_body(p, c->c2, line, locals, in_let_body);
        return;
      case K::If: case K::While: {
        std::set<Ident> vars;
        collect_expr_vars(c->rhs, vars);
        for (auto& v : vars) require_known(v);
        if (heap_dependent(c->rhs)) err("typing", "test expression is heap-dependent", line);
        auto t = check_expr(p, c->rhs, locals, line, false);
        if (t && t->k != Type::K::Bool) err("typing", "test expression must be boolean", line);
        check_body(p, c->c1, line, locals, in_let_body);
        check_body(p, c->c2, line, locals, in_let_body);
        return;
      }
      case K::VarBlock: {
        if (is_spec_only(c->x)) err("Def 3.3", "spec-only local '" + c->x + "'", line);
        auto inner = locals;
        inner[c->x] = c->var_type;
        check_body(p, c->c1, line, inner, in_let_body);
        return;
      }
      case K::Let: {
        if (in_let_body) {
          err("Def 3.3", "'let' nested inside a let-bound body", line);
          return;
        }
        check_body(p, c->c1, line, {}, true);  // bodies see only globals
        in_scope_let_.insert(c->m);
        check_body(p, c->c2, line, locals, in_let_body);
        in_scope_let_.erase(c->m);
        return;
      }
      case K::ECall: case K::EVar: case K::ELet:
        err("Def 3.3", "endmarker in source code", line);
        return;
    }
  }

  void check_biprogram(const Program& p, const BiprogramPtr& b, int line,
                       std::map<Ident, Type> ll = {}, std::map<Ident, Type> rl = {}) {
    if (!b) return;
    using K = Biprogram::K;
    switch (b->k) {
      case K::Sync:
        check_body(p, b->atom, line, ll);
        return;
      case K::BiCom:
        check_body(p, b->cl, line, ll);
        check_body(p, b->cr, line, rl);
        return;
      case K::BiComR:
        err("Def 3.6", "r-bi-com in source biprogram", line);
        return;
      case K::BiSeq:
        check_biprogram(p, b->b1, line, ll, rl);
        check_biprogram(p, b->b2, line, ll, rl);
        return;
      case K::BiIf:
        check_expr(p, b->el, ll, line, false);
        check_expr(p, b->er, rl, line, false);
        check_biprogram(p, b->b1, line, ll, rl);
        check_biprogram(p, b->b2, line, ll, rl);
        return;
      case K::BiWhile:
        check_expr(p, b->el, ll, line, false);
        check_expr(p, b->er, rl, line, false);
        // alignment guards must be agreement-free (hence refperm independent)
        check_rel_formula(p, b->gl, ll, rl, line, false, true);
        check_rel_formula(p, b->gr, ll, rl, line, false, true);
        check_biprogram(p, b->b1, line, ll, rl);
        return;
      case K::BiVar: {
        auto il = ll, ir = rl;
        il[b->xl] = b->tl;
        ir[b->xr] = b->tr;
        check_biprogram(p, b->b1, line, il, ir);
        return;
      }
      case K::BiLet:
        check_body(p, b->cl, line, {}, true);
        check_body(p, b->cr, line, {}, true);
        in_scope_let_.insert(b->m);
        check_biprogram(p, b->b1, line, ll, rl);
        in_scope_let_.erase(b->m);
        return;
    }
  }

  std::set<Ident> in_scope_let_;
};

inline Program resolve(const SourceUnit& u, std::vector<Diagnostic>& diags) {
  Resolver r(u, diags);
  return r.run();
}

}  // namespace regal
