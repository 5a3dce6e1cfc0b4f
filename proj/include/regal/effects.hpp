#pragma once

// The effect algebra: footprints, separator formulas, effect subtraction,
// mode filters, write snapshots, local-equivalence spec construction, and
// invariant/coupling conjunction.

#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "regal/ast.hpp"
#include "regal/printer.hpp"
#include "regal/syntax_ops.hpp"

namespace regal {

// ---------------------------------------------------------------------------
// Footprints (by recursion on expressions and atomic formulas).

inline void ftpt_into(const ExprPtr& e, Effect& out) {
  if (!e) return;
  using K = Expr::K;
  switch (e->k) {
    case K::Var:
      effect_add(out, rd_var(e->name));
      return;
    case K::IntLit: case K::BoolLit: case K::Null: case K::EmptyRgn: case K::Nil:
      return;
    case K::Image:
      effect_add(out, rd_image(e->a, e->name));
      ftpt_into(e->a, out);
      return;
    case K::Sing: case K::Restrict: case K::Tail: case K::Un:
      ftpt_into(e->a, out);
      return;
    case K::Bin: case K::Cons:
      ftpt_into(e->a, out);
      ftpt_into(e->b, out);
      return;
  }
}

inline Effect ftpt(const ExprPtr& e) {
  Effect out;
  ftpt_into(e, out);
  return out;
}

// footprint of a formula; deletes read atoms on quantifier-bound variables
inline Effect ftpt_formula(const FormulaPtr& f) {
  Effect out;
  using K = Formula::K;
  switch (f->k) {
    case K::Atom:
      ftpt_into(f->e, out);
      return out;
    case K::PointsTo:
      effect_add(out, rd_var(f->var));
      effect_add(out, rd_image(mk_sing(mk_var(f->var)), f->field));
      ftpt_into(f->e, out);
      return out;
    case K::Subset: case K::Eq:
      ftpt_into(f->e, out);
      ftpt_into(f->e2, out);
      return out;
    case K::TypeTest:
      ftpt_into(f->e, out);
      return out;
    case K::Prim:
      for (auto& a : f->args) ftpt_into(a, out);
      return out;
    case K::Not:
      return ftpt_formula(f->l);
    case K::And: case K::Or: case K::Imply:
      return effect_union(ftpt_formula(f->l), ftpt_formula(f->r));
    case K::Forall: case K::Exists: {
      Effect sub = ftpt_formula(f->l);
      Effect res;
      for (auto& a : sub)
        if (!(a.le.is_var && a.le.var == f->var)) effect_add(res, a);
      return res;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normal form: at most one read and one write atom per outermost field name,
// merging rd G`f, rd H`f into rd (G u H)`f.  Applied eagerly after algebra
// operations so printing is canonical.

inline Effect normalize_effect(const Effect& eff) {
  Effect out;
  // variables first, in first-occurrence order
  for (auto& a : eff)
    if (a.le.is_var) effect_add(out, a);
  // merge images per (mode, field)
  std::vector<std::pair<bool, Ident>> order;
  std::map<std::pair<bool, Ident>, ExprPtr> merged;
  for (auto& a : eff) {
    if (a.le.is_var) continue;
    auto key = std::make_pair(a.is_read, a.le.field);
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged[key] = a.le.rgn;
      order.push_back(key);
    } else if (!expr_eq(it->second, a.le.rgn)) {
      it->second = mk_bin(BinOp::Union, it->second, a.le.rgn);
    }
  }
  for (auto& key : order)
    out.push_back({key.first, LeftExpr::mk_image(merged[key], key.second)});
  return out;
}

// ---------------------------------------------------------------------------
// Mode filters.

inline Effect rds(const Effect& e) {
  Effect out;
  for (auto& a : e)
    if (a.is_read) effect_add(out, a);
  return out;
}
inline Effect wrs(const Effect& e) {
  Effect out;
  for (auto& a : e)
    if (!a.is_read) effect_add(out, a);
  return out;
}
inline Effect r2w(const Effect& e) {
  Effect out;
  for (auto& a : e)
    if (a.is_read) effect_add(out, {false, a.le});
  return out;
}
inline Effect w2r(const Effect& e) {
  Effect out;
  for (auto& a : e)
    if (!a.is_read) effect_add(out, {true, a.le});
  return out;
}

// δ⊕ = δ, rd alloc
inline Effect with_alloc(const Effect& d) {
  Effect out = d;
  effect_add(out, rd_var(kAllocVar));
  return out;
}

// ---------------------------------------------------------------------------
// Effect subtraction (after normalizing both operands).

inline Effect subtract(const Effect& e0, const Effect& h0) {
  Effect e = normalize_effect(e0), h = normalize_effect(h0);
  Effect out;
  for (auto& a : e) {
    if (a.le.is_var) {
      if (!effect_contains(h, a)) effect_add(out, a);
      continue;
    }
    // find an h-atom with the same mode and outermost field
    const EffAtom* match = nullptr;
    for (auto& b : h)
      if (!b.le.is_var && b.is_read == a.is_read && b.le.field == a.le.field) match = &b;
    if (!match) {
      effect_add(out, a);
    } else {
      auto g = mk_bin(BinOp::Diff, a.le.rgn, match->le.rgn);
      out.push_back({a.is_read, LeftExpr::mk_image(g, a.le.field)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Separator formulas (recursion on effects; unit laws only).

inline FormulaPtr separator_atoms(const EffAtom& r, const EffAtom& w) {
  // only read-vs-write pairs produce non-trivial conditions
  if (!r.is_read || w.is_read) return f_true();
  if (r.le.is_var && w.le.is_var)
    return r.le.var == w.le.var ? f_false() : f_true();
  if (!r.le.is_var && !w.le.is_var) {
    if (r.le.field == w.le.field || r.le.field == kAnyField || w.le.field == kAnyField)
      return f_disjoint(r.le.rgn, w.le.rgn);
    return f_true();
  }
  return f_true();
}

inline FormulaPtr separator(const Effect& d, const Effect& e) {
  std::vector<FormulaPtr> conjuncts;
  for (auto& a : d) {
    for (auto& b : e) {
      auto c = separator_atoms(a, b);
      if (c->k == Formula::K::Atom && c->e->k == Expr::K::BoolLit) {
        if (!c->e->bval) return f_false();
        continue;  // true unit
      }
      bool dup = false;
      for (auto& prev : conjuncts) dup = dup || formula_eq(prev, c);
      if (!dup) conjuncts.push_back(c);
    }
  }
  if (conjuncts.empty()) return f_true();
  FormulaPtr acc = conjuncts[0];
  for (size_t i = 1; i < conjuncts.size(); i++) acc = f_and(acc, conjuncts[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Write snapshots: snap maps an effect to a formula binding fresh spec-only
// variables to the regions in write effects; Asnap maps it to the read effect
// naming the same locations from the post-state's perspective.

struct SnapshotResult {
  FormulaPtr snap;   // conjunction of snapshot equations (true when none)
  Effect asnap;      // reads over the snapshot variables; alloc omitted
};

inline std::string sanitize_for_name(const std::string& s) {
  std::string out;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c))) out += c;
    else if (!out.empty() && out.back() != '_') out += '_';
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

inline SnapshotResult snapshot(const Effect& eff0, const std::string& tag,
                               const ClassTable& classes) {
  Effect eff = normalize_effect(eff0);
  SnapshotResult res;
  res.snap = f_true();
  bool have = false;
  std::map<std::string, int> used;
  auto fresh_name = [&](const std::string& base) {
    std::string name = "s_" + base + (tag.empty() ? "" : "_" + tag);
    int& n = used[name];
    n++;
    return n == 1 ? name : name + std::to_string(n);
  };
  for (auto& a : eff) {
    if (a.is_read) continue;
    if (a.le.is_var) {
      if (a.le.var != kAllocVar) effect_add(res.asnap, rd_var(a.le.var));
      continue;
    }
    Ident s = fresh_name(sanitize_for_name(expr_str(a.le.rgn)) + "_" + a.le.field);
    auto eq = f_eq(mk_var(s), a.le.rgn);
    res.snap = have ? f_and(res.snap, eq) : eq;
    have = true;
    if (a.le.field == kAnyField) {
      for (auto& f : classes.all_fields())
        effect_add(res.asnap, rd_image(mk_var(s), f));
    } else {
      effect_add(res.asnap, rd_image(mk_var(s), a.le.field));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Local equivalence: from a unary spec and a dynamic boundary, the relational
// spec asserting agreement on readable locations in, and agreement on written
// and fresh locations out, modulo the boundary-encapsulated locations.  No
// algebraic simplification is performed.

inline Ident loc_eq_alloc_snap(const std::string& tag) {
  return tag.empty() ? Ident("s_alloc") : Ident("s_alloc_" + tag);
}

inline RelSpec loc_eq(const Spec& spec, const Effect& delta, const ClassTable& classes,
                      const std::string& tag = "") {
  RelSpec out;
  Effect eps = normalize_effect(spec.frame);
  Ident salloc = loc_eq_alloc_snap(tag);

  // pre: Both(P) /\ A(rds(eps) \ delta+) /\ Both(s_alloc = alloc /\ snap(eps))
  Effect pre_agree = subtract(rds(eps), with_alloc(delta));
  SnapshotResult snap = snapshot(eps, tag, classes);
  FormulaPtr snap_conj = f_and(f_eq(mk_var(salloc), mk_var(kAllocVar)), snap.snap);
  out.pre = r_and(r_and(r_both(spec.pre), r_agree_effect(pre_agree)), r_both(snap_conj));

  // post: later( Both(Q) /\ A((rd (alloc \ s_alloc)`fields, Asnap(eps)) \ delta) )
  Effect fresh;
  auto fresh_rgn = mk_bin(BinOp::Diff, mk_var(kAllocVar), mk_var(salloc));
  for (auto& f : classes.all_fields()) effect_add(fresh, rd_image(fresh_rgn, f));
  Effect post_agree = subtract(effect_union(fresh, snap.asnap), delta);
  out.post = r_later(r_and(r_both(spec.post), r_agree_effect(post_agree)));

  out.frame_l = eps;
  out.frame_r = eps;
  return out;
}

// ---------------------------------------------------------------------------
// Conjoining invariants and couplings.

inline Spec conjoin(const Spec& s, const FormulaPtr& inv) {
  Spec out = s;
  out.pre = f_and(s.pre, inv);
  out.post = f_and(s.post, inv);
  return out;
}

inline bool contains_later(const RelFormulaPtr& p) {
  if (!p) return false;
  if (p->k == RelFormula::K::Later) return true;
  return contains_later(p->l) || contains_later(p->r);
}

// relational specs must be in standard form: post is S or later(S), S and the
// precondition later-free
inline std::optional<RelSpec> conjoin_rel(const RelSpec& s, const RelFormulaPtr& coupling) {
  if (contains_later(s.pre)) return std::nullopt;
  RelSpec out = s;
  out.pre = r_and(s.pre, coupling);
  if (s.post->k == RelFormula::K::Later) {
    if (contains_later(s.post->l)) return std::nullopt;
    out.post = r_later(r_and(s.post->l, coupling));
  } else {
    if (contains_later(s.post)) return std::nullopt;
    out.post = r_and(s.post, coupling);
  }
  return out;
}

inline HypContext conjoin_ctx(const HypContext& phi, const FormulaPtr& inv) {
  HypContext out;
  for (auto& [m, s] : phi) out[m] = conjoin(s, inv);
  return out;
}

inline std::optional<RelHypContext> conjoin_rel_ctx(const RelHypContext& phi,
                                                    const RelFormulaPtr& coupling) {
  RelHypContext out;
  out.phi0 = conjoin_ctx(phi.phi0, project_formula(coupling, Side::Left));
  out.phi1 = conjoin_ctx(phi.phi1, project_formula(coupling, Side::Right));
  for (auto& [m, s] : phi.phi2) {
    auto c = conjoin_rel(s, coupling);
    if (!c) return std::nullopt;
    out.phi2[m] = *c;
  }
  return out;
}

// LocEq over a unary context: (Phi, Phi, locEq of each spec)
inline RelHypContext loc_eq_ctx(const HypContext& phi, const Effect& delta,
                                const ClassTable& classes) {
  RelHypContext out;
  out.phi0 = phi;
  out.phi1 = phi;
  for (auto& [m, s] : phi) out.phi2[m] = loc_eq(s, delta, classes, m);
  return out;
}

// effect with framed reads: for every rd G`f, ftpt(G) is included
inline bool has_framed_reads(const Effect& eff) {
  for (auto& a : eff) {
    if (!a.is_read || a.le.is_var) continue;
    for (auto& b : ftpt(a.le.rgn))
      if (!effect_contains(eff, b)) return false;
  }
  return true;
}

}  // namespace regal
