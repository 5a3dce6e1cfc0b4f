#pragma once

// Satisfaction of unary formulas and relation formulas, snapshot valuation of
// spec-only variables, the primitive-predicate table, and exhaustive
// refperm-extension search (the realization of the "possibly" modality).

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regal/printer.hpp"
#include "regal/state.hpp"

namespace regal {

// ---------------------------------------------------------------------------
// Primitive predicates: named total functions, evaluated with explicit fuel.

using PrimFn = std::function<bool(const EvalCtx&, const State&, const std::vector<Value>&)>;
using RelPrimFn = std::function<bool(const std::vector<Value>&)>;

// listpub(p, ls): ls is the list of values of public nodes on the null-
// terminated chain from p (fields pub/val/nxt); false when fuel runs out
inline bool prim_listpub(const EvalCtx& cx, const State& s, const std::vector<Value>& args) {
  if (args.size() != 2) return false;
  Ref p = as_ref(args[0]);
  IntList ls = as_intlist(args[1]);
  size_t idx = 0;
  int fuel = cx.bounds ? cx.bounds->pred_fuel : 64;
  while (fuel-- > 0) {
    if (p.is_null()) return idx == ls.xs.size();
    auto ob = s.obj(p);
    if (!ob) return false;
    auto pub = ob->fields.find("pub");
    auto val = ob->fields.find("val");
    auto nxt = ob->fields.find("nxt");
    if (pub == ob->fields.end() || val == ob->fields.end() || nxt == ob->fields.end())
      return false;
    if (as_bool(pub->second)) {
      if (idx >= ls.xs.size() || ls.xs[idx] != as_int(val->second)) return false;
      idx++;
    }
    p = as_ref(nxt->second);
  }
  return false;
}

inline const std::map<Ident, PrimFn>& prim_table() {
  static const std::map<Ident, PrimFn> table = {
      {"listpub", prim_listpub},
      {"eqlist",
       [](const EvalCtx&, const State&, const std::vector<Value>& a) {
         return a.size() == 2 && a[0] == a[1];
       }},
      {"eqPartition",
       [](const EvalCtx&, const State&, const std::vector<Value>& a) {
         return a.size() == 2 && a[0] == a[1];
       }},
  };
  return table;
}

inline const std::map<Ident, RelPrimFn>& rel_prim_table() {
  static const std::map<Ident, RelPrimFn> table = {
      {"eqlist", [](const std::vector<Value>& a) { return a.size() == 2 && a[0] == a[1]; }},
      {"eqPartition",
       [](const std::vector<Value>& a) { return a.size() == 2 && a[0] == a[1]; }},
  };
  return table;
}

// ---------------------------------------------------------------------------
// Quantifier domains at desk scale.

inline std::vector<Value> quantifier_domain(const EvalCtx& cx, const State& s, const Type& t) {
  std::vector<Value> out;
  switch (t.k) {
    case Type::K::Class:
      for (auto& [r, o] : s.heap)
        if (o.cls == t.cls) out.push_back(r);
      break;
    case Type::K::Int:
      for (long long v = cx.bounds->qint_lo; v <= cx.bounds->qint_hi; v++) out.push_back(v);
      break;
    case Type::K::Bool:
      out.push_back(false);
      out.push_back(true);
      break;
    case Type::K::Rgn: {
      Region u = s.alloc();
      u.insert(kNullRef);
      size_t n = u.refs.size();
      for (size_t mask = 0; mask < (1u << n); mask++) {
        Region r;
        for (size_t i = 0; i < n; i++)
          if (mask & (1u << i)) r.insert(u.refs[i]);
        out.push_back(r);
      }
      break;
    }
    case Type::K::IntList: {
      std::vector<IntList> cur = {IntList{}};
      out.push_back(IntList{});
      for (int len = 1; len <= cx.bounds->list_len; len++) {
        std::vector<IntList> next;
        for (auto& l : cur)
          for (long long v = cx.bounds->int_lo; v <= cx.bounds->int_hi; v++) {
            IntList e = l;
            e.xs.push_back(v);
            next.push_back(e);
            out.push_back(e);
          }
        cur = std::move(next);
      }
      break;
    }
    case Type::K::Partition: {
      // partitions of {0,1,2}
      std::function<void(int, Partition&)> gen = [&](int i, Partition& p) {
        if (i == 3) {
          Partition c = p;
          std::sort(c.blocks.begin(), c.blocks.end());
          out.push_back(c);
          return;
        }
        for (auto& b : p.blocks) {
          b.push_back(i);
          gen(i + 1, p);
          b.pop_back();
        }
        p.blocks.push_back({i});
        gen(i + 1, p);
        p.blocks.pop_back();
      };
      Partition p;
      gen(0, p);
      break;
    }
    case Type::K::Meth:
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unary satisfaction.

bool sat(const EvalCtx& cx, const State& s, const FormulaPtr& f);
inline bool sat(const EvalCtx& cx, const State& s, const FormulaPtr& f) {
  using K = Formula::K;
  switch (f->k) {
    case K::Atom:
      return as_bool(eval(cx, s, f->e));
    case K::PointsTo: {
      Ref r = as_ref(s.var(f->var));
      if (r.is_null()) return false;
      auto v = s.field(r, f->field);
      if (!v) return false;
      return *v == eval(cx, s, f->e);
    }
    case K::Subset:
      return region_subset(as_region(eval(cx, s, f->e)), as_region(eval(cx, s, f->e2)));
    case K::Eq:
      return eval(cx, s, f->e) == eval(cx, s, f->e2);
    case K::TypeTest: {
      Region g = as_region(eval(cx, s, f->e));
      for (Ref r : g.refs) {
        if (r.is_null()) continue;
        Ident t = s.type_of(r);
        bool ok = false;
        for (auto& k : f->classes) ok = ok || k == t;
        if (!ok) return false;
      }
      return true;
    }
    case K::Prim: {
      auto it = prim_table().find(f->prim);
      if (it == prim_table().end()) return false;
      std::vector<Value> args;
      for (auto& a : f->args) args.push_back(eval(cx, s, a));
      return it->second(cx, s, args);
    }
    case K::Not:
      return !sat(cx, s, f->l);
    case K::And:
      return sat(cx, s, f->l) && sat(cx, s, f->r);
    case K::Or:
      return sat(cx, s, f->l) || sat(cx, s, f->r);
    case K::Imply:
      return !sat(cx, s, f->l) || sat(cx, s, f->r);
    case K::Forall: {
      for (auto& v : quantifier_domain(cx, s, f->qtype))
        if (!sat(cx, s.with_var(f->var, v), f->l)) return false;
      return true;
    }
    case K::Exists: {
      for (auto& v : quantifier_domain(cx, s, f->qtype))
        if (sat(cx, s.with_var(f->var, v), f->l)) return true;
      return false;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Refperm extension search: enumerate type-respecting extensions of pi that
// pair hitherto-unmatched refs of the two allocations.  visit returns true to
// stop the search (early exit); the function returns whether it stopped.

inline bool for_each_extension(const EvalCtx&, const State& s, const State& s2,
                               const Refperm& pi,
                               const std::function<bool(const Refperm&)>& visit) {
  std::vector<Ref> left;
  for (auto& [r, o] : s.heap)
    if (!pi.lookup(r)) left.push_back(r);
  std::vector<Ref> right;
  for (auto& [r, o] : s2.heap)
    if (!pi.lookup_inv(r)) right.push_back(r);

  Refperm cur = pi;
  std::vector<bool> used(right.size(), false);
  std::function<bool(size_t)> go = [&](size_t i) -> bool {
    if (i == left.size()) return visit(cur);
    if (go(i + 1)) return true;  // leave left[i] unmatched
    for (size_t j = 0; j < right.size(); j++) {
      if (used[j]) continue;
      if (s.type_of(left[i]) != s2.type_of(right[j])) continue;
      used[j] = true;
      cur.fwd[left[i]] = right[j];
      cur.bwd[right[j]] = left[i];
      bool stop = go(i + 1);
      cur.fwd.erase(left[i]);
      cur.bwd.erase(right[j]);
      used[j] = false;
      if (stop) return true;
    }
    return false;
  };
  return go(0);
}

// all refperms between two states (used by the checker's enumerations)
inline bool for_each_refperm(const EvalCtx& cx, const State& s, const State& s2,
                             const std::function<bool(const Refperm&)>& visit) {
  return for_each_extension(cx, s, s2, Refperm{}, visit);
}

// ---------------------------------------------------------------------------
// Relational satisfaction (with ext_bound realized as exhaustive extension
// search over the finite allocations).

bool sat_rel(const EvalCtx& cx, const State& s, const State& s2, const Refperm& pi,
             const RelFormulaPtr& p);
inline bool sat_rel(const EvalCtx& cx, const State& s, const State& s2, const Refperm& pi,
                    const RelFormulaPtr& p) {
  using K = RelFormula::K;
  switch (p->k) {
    case K::Left:
      return sat(cx, s, p->u);
    case K::Right:
      return sat(cx, s2, p->u);
    case K::BiEq:
      return value_related(pi, eval(cx, s, p->e), eval(cx, s2, p->e2));
    case K::Agree: {
      if (p->le.is_var) {
        if (!s.has_var(p->le.var) || !s2.has_var(p->le.var)) return false;
        return value_related(pi, s.var(p->le.var), s2.var(p->le.var));
      }
      Effect e = {EffAtom{true, p->le}};
      return agree(cx, s, s2, pi, e) && agree(cx, s2, s, pi.inverse(), e);
    }
    case K::Later:
      return for_each_extension(cx, s, s2, pi, [&](const Refperm& rho) {
        return sat_rel(cx, s, s2, rho, p->l);
      });
    case K::PrimRel: {
      auto it = rel_prim_table().find(p->prim);
      if (it == rel_prim_table().end()) return false;
      std::vector<Value> args;
      for (auto& [side, e] : p->rargs)
        args.push_back(side == Side::Left ? eval(cx, s, e) : eval(cx, s2, e));
      return it->second(args);
    }
    case K::Not:
      return !sat_rel(cx, s, s2, pi, p->l);
    case K::And:
      return sat_rel(cx, s, s2, pi, p->l) && sat_rel(cx, s, s2, pi, p->r);
    case K::Or:
      return sat_rel(cx, s, s2, pi, p->l) || sat_rel(cx, s, s2, pi, p->r);
    case K::Imply:
      return !sat_rel(cx, s, s2, pi, p->l) || sat_rel(cx, s, s2, pi, p->r);
    case K::ForallP: {
      auto dl = quantifier_domain(cx, s, p->ltype);
      auto dr = quantifier_domain(cx, s2, p->rtype);
      for (auto& v : dl)
        for (auto& w : dr)
          if (!sat_rel(cx, s.with_var(p->lvar, v), s2.with_var(p->rvar, w), pi, p->l))
            return false;
      return true;
    }
    case K::ExistsP: {
      auto dl = quantifier_domain(cx, s, p->ltype);
      auto dr = quantifier_domain(cx, s2, p->rtype);
      for (auto& v : dl)
        for (auto& w : dr)
          if (sat_rel(cx, s.with_var(p->lvar, v), s2.with_var(p->rvar, w), pi, p->l))
            return true;
      return false;
    }
    case K::Hole:
      return true;  // holes never reach evaluation in well-formed input
  }
  return false;
}

// ---------------------------------------------------------------------------
// Snapshot valuation: the unique extension for the spec-only variables of a
// precondition in snapshot form; nullopt when two equations disagree.

inline std::optional<std::map<Ident, Value>> snapshot_values(const EvalCtx& cx, const State& s,
                                                             const FormulaPtr& pre) {
  std::map<Ident, Value> out;
  bool ok = true;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
    if (!f || !ok) return;
    if (f->k == Formula::K::And) {
      walk(f->l);
      walk(f->r);
      return;
    }
    if (f->k == Formula::K::Eq && f->e->k == Expr::K::Var && is_spec_only(f->e->name)) {
      Value v = eval(cx, s, f->e2);
      auto it = out.find(f->e->name);
      if (it != out.end() && !(it->second == v)) ok = false;
      else out[f->e->name] = v;
    }
  };
  walk(pre);
  if (!ok) return std::nullopt;
  return out;
}

// state extended with the precondition's snapshot values, when it satisfies
// the precondition; nullopt otherwise
inline std::optional<State> sat_pre(const EvalCtx& cx, const State& s, const FormulaPtr& pre) {
  auto vals = snapshot_values(cx, s, pre);
  if (!vals) return std::nullopt;
  State ext = s;
  for (auto& [x, v] : *vals) ext.vars[x] = v;
  if (!sat(cx, ext, pre)) return std::nullopt;
  return ext;
}

// relational form: left and right valuations computed independently from the
// embedded snapshot conjuncts
inline std::optional<std::pair<std::map<Ident, Value>, std::map<Ident, Value>>>
snapshot_values_rel(const EvalCtx& cx, const State& s, const State& s2,
                    const RelFormulaPtr& pre) {
  std::map<Ident, Value> lv, rv;
  bool ok = true;
  std::function<void(const RelFormulaPtr&)> walk = [&](const RelFormulaPtr& f) {
    if (!f || !ok) return;
    if (f->k == RelFormula::K::And) {
      walk(f->l);
      walk(f->r);
      return;
    }
    auto side = [&](const State& st, std::map<Ident, Value>& out, const FormulaPtr& u) {
      auto vals = snapshot_values(cx, st, u);
      if (!vals) {
        ok = false;
        return;
      }
      for (auto& [x, v] : *vals) {
        auto it = out.find(x);
        if (it != out.end() && !(it->second == v)) ok = false;
        else out[x] = v;
      }
    };
    if (f->k == RelFormula::K::Left) side(s, lv, f->u);
    if (f->k == RelFormula::K::Right) side(s2, rv, f->u);
  };
  walk(pre);
  if (!ok) return std::nullopt;
  return std::make_pair(lv, rv);
}

inline std::optional<std::pair<State, State>> sat_pre_rel(const EvalCtx& cx, const State& s,
                                                          const State& s2, const Refperm& pi,
                                                          const RelFormulaPtr& pre) {
  auto vals = snapshot_values_rel(cx, s, s2, pre);
  if (!vals) return std::nullopt;
  State sl = s, sr = s2;
  for (auto& [x, v] : vals->first) sl.vars[x] = v;
  for (auto& [x, v] : vals->second) sr.vars[x] = v;
  if (!sat_rel(cx, sl, sr, pi, pre)) return std::nullopt;
  return std::make_pair(sl, sr);
}

// ---------------------------------------------------------------------------
// Refperm sensitivity: conservative type-based test.  Refperm-independent
// formulas are evaluated once instead of per refperm (3.9, checker fast
// path); agreement atoms at int/bool type are independent.

inline std::optional<Type> expr_type(const Program& p, const ExprPtr& e) {
  using K = Expr::K;
  switch (e->k) {
    case K::Var: {
      if (is_spec_only(e->name)) return std::nullopt;  // unknown here; assume sensitive
      return p.var_type(e->name);
    }
    case K::IntLit: return Type::intt();
    case K::BoolLit: return Type::boolt();
    case K::Null: return Type::cls_t("");
    case K::EmptyRgn: case K::Sing: case K::Image: case K::Restrict: return Type::rgn();
    case K::Nil: case K::Cons: case K::Tail: return Type::intlist();
    case K::Un: return e->uop == UnOp::Neg ? Type::intt() : Type::boolt();
    case K::Bin:
      switch (e->bop) {
        case BinOp::Add: case BinOp::Sub: case BinOp::Mul: return Type::intt();
        case BinOp::Union: case BinOp::Inter: case BinOp::Diff: return Type::rgn();
        default: return Type::boolt();
      }
  }
  return std::nullopt;
}

inline bool refperm_sensitive(const Program& prog, const RelFormulaPtr& p) {
  if (!p) return false;
  using K = RelFormula::K;
  switch (p->k) {
    case K::Left: case K::Right: case K::PrimRel: case K::Hole:
      return false;
    case K::Later:
      return true;
    case K::Agree: {
      if (!p->le.is_var) return true;
      auto t = prog.var_type(p->le.var);
      if (!t) return true;
      return t->is_class() || t->k == Type::K::Rgn;
    }
    case K::BiEq: {
      auto tl = expr_type(prog, p->e);
      auto tr = expr_type(prog, p->e2);
      if (!tl || !tr) return true;
      auto plain = [](const Type& t) {
        return t.k == Type::K::Int || t.k == Type::K::Bool || t.is_math();
      };
      return !(plain(*tl) && plain(*tr));
    }
    default:
      return refperm_sensitive(prog, p->l) || refperm_sensitive(prog, p->r);
  }
}

}  // namespace regal
