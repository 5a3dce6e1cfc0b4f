#pragma once

// States, heaps, locations, refperms, expression evaluation, the location-set
// functions rlocs/wlocs/wrttn/freshLocs, and the agreement predicates that
// underpin every semantic definition.  States are immutable values: all
// operations return fresh states, and everything here is safe for parallel
// enumeration.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "regal/ast.hpp"
#include "regal/resolve.hpp"

namespace regal {

// ---------------------------------------------------------------------------
// Values.

struct Ref {
  int id = 0;  // 0 is null
  bool operator==(const Ref& o) const { return id == o.id; }
  bool operator!=(const Ref& o) const { return id != o.id; }
  bool operator<(const Ref& o) const { return id < o.id; }
  bool is_null() const { return id == 0; }
};
inline const Ref kNullRef{0};

struct Region {
  std::vector<Ref> refs;  // sorted, unique; may contain null

  void insert(Ref r) {
    auto it = std::lower_bound(refs.begin(), refs.end(), r);
    if (it == refs.end() || *it != r) refs.insert(it, r);
  }
  bool contains(Ref r) const {
    return std::binary_search(refs.begin(), refs.end(), r);
  }
  bool operator==(const Region& o) const { return refs == o.refs; }
  bool operator<(const Region& o) const { return refs < o.refs; }
  size_t size() const { return refs.size(); }
};

inline Region region_union(const Region& a, const Region& b) {
  Region out;
  std::set_union(a.refs.begin(), a.refs.end(), b.refs.begin(), b.refs.end(),
                 std::back_inserter(out.refs));
  return out;
}
inline Region region_inter(const Region& a, const Region& b) {
  Region out;
  std::set_intersection(a.refs.begin(), a.refs.end(), b.refs.begin(), b.refs.end(),
                        std::back_inserter(out.refs));
  return out;
}
inline Region region_diff(const Region& a, const Region& b) {
  Region out;
  std::set_difference(a.refs.begin(), a.refs.end(), b.refs.begin(), b.refs.end(),
                      std::back_inserter(out.refs));
  return out;
}
inline bool region_subset(const Region& a, const Region& b) {
  return std::includes(b.refs.begin(), b.refs.end(), a.refs.begin(), a.refs.end());
}

struct IntList {
  std::vector<long long> xs;
  bool operator==(const IntList& o) const { return xs == o.xs; }
  bool operator<(const IntList& o) const { return xs < o.xs; }
};

// partitions of an initial segment of the naturals, in canonical form:
// blocks sorted by least element, elements sorted within blocks
struct Partition {
  std::vector<std::vector<int>> blocks;
  bool operator==(const Partition& o) const { return blocks == o.blocks; }
  bool operator<(const Partition& o) const { return blocks < o.blocks; }
};

using Value = std::variant<long long, bool, Ref, Region, IntList, Partition>;

inline Value default_value(const Type& t) {
  switch (t.k) {
    case Type::K::Int: return 0LL;
    case Type::K::Bool: return false;
    case Type::K::Rgn: return Region{};
    case Type::K::Class: return kNullRef;
    case Type::K::IntList: return IntList{};
    case Type::K::Partition: return Partition{};
    case Type::K::Meth: return 0LL;
  }
  return 0LL;
}

inline std::string value_str(const Value& v) {
  struct V {
    std::string operator()(long long n) const { return std::to_string(n); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(Ref r) const {
      return r.is_null() ? "null" : "#" + std::to_string(r.id);
    }
    std::string operator()(const Region& r) const {
      std::string s = "{";
      for (size_t i = 0; i < r.refs.size(); i++) {
        if (i) s += ",";
        s += (*this)(r.refs[i]);
      }
      return s + "}";
    }
    std::string operator()(const IntList& l) const {
      std::string s = "[";
      for (size_t i = 0; i < l.xs.size(); i++) {
        if (i) s += ",";
        s += std::to_string(l.xs[i]);
      }
      return s + "]";
    }
    std::string operator()(const Partition& p) const {
      std::string s = "<";
      for (size_t i = 0; i < p.blocks.size(); i++) {
        if (i) s += "|";
        for (size_t j = 0; j < p.blocks[i].size(); j++) {
          if (j) s += ",";
          s += std::to_string(p.blocks[i][j]);
        }
      }
      return s + ">";
    }
  };
  return std::visit(V{}, v);
}

// ---------------------------------------------------------------------------
// States.

struct Obj {
  Ident cls;
  std::map<Ident, Value> fields;
  bool operator==(const Obj& o) const { return cls == o.cls && fields == o.fields; }
  bool operator<(const Obj& o) const {
    return cls != o.cls ? cls < o.cls : fields < o.fields;
  }
};

struct State {
  std::map<Ident, Value> vars;  // excludes alloc, which is the heap's domain
  std::map<Ref, Obj> heap;

  Region alloc() const {
    Region r;
    for (auto& [ref, o] : heap) r.refs.push_back(ref);
    return r;
  }
  bool has_var(const Ident& x) const { return x == kAllocVar || vars.count(x) > 0; }
  Value var(const Ident& x) const {
    if (x == kAllocVar) return alloc();
    auto it = vars.find(x);
    return it == vars.end() ? Value(0LL) : it->second;
  }
  const Obj* obj(Ref r) const {
    auto it = heap.find(r);
    return it == heap.end() ? nullptr : &it->second;
  }
  std::optional<Value> field(Ref r, const Ident& f) const {
    auto o = obj(r);
    if (!o) return std::nullopt;
    auto it = o->fields.find(f);
    if (it == o->fields.end()) return std::nullopt;
    return it->second;
  }
  Ident type_of(Ref r) const {
    auto o = obj(r);
    return o ? o->cls : Ident{};
  }
  Ref fresh_ref() const {  // deterministic allocator: least unused id
    int id = 1;
    while (heap.count(Ref{id})) id++;
    return Ref{id};
  }

  State with_var(const Ident& x, Value v) const {
    State s = *this;
    s.vars[x] = std::move(v);
    return s;
  }
  State without_var(const Ident& x) const {
    State s = *this;
    s.vars.erase(x);
    return s;
  }
  State with_field(Ref r, const Ident& f, Value v) const {
    State s = *this;
    s.heap[r].fields[f] = std::move(v);
    return s;
  }
  State with_new_object(Ref r, const Ident& cls, const ClassTable& ct) const {
    State s = *this;
    Obj o;
    o.cls = cls;
    if (auto cd = ct.find(cls))
      for (auto& [f, t] : cd->fields) o.fields[f] = default_value(t);
    s.heap[r] = std::move(o);
    return s;
  }

  bool operator==(const State& o) const { return vars == o.vars && heap == o.heap; }
  bool operator<(const State& o) const {
    return vars != o.vars ? vars < o.vars : heap < o.heap;
  }

  std::string dump() const {
    std::string s = "[";
    bool first = true;
    for (auto& [x, v] : vars) {
      if (!first) s += ", ";
      first = false;
      s += x + ": " + value_str(v);
    }
    s += " | alloc: " + value_str(alloc()) + "]";
    for (auto& [r, o] : heap) {
      s += " #" + std::to_string(r.id) + ":" + o.cls + "{";
      bool f1 = true;
      for (auto& [f, v] : o.fields) {
        if (!f1) s += ", ";
        f1 = false;
        s += f + "=" + value_str(v);
      }
      s += "}";
    }
    return s;
  }
};

// ---------------------------------------------------------------------------
// Locations.

struct Location {
  bool is_var = true;
  Ident var;
  Ref ref;
  Ident field;

  static Location mk_var(Ident x) {
    Location l;
    l.is_var = true;
    l.var = std::move(x);
    return l;
  }
  static Location mk_heap(Ref r, Ident f) {
    Location l;
    l.is_var = false;
    l.ref = r;
    l.field = std::move(f);
    return l;
  }
  bool operator==(const Location& o) const {
    return is_var == o.is_var && var == o.var && ref == o.ref && field == o.field;
  }
  bool operator<(const Location& o) const {
    if (is_var != o.is_var) return is_var;
    if (is_var) return var < o.var;
    if (ref != o.ref) return ref < o.ref;
    return field < o.field;
  }
  std::string str() const {
    if (is_var) return var;
    return "#" + std::to_string(ref.id) + "." + field;
  }
};

using LocSet = std::set<Location>;

inline LocSet locations(const State& s, const ClassTable&) {
  LocSet out;
  for (auto& [x, v] : s.vars) out.insert(Location::mk_var(x));
  out.insert(Location::mk_var(kAllocVar));
  for (auto& [r, o] : s.heap)
    for (auto& [f, v] : o.fields) out.insert(Location::mk_heap(r, f));
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation (total by construction).

struct EvalCtx {
  const Program* prog = nullptr;
  const Bounds* bounds = nullptr;
  const ClassTable& classes() const { return prog->classes; }
};

Value eval(const EvalCtx& cx, const State& s, const ExprPtr& e);

inline long long as_int(const Value& v) {
  if (auto p = std::get_if<long long>(&v)) return *p;
  return 0;
}
inline bool as_bool(const Value& v) {
  if (auto p = std::get_if<bool>(&v)) return *p;
  return false;
}
inline Ref as_ref(const Value& v) {
  if (auto p = std::get_if<Ref>(&v)) return *p;
  return kNullRef;
}
inline Region as_region(const Value& v) {
  if (auto p = std::get_if<Region>(&v)) return *p;
  return Region{};
}
inline IntList as_intlist(const Value& v) {
  if (auto p = std::get_if<IntList>(&v)) return *p;
  return IntList{};
}

inline Value eval(const EvalCtx& cx, const State& s, const ExprPtr& e) {
  using K = Expr::K;
  switch (e->k) {
    case K::Var: return s.var(e->name);
    case K::IntLit: return e->num;
    case K::BoolLit: return e->bval;
    case K::Null: return kNullRef;
    case K::EmptyRgn: return Region{};
    case K::Nil: return IntList{};
    case K::Cons: {
      IntList t = as_intlist(eval(cx, s, e->b));
      IntList out;
      out.xs.push_back(as_int(eval(cx, s, e->a)));
      out.xs.insert(out.xs.end(), t.xs.begin(), t.xs.end());
      return out;
    }
    case K::Tail: {
      IntList l = as_intlist(eval(cx, s, e->a));
      if (!l.xs.empty()) l.xs.erase(l.xs.begin());
      return l;
    }
    case K::Sing: {
      Value v = eval(cx, s, e->a);
      Region r;
      if (auto p = std::get_if<Ref>(&v)) r.insert(*p);
      return r;
    }
    case K::Image: {
      Region g = as_region(eval(cx, s, e->a));
      auto ft = cx.classes().field_type(e->name);
      Region out;
      if (!ft) return out;
      const ClassDecl* cd = cx.classes().class_of_field(e->name);
      for (Ref o : g.refs) {
        if (o.is_null()) continue;
        auto ob = s.obj(o);
        if (!ob || !cd || ob->cls != cd->name) continue;
        auto fv = ob->fields.find(e->name);
        if (fv == ob->fields.end()) continue;
        if (ft->is_class()) {
          out.insert(as_ref(fv->second));
        } else if (ft->k == Type::K::Rgn) {
          out = region_union(out, as_region(fv->second));
        }
        // primitive-typed fields contribute nothing
      }
      return out;
    }
    case K::Restrict: {
      Region g = as_region(eval(cx, s, e->a));
      Region out;
      for (Ref o : g.refs)
        if (!o.is_null() && s.type_of(o) == e->name) out.insert(o);
      return out;
    }
    case K::Un: {
      Value a = eval(cx, s, e->a);
      if (e->uop == UnOp::Neg) return -as_int(a);
      return !as_bool(a);
    }
    case K::Bin: {
      Value a = eval(cx, s, e->a);
      Value b = eval(cx, s, e->b);
      switch (e->bop) {
        case BinOp::Add: return as_int(a) + as_int(b);
        case BinOp::Sub: return as_int(a) - as_int(b);
        case BinOp::Mul: return as_int(a) * as_int(b);
        case BinOp::Lt: return as_int(a) < as_int(b);
        case BinOp::Le: return as_int(a) <= as_int(b);
        case BinOp::Gt: return as_int(a) > as_int(b);
        case BinOp::Ge: return as_int(a) >= as_int(b);
        case BinOp::Eq: return a == b;
        case BinOp::Ne: return !(a == b);
        case BinOp::And: return as_bool(a) && as_bool(b);
        case BinOp::Or: return as_bool(a) || as_bool(b);
        case BinOp::Union: return region_union(as_region(a), as_region(b));
        case BinOp::Inter: return region_inter(as_region(a), as_region(b));
        case BinOp::Diff: return region_diff(as_region(a), as_region(b));
        case BinOp::In: {
          Region r = as_region(b);
          if (auto p = std::get_if<Ref>(&a)) return r.contains(*p);
          return false;
        }
        case BinOp::Subset: return region_subset(as_region(a), as_region(b));
      }
      return false;
    }
  }
  return 0LL;
}

// ---------------------------------------------------------------------------
// rlocs / wlocs: the l-values designated by the read (write) effects.

inline void locs_of_atom(const EvalCtx& cx, const State& s, const LeftExpr& le, LocSet& out) {
  if (le.is_var) {
    if (s.has_var(le.var)) out.insert(Location::mk_var(le.var));
    return;
  }
  Region g = as_region(eval(cx, s, le.rgn));
  const ClassDecl* cd = cx.classes().class_of_field(le.field);
  if (!cd) return;
  for (Ref o : g.refs) {
    if (o.is_null()) continue;
    auto ob = s.obj(o);
    if (ob && ob->cls == cd->name) out.insert(Location::mk_heap(o, le.field));
  }
}

inline LocSet rlocs(const EvalCtx& cx, const State& s, const Effect& eff) {
  LocSet out;
  for (auto& a : eff)
    if (a.is_read) locs_of_atom(cx, s, a.le, out);
  return out;
}
inline LocSet wlocs(const EvalCtx& cx, const State& s, const Effect& eff) {
  LocSet out;
  for (auto& a : eff)
    if (!a.is_read) locs_of_atom(cx, s, a.le, out);
  return out;
}

// ---------------------------------------------------------------------------
// State-change functions.

inline LocSet wrttn(const State& s, const State& t) {
  LocSet out;
  for (auto& [x, v] : s.vars) {
    auto it = t.vars.find(x);
    if (it != t.vars.end() && !(it->second == v)) out.insert(Location::mk_var(x));
  }
  if (!(s.alloc() == t.alloc())) out.insert(Location::mk_var(kAllocVar));
  for (auto& [r, o] : s.heap) {
    auto to = t.obj(r);
    if (!to) continue;
    for (auto& [f, v] : o.fields) {
      auto it = to->fields.find(f);
      if (it != to->fields.end() && !(it->second == v))
        out.insert(Location::mk_heap(r, f));
    }
  }
  return out;
}

inline Region fresh_refs(const State& s, const State& t) {
  return region_diff(t.alloc(), s.alloc());
}

inline LocSet fresh_locs(const State& s, const State& t) {
  LocSet out;
  for (Ref r : fresh_refs(s, t).refs) {
    auto o = t.obj(r);
    if (!o) continue;
    for (auto& [f, v] : o->fields) out.insert(Location::mk_heap(r, f));
  }
  for (auto& [x, v] : t.vars)
    if (!s.vars.count(x)) out.insert(Location::mk_var(x));
  return out;
}

// τ can succeed σ: no deallocation, no retyping
inline bool can_succeed(const State& s, const State& t) {
  for (auto& [r, o] : s.heap) {
    auto to = t.obj(r);
    if (!to || to->cls != o.cls) return false;
  }
  return true;
}

// σ ⇝ τ ⊨ ε : ε allows the change from σ to τ
inline bool allows_change(const EvalCtx& cx, const State& s, const State& t, const Effect& eff) {
  if (!can_succeed(s, t)) return false;
  LocSet w = wrttn(s, t);
  LocSet allowed = wlocs(cx, s, eff);
  for (auto& l : w)
    if (!allowed.count(l)) return false;
  return true;
}

// first written location not allowed, for witness reports
inline std::optional<Location> change_violation(const EvalCtx& cx, const State& s,
                                                const State& t, const Effect& eff) {
  if (!can_succeed(s, t)) return Location::mk_var(kAllocVar);
  LocSet allowed = wlocs(cx, s, eff);
  for (auto& l : wrttn(s, t))
    if (!allowed.count(l)) return l;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Refperms: type-respecting partial bijections on non-null references.

struct Refperm {
  std::map<Ref, Ref> fwd, bwd;

  bool add(Ref a, Ref b) {  // returns false on injectivity conflict
    if (a.is_null() || b.is_null()) return false;
    auto f = fwd.find(a);
    if (f != fwd.end()) return f->second == b;
    auto g = bwd.find(b);
    if (g != bwd.end()) return false;
    fwd[a] = b;
    bwd[b] = a;
    return true;
  }
  std::optional<Ref> lookup(Ref a) const {
    auto it = fwd.find(a);
    if (it == fwd.end()) return std::nullopt;
    return it->second;
  }
  std::optional<Ref> lookup_inv(Ref b) const {
    auto it = bwd.find(b);
    if (it == bwd.end()) return std::nullopt;
    return it->second;
  }
  Refperm inverse() const {
    Refperm r;
    r.fwd = bwd;
    r.bwd = fwd;
    return r;
  }
  bool extends(const Refperm& base) const {
    for (auto& [a, b] : base.fwd) {
      auto it = fwd.find(a);
      if (it == fwd.end() || it->second != b) return false;
    }
    return true;
  }
  bool operator==(const Refperm& o) const { return fwd == o.fwd; }
  bool operator<(const Refperm& o) const { return fwd < o.fwd; }

  std::string dump() const {
    std::string s = "{";
    bool first = true;
    for (auto& [a, b] : fwd) {
      if (!first) s += ", ";
      first = false;
      s += "#" + std::to_string(a.id) + "->#" + std::to_string(b.id);
    }
    return s + "}";
  }

  static Refperm identity_on(const Region& r) {
    Refperm p;
    for (Ref x : r.refs)
      if (!x.is_null()) p.add(x, x);
    return p;
  }
};

// value agreement modulo a refperm
inline bool value_related(const Refperm& pi, const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (auto pa = std::get_if<Ref>(&a)) {
    Ref rb = std::get<Ref>(b);
    if (pa->is_null() || rb.is_null()) return pa->is_null() && rb.is_null();
    auto m = pi.lookup(*pa);
    return m && *m == rb;
  }
  if (auto ra = std::get_if<Region>(&a)) {
    const Region& rb = std::get<Region>(b);
    if (ra->size() != rb.size()) return false;
    // π ∪ {(null,null)} must restrict to a total bijection between the two
    Region image;
    for (Ref r : ra->refs) {
      if (r.is_null()) {
        image.insert(kNullRef);
        continue;
      }
      auto m = pi.lookup(r);
      if (!m) return false;
      image.insert(*m);
    }
    return image == rb;
  }
  return a == b;  // ints, bools, math values
}

// ---------------------------------------------------------------------------
// Agreement on a location set (Lagree) and on read effects (agree).

inline bool lagree(const State& s, const State& s2, const Refperm& pi, const LocSet& w) {
  for (const auto& l : w) {
    if (l.is_var) {
      if (!s.has_var(l.var) || !s2.has_var(l.var)) return false;
      if (!value_related(pi, s.var(l.var), s2.var(l.var))) return false;
    } else {
      auto m = pi.lookup(l.ref);
      if (!m) return false;
      auto va = s.field(l.ref, l.field);
      auto vb = s2.field(*m, l.field);
      if (!va || !vb || !value_related(pi, *va, *vb)) return false;
    }
  }
  return true;
}

inline bool agree(const EvalCtx& cx, const State& s, const State& s2, const Refperm& pi,
                  const Effect& eff) {
  return lagree(s, s2, pi, rlocs(cx, s, eff));
}

// two-argument form: identity refperm on the common allocation
inline bool agree_id(const EvalCtx& cx, const State& s, const State& s2, const Effect& eff) {
  Refperm id = Refperm::identity_on(region_inter(s.alloc(), s2.alloc()));
  return agree(cx, s, s2, id, eff);
}

// σ and σ' isomorphic mod π: π is a total type-respecting bijection between
// the allocations and the states agree on all variables and all fields
inline bool state_iso(const EvalCtx& cx, const Refperm& pi, const State& s, const State& s2) {
  Region a = s.alloc(), b = s2.alloc();
  if (a.size() != b.size()) return false;
  if (s.vars.size() != s2.vars.size()) return false;
  for (auto& [x, v] : s.vars)
    if (!s2.vars.count(x)) return false;
  for (Ref r : a.refs) {
    auto m = pi.lookup(r);
    if (!m || !s2.heap.count(*m)) return false;
    if (s.type_of(r) != s2.type_of(*m)) return false;
  }
  for (Ref r : b.refs)
    if (!pi.lookup_inv(r)) return false;
  return lagree(s, s2, pi, locations(s, cx.classes()));
}

// apply a renaming to a whole state (used by tests and iso-reduction)
inline State rename_state(const State& s, const Refperm& pi) {
  auto ren_ref = [&](Ref r) -> Ref {
    if (r.is_null()) return r;
    auto m = pi.lookup(r);
    return m ? *m : r;
  };
  auto ren_val = [&](const Value& v) -> Value {
    if (auto p = std::get_if<Ref>(&v)) return ren_ref(*p);
    if (auto p = std::get_if<Region>(&v)) {
      Region out;
      for (Ref r : p->refs) out.insert(ren_ref(r));
      return out;
    }
    return v;
  };
  State out;
  for (auto& [x, v] : s.vars) out.vars[x] = ren_val(v);
  for (auto& [r, o] : s.heap) {
    Obj no;
    no.cls = o.cls;
    for (auto& [f, v] : o.fields) no.fields[f] = ren_val(v);
    out.heap[ren_ref(r)] = std::move(no);
  }
  return out;
}

}  // namespace regal
