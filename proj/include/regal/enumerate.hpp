#pragma once

// Bounded-exhaustive state enumeration: every state within bounds, in a
// deterministic order, with heap shapes up to the per-class object caps and
// canonical reference naming.  Isomorphic duplicates (same-class object
// permutations) are skipped unless all_isos is requested.

#include <functional>
#include <vector>

#include "regal/sem.hpp"
#include "regal/state.hpp"

namespace regal {

struct VarDecl {
  Ident name;
  Type type;
};

// value domain for a type, relative to a fixed allocation
inline std::vector<Value> value_domain(const EvalCtx& cx, const Bounds& b, const Type& t,
                                       const State& heap_only) {
  std::vector<Value> out;
  switch (t.k) {
    case Type::K::Int:
      for (long long v = b.int_lo; v <= b.int_hi; v++) out.push_back(v);
      break;
    case Type::K::Bool:
      out.push_back(false);
      out.push_back(true);
      break;
    case Type::K::Class:
      out.push_back(kNullRef);
      for (auto& [r, o] : heap_only.heap)
        if (o.cls == t.cls) out.push_back(r);
      break;
    case Type::K::Rgn: {
      Region u = heap_only.alloc();
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
      out.push_back(IntList{});
      std::vector<IntList> cur = {IntList{}};
      for (int len = 1; len <= b.list_len; len++) {
        std::vector<IntList> next;
        for (auto& l : cur)
          for (long long v = b.int_lo; v <= b.int_hi; v++) {
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
      EvalCtx c2 = cx;
      for (auto& v : quantifier_domain(c2, heap_only, Type::partition())) out.push_back(v);
      break;
    }
    case Type::K::Meth:
      break;
  }
  return out;
}

namespace detail {

// same-class permutations for iso reduction
inline void class_permutations(const std::vector<std::vector<Ref>>& groups,
                               std::vector<Refperm>& out) {
  std::vector<std::vector<std::vector<Ref>>> perms_per_group;
  for (auto& g : groups) {
    std::vector<Ref> p = g;
    std::vector<std::vector<Ref>> perms;
    std::sort(p.begin(), p.end());
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    perms_per_group.push_back(std::move(perms));
  }
  std::vector<size_t> idx(groups.size(), 0);
  for (;;) {
    Refperm pi;
    bool identity = true;
    for (size_t gi = 0; gi < groups.size(); gi++) {
      const auto& from = groups[gi];
      const auto& to = perms_per_group[gi][idx[gi]];
      for (size_t i = 0; i < from.size(); i++) {
        pi.add(from[i], to[i]);
        if (from[i] != to[i]) identity = false;
      }
    }
    if (!identity) out.push_back(pi);
    size_t k = 0;
    while (k < idx.size()) {
      if (++idx[k] < perms_per_group[k].size()) break;
      idx[k] = 0;
      k++;
    }
    if (k == idx.size()) break;
  }
}

}  // namespace detail

// Enumerate states over the given variables; yield returns true to stop.
// Returns true if stopped early.
inline bool enum_states(const EvalCtx& cx, const std::vector<VarDecl>& vars, const Bounds& b,
                        const std::function<bool(const State&)>& yield) {
  const ClassTable& ct = cx.classes();
  size_t nclasses = ct.classes.size();
  std::vector<int> caps;
  for (auto& c : ct.classes) caps.push_back(b.heap_cap(c.name));

  std::vector<int> counts(nclasses, 0);
  for (;;) {
    // object layout for this count vector: refs grouped by class
    State base;
    std::vector<std::vector<Ref>> groups(nclasses);
    {
      int next_id = 1;
      for (size_t ci = 0; ci < nclasses; ci++)
        for (int i = 0; i < counts[ci]; i++) {
          Ref r{next_id++};
          groups[ci].push_back(r);
          Obj o;
          o.cls = ct.classes[ci].name;
          base.heap[r] = std::move(o);
        }
    }
    std::vector<Refperm> perms;
    if (!b.all_isos) detail::class_permutations(groups, perms);

    // slots: every field of every object (decl order), then the variables
    struct Slot {
      bool is_field;
      Ref ref;
      Ident name;
      Type type;
    };
    std::vector<Slot> slots;
    for (size_t ci = 0; ci < nclasses; ci++)
      for (Ref r : groups[ci])
        for (auto& [f, t] : ct.classes[ci].fields)
          slots.push_back({true, r, f, t});
    for (auto& v : vars) slots.push_back({false, kNullRef, v.name, v.type});

    std::vector<std::vector<Value>> domains;
    for (auto& s : slots) domains.push_back(value_domain(cx, b, s.type, base));

    std::function<bool(size_t, State&)> go = [&](size_t i, State& st) -> bool {
      if (i == slots.size()) {
        if (!b.all_isos) {
          for (auto& pi : perms) {
            State renamed = rename_state(st, pi);
            if (renamed < st) return false;  // a smaller representative exists
          }
        }
        return yield(st);
      }
      for (auto& v : domains[i]) {
        State next = slots[i].is_field ? st.with_field(slots[i].ref, slots[i].name, v)
                                       : st.with_var(slots[i].name, v);
        if (go(i + 1, next)) return true;
      }
      return false;
    };
    State st = base;
    if (go(0, st)) return true;

    // next count vector
    size_t k = 0;
    while (k < nclasses) {
      if (++counts[k] <= caps[k]) break;
      counts[k] = 0;
      k++;
    }
    if (k == nclasses) break;
  }
  return false;
}

// Convenience: collect all states (use only at small bounds).
inline std::vector<State> all_states(const EvalCtx& cx, const std::vector<VarDecl>& vars,
                                     const Bounds& b) {
  std::vector<State> out;
  enum_states(cx, vars, b, [&](const State& s) {
    out.push_back(s);
    return false;
  });
  return out;
}

// variable declarations of a program's globals
inline std::vector<VarDecl> global_vars(const Program& p) {
  std::vector<VarDecl> out;
  for (auto& [x, t] : p.globals) out.push_back({x, t});
  return out;
}

// variable declarations matching a concrete state (globals take their declared
// types; locals take the type suggested by their current value, with class
// refs resolved against the heap)
inline std::vector<VarDecl> vars_of_state(const Program& p, const State& s,
                                          const std::map<Ident, Type>& local_types) {
  std::vector<VarDecl> out;
  for (auto& [x, v] : s.vars) {
    if (auto t = p.var_type(x)) {
      out.push_back({x, *t});
      continue;
    }
    auto lt = local_types.find(x);
    if (lt != local_types.end()) {
      out.push_back({x, lt->second});
      continue;
    }
    struct V {
      const State* s;
      Type operator()(long long) const { return Type::intt(); }
      Type operator()(bool) const { return Type::boolt(); }
      Type operator()(Ref r) const {
        Ident c = r.is_null() ? Ident{} : s->type_of(r);
        return Type::cls_t(c);
      }
      Type operator()(const Region&) const { return Type::rgn(); }
      Type operator()(const IntList&) const { return Type::intlist(); }
      Type operator()(const Partition&) const { return Type::partition(); }
    };
    out.push_back({x, std::visit(V{&s}, v)});
  }
  return out;
}

}  // namespace regal
