#pragma once

// Parsed declarations of .rl / .brl files, prior to module resolution.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regal/ast.hpp"

namespace regal {

// Bounds for the exhaustive checker; a file's `bounds { ... }` block and the
// CLI `--bounds` flag override fields of the defaults.
struct Bounds {
  long long int_lo = -1, int_hi = 2;    // domain of int variables and fields
  long long qint_lo = -4, qint_hi = 4;  // range of int quantifiers
  int heap_default = 3;                 // max objects per class
  std::map<Ident, int> heap_per_class;
  long long fuel = 500;
  int list_len = 3;      // max length of enumerated int lists
  int weave_depth = 12;  // max weaving-derivation length
  int pred_fuel = 64;    // recursion fuel for primitive predicates
  bool all_isos = false;
  int jobs = 1;

  int heap_cap(const Ident& cls) const {
    auto it = heap_per_class.find(cls);
    return it == heap_per_class.end() ? heap_default : it->second;
  }
  std::string summary() const;
};

struct MethDecl {
  Ident name;
  Spec spec;
  bool has_spec = false;
  std::optional<RelSpec> relspec;  // `rel requires/ensures` clauses
  CommandPtr body;                 // absent in interface declarations
  int line = 0;
};

struct InterfaceDecl {
  Ident name;
  std::vector<Ident> imports;
  Effect boundary;
  FormulaPtr public_inv;
  std::vector<MethDecl> meths;
  int line = 0;
};

struct ImplDecl {
  Ident name, iface;
  FormulaPtr private_inv;
  std::vector<MethDecl> meths;
  int line = 0;
};

struct BiMethDecl {
  Ident name;
  std::optional<RelSpec> relspec;
  BiprogramPtr body;
  int line = 0;
};

struct BimoduleDecl {
  Ident name, left_impl, right_impl;
  RelFormulaPtr coupling;
  std::vector<BiMethDecl> meths;
  int line = 0;
};

struct BareBi {
  Ident name;
  BiprogramPtr body;
  int line = 0;
};

struct CheckDecl {
  enum class Kind { Unary, Rel, Link, Weave };
  Kind kind = Kind::Unary;
  Ident target;                    // meth / bimeth / bimodule / weave source
  Ident target2;                   // weave destination
  std::vector<Ident> using_impls;  // implementations providing context bodies
  Ident client;                    // link: client method
  int line = 0;
};

struct SourceUnit {
  std::vector<ClassDecl> classes;
  std::vector<std::pair<Ident, Type>> globals;
  std::vector<Ident> main_imports;
  std::vector<InterfaceDecl> interfaces;
  std::vector<ImplDecl> impls;
  std::vector<BimoduleDecl> bimodules;
  std::vector<MethDecl> main_meths;
  std::vector<BiMethDecl> bimeths;
  std::vector<BareBi> bis;
  std::vector<CheckDecl> checks;
  std::optional<Bounds> bounds;

  bool empty() const {
    return classes.empty() && globals.empty() && interfaces.empty() && impls.empty() &&
           bimodules.empty() && main_meths.empty() && bimeths.empty() && bis.empty() &&
           checks.empty();
  }
};

inline std::string Bounds::summary() const {
  std::string s = "ints=" + std::to_string(int_lo) + ".." + std::to_string(int_hi) +
                  " heap=" + std::to_string(heap_default);
  for (auto& [k, v] : heap_per_class) s += " heap:" + k + "=" + std::to_string(v);
  s += " fuel=" + std::to_string(fuel) + " len=" + std::to_string(list_len) +
       " qints=" + std::to_string(qint_lo) + ".." + std::to_string(qint_hi);
  if (all_isos) s += " all-isos";
  return s;
}

}  // namespace regal
