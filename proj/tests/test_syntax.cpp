#include <catch2/catch_amalgamated.hpp>

#include "regal/parser.hpp"
#include "regal/printer.hpp"
#include "regal/syntax_ops.hpp"

using namespace regal;

TEST_CASE("canonicalize removes skip units and right-associates") {
  auto c = parse_command_text("skip; x := 0");
  auto cc = canonicalize(c);
  REQUIRE(cc->k == Command::K::Assign);

  // left-nested sequence normalizes to right-associated form
  auto d = c_seq(c_seq(c_assign("x", mk_int(0)), c_assign("y", mk_int(1))),
                 c_assign("z", mk_int(2)));
  auto dd = canonicalize(d);
  REQUIRE(dd->k == Command::K::Seq);
  REQUIRE(dd->c1->k == Command::K::Assign);
  REQUIRE(dd->c2->k == Command::K::Seq);
  // idempotent
  REQUIRE(command_eq(canonicalize(dd), dd));
}

TEST_CASE("biprogram canonicalization identities") {
  auto b = parse_biprogram_text("( skip | skip )");
  REQUIRE(is_bi_skip(canonicalize_bi(b)));
  auto b2 = parse_biprogram_text("|_ skip _|; ( x := 0 | x := 1 )");
  auto c2 = canonicalize_bi(b2);
  REQUIRE(c2->k == Biprogram::K::BiCom);
}

TEST_CASE("projection of mixed biprogram") {
  // left of (skip|x:=0); |_ y:=0 _|  is  y:=0
  auto b = parse_biprogram_text("( skip | x := 0 ); |_ y := 0 _|");
  auto l = project(b, Side::Left);
  REQUIRE(command_eq(l, canonicalize(parse_command_text("y := 0")), true));
  auto r = project(b, Side::Right);
  auto expect = canonicalize(parse_command_text("x := 0; y := 0"));
  REQUIRE(command_eq(r, expect, true));
}

TEST_CASE("projection of sync is the atom") {
  auto b = parse_biprogram_text("|_ x := y.f _|");
  REQUIRE(project(b, Side::Left)->k == Command::K::Load);
}

TEST_CASE("full alignment projects to the original") {
  auto c = canonicalize(parse_command_text(
      "x := 0; if x = 0 then y := 1 else skip fi; while y > 0 do y := y - 1 od"));
  auto fa = full_align(c);
  REQUIRE(command_eq(project(fa, Side::Left), c));
  REQUIRE(command_eq(project(fa, Side::Right), c));
}

TEST_CASE("full alignment shapes") {
  auto a = canonicalize(parse_command_text("x := 0"));
  REQUIRE(full_align(a)->k == Biprogram::K::Sync);
  auto w = canonicalize(parse_command_text("while b do skip; x := 1 od"));
  auto fw = full_align(w);
  REQUIRE(fw->k == Biprogram::K::BiWhile);
  REQUIRE(rel_formula_eq(fw->gl, r_false()));
  auto l = canonicalize(parse_command_text("let m = x := 0 in m() end"));
  auto fl = full_align(l);
  REQUIRE(fl->k == Biprogram::K::BiLet);
  REQUIRE(command_eq(fl->cl, fl->cr));
}

TEST_CASE("active command and residue") {
  auto c = canonicalize(parse_command_text("x := 0; y := 1"));
  REQUIRE(active(c)->k == Command::K::Assign);
  REQUIRE(active(c)->x == "x");
  REQUIRE(command_eq(after_active(c), canonicalize(parse_command_text("y := 1")), true));
  auto a = canonicalize(parse_command_text("m()"));
  REQUIRE(command_eq(active(a), a));
}

TEST_CASE("top module picks leftmost ecall") {
  ModuleTable mt;
  mt.mdl["p"] = "P";
  mt.mdl["q"] = "Q";
  auto c = c_seq(c_assign("x", mk_int(0)), c_seq(c_ecall("p"), c_ecall("q")));
  REQUIRE(top_module(c, "M", mt) == "P");
  auto d = c_assign("x", mk_int(0));
  REQUIRE(top_module(d, "M", mt) == "M");
  auto e = c_seq(c_ecall("p"), c_ecall("q"));
  REQUIRE(top_module(e, "M", mt) == "P");
}

TEST_CASE("formula and relation formula round trip") {
  const char* fs[] = {
      "x = 0 /\\ y > 1 -> not (r # s)",
      "forall p: Cell. p iin pool -> p.val = 0",
      "s_alloc = alloc /\\ {x}`f subseteq r",
      "Type(r Cell) \\/ exists k: int. k = x",
      "listpub(p, ls)",
  };
  for (auto& s : fs) {
    auto f = parse_formula_text(s);
    auto printed = formula_str(f);
    auto f2 = parse_formula_text(printed);
    INFO(printed);
    REQUIRE(formula_eq(f, f2));
    REQUIRE(formula_str(f2) == printed);
  }
  const char* rs[] = {
      "agree x /\\ agree {p}`val -> later(both(x = 0))",
      "forall ls: intlist | ls: intlist. both(listpub(p, ls)) /\\ ls =:= ls",
      "left(x = 0) -> x + 1 =:= y",
      "eqPartition(lft u, rgt u)",
  };
  for (auto& s : rs) {
    auto f = parse_rel_formula_text(s);
    auto printed = rel_formula_str(f);
    auto f2 = parse_rel_formula_text(printed);
    INFO(printed);
    REQUIRE(rel_formula_eq(f, f2));
    REQUIRE(rel_formula_str(f2) == printed);
  }
}

TEST_CASE("command and biprogram round trip") {
  const char* cs[] = {
      "x := 0; y := x + 1",
      "if x = 0 then y := 1 else y := 2 fi",
      "while x > 0 do x := x - 1 od",
      "var t: Cell in t := new Cell; t.val := v end",
      "let m = c.val := x in m(); y := 0 end",
      "p := q.nxt",
      "r := r ** {p} \\ {q}",
  };
  for (auto& s : cs) {
    auto c = canonicalize(parse_command_text(s));
    auto printed = command_str(c);
    auto c2 = canonicalize(parse_command_text(printed));
    INFO(printed);
    REQUIRE(command_eq(c, c2, true));
  }
  const char* bs[] = {
      "|_ x := 0 _|; ( y := 1 | y := 2 )",
      "if x = 0 | x = 1 then |_ skip _| else ( skip | y := 0 ) fi",
      "while x > 0 | y > 0 . left(x = 0) | right(y = 0) do ( x := x - 1 | y := y - 1 ) od",
      "var t: int | u: int in ( t := 0 | u := 1 ) end",
      "let m = ( x := 0 | x := 1 ) in |_ m() _| end",
  };
  for (auto& s : bs) {
    auto b = canonicalize_bi(parse_biprogram_text(s));
    auto printed = biprogram_str(b);
    INFO(printed);
    auto b2 = canonicalize_bi(parse_biprogram_text(printed));
    REQUIRE(biprogram_eq(b, b2, true));
  }
}

TEST_CASE("weaving-style equality ignores labels, guards unify with holes") {
  auto a = parse_biprogram_text("( x := 0 | x := 0 )");
  auto b = parse_biprogram_text("( x := 0 | x := 0 )");
  REQUIRE(biprogram_eq(a, b, true));
  // within one program, structurally identical branches stay distinct
  auto c = parse_command_text("if b then x := 0 else x := 0 fi");
  REQUIRE(command_eq(c->c1, c->c2, true));
  REQUIRE(!command_eq(c->c1, c->c2, false));
  auto w1 = parse_biprogram_text("while x > 0 | x > 0 . _ | _ do |_ x := x - 1 _| od");
  auto w2 = parse_biprogram_text(
      "while x > 0 | x > 0 . left(x = 1) | right(x = 2) do |_ x := x - 1 _| od");
  REQUIRE(biprogram_eq(w1, w2, true, true));
  REQUIRE(!biprogram_eq(w1, w2, true, false));
}
