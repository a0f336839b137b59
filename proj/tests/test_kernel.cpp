#include <doctest.h>

#include "support.hpp"

using namespace support;
using doccalc::kernel::EvalError;
using doccalc::kernel::EvalErrorKind;
using doccalc::kernel::eval;
using doccalc::kernel::is_value;
using doccalc::kernel::step;
using doccalc::kernel::TypeError;
using doccalc::kernel::TypeErrorKind;
using doccalc::kernel::typecheck;

namespace {

Expr aba_program() {
  return Expr::let_in(
      "x", Expr::str_lit("a"),
      Expr::concat(Expr::concat(Expr::var("x"), Expr::str_lit("b")),
                   Expr::var("x")));
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("typecheck basics") {
  CHECK(check_closed(Expr::concat(Expr::str_lit("a"), Expr::str_lit("b"))) ==
        Type::str());
  CHECK(check_closed(aba_program()) == Type::str());

  Expr ill = Expr::app(
      Expr::lambda("x", Type::str(), Expr::var("x")), Expr::bool_lit(true));
  CHECK_THROWS_AS(check_closed(ill), TypeError);
  try {
    check_closed(ill);
  } catch (const TypeError& err) {
    CHECK(err.kind == TypeErrorKind::TypeMismatch);
  }

  CHECK_THROWS_AS(check_closed(Expr::var("ghost")), TypeError);
}

TEST_CASE("typecheck records sums and binders") {
  Expr rec = Expr::record({{"a", Expr::str_lit("x")},
                           {"b", Expr::bool_lit(true)}});
  CHECK(check_closed(Expr::project(rec, "b")) == Type::boolean());
  CHECK_THROWS_AS(check_closed(Expr::project(rec, "missing")), TypeError);

  Type sum = Type::sum({{"l", Type::str()}, {"r", Type::boolean()}});
  Expr inj = Expr::inject(Expr::str_lit("v"), "l", sum);
  CHECK(check_closed(inj) == sum);

  // arms must cover exactly the variants
  Expr partial = Expr::case_of(inj, {CaseArm{"l", "x", Expr::var("x")}});
  CHECK_THROWS_AS(check_closed(partial), TypeError);
  try {
    check_closed(partial);
  } catch (const TypeError& err) {
    CHECK(err.kind == TypeErrorKind::NonExhaustiveCase);
  }

  Expr extra = Expr::case_of(
      inj, {CaseArm{"l", "x", Expr::var("x")},
            CaseArm{"r", "x", Expr::str_lit("s")},
            CaseArm{"zz", "x", Expr::str_lit("s")}});
  CHECK_THROWS_AS(check_closed(extra), TypeError);

  Expr full = Expr::case_of(
      inj, {CaseArm{"l", "x", Expr::var("x")},
            CaseArm{"r", "x", Expr::str_lit("s")}});
  CHECK(check_closed(full) == Type::str());
}

TEST_CASE("typecheck polymorphism") {
  // forall a. a -> a, applied at Str
  Expr id = Expr::ty_lambda(
      "a", Expr::lambda("x", Type::var("a"), Expr::var("x")));
  CHECK(check_closed(id) ==
        Type::forall("a", Type::arrow(Type::var("a"), Type::var("a"))));
  Expr inst = Expr::ty_app(id, Type::str());
  CHECK(check_closed(inst) == Type::arrow(Type::str(), Type::str()));
  CHECK(docm::decode_str(eval(Expr::app(inst, Expr::str_lit("ok")))) == "ok");

  // pack/unpack round trip
  Type iface = Type::exists("a", Type::record({{"val", Type::var("a")},
                                               {"show", Type::arrow(
                                                            Type::var("a"),
                                                            Type::str())}}));
  Expr packed = Expr::pack(
      Expr::record({{"val", Expr::str_lit("s")},
                    {"show", Expr::lambda("x", Type::str(), Expr::var("x"))}}),
      Type::str(), iface);
  CHECK(check_closed(packed) == iface);
  Expr use = Expr::unpack(
      "m", "a", packed,
      Expr::app(Expr::project(Expr::var("m"), "show"),
                Expr::project(Expr::var("m"), "val")));
  CHECK(check_closed(use) == Type::str());
  CHECK(docm::decode_str(eval(use)) == "s");

  // the witness type may not escape
  Expr escape = Expr::unpack("m", "a", packed,
                             Expr::project(Expr::var("m"), "val"));
  CHECK_THROWS_AS(check_closed(escape), TypeError);
}

TEST_CASE("step rules") {
  Expr beta = Expr::app(Expr::lambda("x", Type::str(), Expr::var("x")),
                        Expr::str_lit("a"));
  auto stepped = step(beta);
  REQUIRE(stepped.has_value());
  CHECK(*stepped == Expr::str_lit("a"));

  Expr cat = Expr::concat(Expr::str_lit("a"), Expr::str_lit("b"));
  CHECK(*step(cat) == Expr::str_lit("ab"));

  Type lst = klib::list_type(Type::str());
  Expr folded = str_list({"a"});
  Expr unfolded = Expr::unfold(lst, folded);
  auto inner = step(unfolded);
  REQUIRE(inner.has_value());
  const auto* fold = std::get_if<doccalc::kernel::FoldE>(&folded.node());
  REQUIRE(fold != nullptr);
  CHECK(*inner == fold->value);

  CHECK_FALSE(step(Expr::str_lit("v")).has_value());
  CHECK_THROWS_AS(step(Expr::var("free")), EvalError);
}

TEST_CASE("evaluation of the aba program") {
  CHECK(docm::decode_str(eval(aba_program())) == "aba");
}

TEST_CASE("substitution renames binders to avoid capture") {
  using doccalc::kernel::subst;
  // (\x. y)[y := x] must not capture the free x
  Expr body = Expr::lambda("x", Type::str(), Expr::var("y"));
  Expr substituted = subst(body, "y", Expr::var("x"));
  const auto& lam = std::get<doccalc::kernel::LambdaE>(substituted.node());
  CHECK(lam.param != "x");
  CHECK(lam.body == Expr::var("x"));

  // shadowing stops substitution
  Expr shadowed = Expr::lambda("y", Type::str(), Expr::var("y"));
  CHECK(subst(shadowed, "y", Expr::str_lit("v")) == shadowed);

  // same for type substitution under a type binder
  Type scheme = Type::forall("a", Type::var("b"));
  Type renamed = doccalc::kernel::subst_type(scheme, "b", Type::var("a"));
  const auto& fa = std::get<doccalc::kernel::ForallTy>(renamed.node());
  CHECK(fa.var != "a");
  CHECK(fa.body == Type::var("a"));
}

TEST_CASE("type equality is alpha-equivalence with label sets") {
  CHECK(klib::list_type(Type::str()) ==
        Type::mu("z", Type::sum({{"nil", Type::record({})},
                                 {"cons", Type::record({{"hd", Type::str()},
                                                        {"tail", Type::var("z")}})}})));
  // record label order is insignificant
  CHECK(Type::record({{"a", Type::str()}, {"b", Type::boolean()}}) ==
        Type::record({{"b", Type::boolean()}, {"a", Type::str()}}));
  // label sets must match exactly
  CHECK(Type::sum({{"l", Type::str()}}) !=
        Type::sum({{"l", Type::str()}, {"r", Type::str()}}));
  // bound versus free variables differ
  CHECK(Type::forall("a", Type::var("a")) != Type::forall("a", Type::var("b")));
  CHECK(Type::var("a") == Type::var("a"));
  CHECK(Type::var("a") != Type::var("b"));
}

TEST_CASE("typing contexts resolve to the most recent binding") {
  TyCtxt ctx = TyCtxt()
                   .with_term("x", Type::str())
                   .with_term("x", Type::boolean());
  CHECK(*ctx.lookup_term("x") == Type::boolean());
  CHECK_FALSE(ctx.lookup_term("y").has_value());

  // the template fact is replaced, not stacked
  TyCtxt tpl = ctx.with_tpl(Type::str()).with_tpl(klib::node_ty());
  CHECK(*tpl.current_tpl() == klib::node_ty());
  // term bindings survive entering a template context
  CHECK(*tpl.lookup_term("x") == Type::boolean());
}

TEST_CASE("primitive reductions match sequence oracles") {
  CHECK(docm::decode_str(eval(Expr::prim(doccalc::kernel::PrimName::Join, {},
                                         {str_list({"a", "b", "c"})}))) ==
        "abc");

  Expr bang = Expr::lambda("x", Type::str(),
                           Expr::concat(Expr::var("x"), Expr::str_lit("!")));
  Expr mapped = Expr::prim(doccalc::kernel::PrimName::Map,
                           {Type::str(), Type::str()},
                           {bang, str_list({"a", "b"})});
  CHECK(decode_str_list(eval(mapped)) == Strings{"a!", "b!"});

  Rng rng(test_seed());
  for (int trial = 0; trial < 200; ++trial) {
    Strings xs, ys;
    int n = rng.range(0, 4);
    for (int i = 0; i < n; ++i) xs.push_back(rng.word());
    int m = rng.range(0, 4);
    for (int i = 0; i < m; ++i) ys.push_back(rng.word());

    CHECK(decode_str_list(eval(Expr::prim(
              doccalc::kernel::PrimName::Append, {Type::str()},
              {str_list(xs), str_list(ys)}))) == oracle_append(xs, ys));
    Strings banged;
    for (const auto& x : xs) banged.push_back(x + "!");
    CHECK(decode_str_list(eval(Expr::prim(
              doccalc::kernel::PrimName::Map, {Type::str(), Type::str()},
              {bang, str_list(xs)}))) == banged);
    CHECK(decode_str_list(eval(Expr::prim(doccalc::kernel::PrimName::Rev,
                                          {Type::str()}, {str_list(xs)}))) ==
          oracle_rev(xs));
    CHECK(docm::decode_str(eval(Expr::prim(doccalc::kernel::PrimName::Join, {},
                                           {str_list(xs)}))) ==
          oracle_join(xs));

    Type lst = klib::list_type(Type::str());
    std::vector<Expr> nested;
    nested.push_back(str_list(xs));
    nested.push_back(str_list(ys));
    Expr flattened = Expr::prim(doccalc::kernel::PrimName::Flatten,
                                {Type::str()},
                                {klib::list_from(lst, nested)});
    CHECK(decode_str_list(eval(flattened)) ==
          oracle_flatten({xs, ys}));
  }
}

TEST_CASE("list helpers") {
  // empty literal is the nil encoding
  CHECK(str_list({}) == klib::nil(Type::str()));
  CHECK(str_list({"a"}) ==
        klib::cons(Type::str(), Expr::str_lit("a"), klib::nil(Type::str())));

  CHECK(klib::from_literal(Type::str(), {Expr::str_lit("a")}) ==
        str_list({"a"}));
  CHECK(klib::from_literal(Type::str(), {}) == klib::nil(Type::str()));
  CHECK_THROWS_AS(klib::from_literal(Type::str(), {Expr::bool_lit(true)}),
                  TypeError);

  Expr rev = Expr::prim(doccalc::kernel::PrimName::Rev, {Type::str()},
                        {str_list({"a", "b"})});
  CHECK(decode_str_list(eval(rev)) == Strings{"b", "a"});

  // encoded lists typecheck at the list type
  CHECK(check_closed(str_list({"a", "b"})) == klib::list_type(Type::str()));
}

TEST_CASE("str-eq and if") {
  Expr cmp = Expr::prim(doccalc::kernel::PrimName::StrEq, {},
                        {Expr::str_lit("click"), Expr::str_lit("click")});
  Expr branch = Expr::if_then_else(cmp, Expr::str_lit("yes"),
                                   Expr::str_lit("no"));
  CHECK(docm::decode_str(eval(branch)) == "yes");
}

TEST_CASE("fuel exhaustion on divergence") {
  Expr spin = Expr::fix("x", Type::str(),
                        Expr::concat(Expr::var("x"), Expr::str_lit("a")));
  CHECK(check_closed(spin) == Type::str());
  CHECK_THROWS_AS(eval(spin, 1000), EvalError);
  try {
    eval(spin, 1000);
  } catch (const EvalError& err) {
    CHECK(err.kind == EvalErrorKind::FuelExhausted);
  }
}

TEST_CASE("metatheory at desk scale (sampled)") {
  Rng rng(test_seed());
  TermGen gen(rng);
  int checked_steps = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Type want = gen.gen_type(2);
    Expr e = gen.gen({}, want, 4);
    Type ty = check_closed(e);
    CHECK(ty == want);
    Expr cur = e;
    for (int i = 0; i < 200; ++i) {
      auto next = step(cur);
      if (!next) {
        CHECK(is_value(cur));
        break;
      }
      // determinism: stepping twice gives the same term
      auto again = step(cur);
      REQUIRE(again.has_value());
      CHECK(*next == *again);
      // preservation
      CHECK(check_closed(*next) == ty);
      ++checked_steps;
      cur = *next;
    }
  }
  CHECK(checked_steps > 1000);
}

}  // TEST_SUITE
