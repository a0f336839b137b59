#include "doccalc/kernel/stdlib.hpp"

#include <algorithm>
#include <set>

#include "doccalc/kernel/typecheck.hpp"

#include "doccalc/util/overloaded.hpp"

namespace doccalc::kernel::stdlib {

namespace {

std::string fresh_var(const std::string& base, const Type& avoid_in) {
  auto fvs = free_type_vars(avoid_in);
  std::set<std::string> avoid(fvs.begin(), fvs.end());
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "'" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

// direct construction, usable while the cached singletons initialize
Type raw_list_type(const Type& elem) {
  std::string v = fresh_var("a", elem);
  return Type::mu(
      v, Type::sum({{"nil", Type::record({})},
                    {"cons", Type::record({{"hd", elem},
                                           {"tail", Type::var(v)}})}}));
}

Type struct_node_record(const Type& children) {
  return Type::record(
      {{"name", Type::str()},
       {"attrs", raw_list_type(pair_type(Type::str(), Type::str()))},
       {"children", children}});
}

Type frag_type(const Type& base) {
  std::string v = fresh_var("f", base);
  return Type::mu(v, Type::sum({{"base", base},
                                {"children", raw_list_type(Type::var(v))}}));
}

}  // namespace

namespace {

struct ListShape {
  Type list;
  Type unrolled;  // the sum body with the mu variable substituted away
};

ListShape build_list_shape(const Type& elem) {
  Type list = raw_list_type(elem);
  const auto& mu = std::get<MuTy>(list.node());
  Type unrolled = subst_type(mu.body, mu.var, list);
  return ListShape{std::move(list), std::move(unrolled)};
}

// The handful of element types the desugarer uses constantly share their
// shapes; other element types build a fresh one.
ListShape list_shape(const Type& elem) {
  static const ListShape str_shape = build_list_shape(Type::str());
  static const ListShape node_shape = build_list_shape(node_ty());
  static const ListShape frag_shape = build_list_shape(node_frag());
  static const ListShape react_shape = build_list_shape(react_node());
  if (&elem.node() == &Type::str().node()) return str_shape;
  if (&elem.node() == &node_ty().node()) return node_shape;
  if (&elem.node() == &node_frag().node()) return frag_shape;
  if (&elem.node() == &react_node().node()) return react_shape;
  return build_list_shape(elem);
}

}  // namespace

Type list_type(const Type& elem) { return list_shape(elem).list; }

Type pair_type(const Type& fst, const Type& snd) {
  return Type::record({{"fst", fst}, {"snd", snd}});
}

Type node_ty() {
  static const Type cached = Type::mu(
      "n",
      Type::sum({{"text", Type::str()},
                 {"node", struct_node_record(raw_list_type(Type::var("n")))}}));
  return cached;
}

Type fnode_ty() {
  static const Type cached = Type::mu(
      "fn",
      Type::sum({{"text", Type::str()},
                 {"node", struct_node_record(frag_type(Type::var("fn")))}}));
  return cached;
}

Type node_frag() {
  static const Type cached = frag_type(fnode_ty());
  return cached;
}

Type instance_ty() {
  static const Type cached = Type::exists(
      "p", Type::record({{"com", Type::str()}, {"props", Type::var("p")}}));
  return cached;
}

Type react_node() {
  static const Type cached = Type::mu(
      "r",
      Type::sum({{"text", Type::str()},
                 {"node", struct_node_record(raw_list_type(Type::var("r")))},
                 {"inst", instance_ty()}}));
  return cached;
}

std::optional<Type> list_elem_type(const Type& t) {
  const auto* mu = std::get_if<MuTy>(&t.node());
  if (!mu) return std::nullopt;
  const auto* sum = std::get_if<SumTy>(&mu->body.node());
  if (!sum || sum->variants.size() != 2) return std::nullopt;
  std::optional<Type> hd;
  bool saw_nil = false;
  for (const auto& [label, vt] : sum->variants) {
    if (label == "nil") {
      const auto* rec = std::get_if<RecordTy>(&vt.node());
      if (!rec || !rec->fields.empty()) return std::nullopt;
      saw_nil = true;
    } else if (label == "cons") {
      const auto* rec = std::get_if<RecordTy>(&vt.node());
      if (!rec || rec->fields.size() != 2) return std::nullopt;
      std::optional<Type> tail;
      for (const auto& [fl, ft] : rec->fields) {
        if (fl == "hd") hd = ft;
        else if (fl == "tail") tail = ft;
      }
      if (!hd || !tail) return std::nullopt;
      const auto* tv = std::get_if<TyVar>(&tail->node());
      if (!tv || tv->name != mu->var) return std::nullopt;
    } else {
      return std::nullopt;
    }
  }
  if (!saw_nil || !hd) return std::nullopt;
  auto hd_fvs = free_type_vars(*hd);
  if (std::find(hd_fvs.begin(), hd_fvs.end(), mu->var) != hd_fvs.end())
    return std::nullopt;
  return hd;
}

std::string type_display_name(const Type& t) {
  if (t == node_ty()) return "NodeTy";
  if (t == react_node()) return "ReactNode";
  if (t == node_frag()) return "NodeFrag";
  if (t == fnode_ty()) return "FNode";
  if (t == instance_ty()) return "Instance";
  if (auto elem = list_elem_type(t)) return type_display_name(*elem) + " list";
  if (const auto* arrow = std::get_if<ArrowTy>(&t.node())) {
    return "(" + type_display_name(arrow->param) + " -> " +
           type_display_name(arrow->result) + ")";
  }
  return type_to_string(t);
}

namespace {

Type unroll_mu(const Type& mu_type) {
  const auto& mu = std::get<MuTy>(mu_type.node());
  return subst_type(mu.body, mu.var, mu_type);
}

}  // namespace

Expr make_variant(const Type& mu_type, const std::string& label, Expr payload) {
  static const Type node_unrolled = unroll_mu(node_ty());
  static const Type fnode_unrolled = unroll_mu(fnode_ty());
  static const Type frag_unrolled = unroll_mu(node_frag());
  static const Type react_unrolled = unroll_mu(react_node());
  Type unrolled = [&] {
    if (&mu_type.node() == &node_ty().node()) return node_unrolled;
    if (&mu_type.node() == &fnode_ty().node()) return fnode_unrolled;
    if (&mu_type.node() == &node_frag().node()) return frag_unrolled;
    if (&mu_type.node() == &react_node().node()) return react_unrolled;
    return unroll_mu(mu_type);
  }();
  return Expr::fold(mu_type, Expr::inject(std::move(payload), label, unrolled));
}

Expr pair(Expr fst, Expr snd) {
  return Expr::record({{"fst", std::move(fst)}, {"snd", std::move(snd)}});
}

Expr nil(const Type& elem) {
  ListShape shape = list_shape(elem);
  return Expr::fold(shape.list,
                    Expr::inject(Expr::record({}), "nil", shape.unrolled));
}

Expr cons(const Type& elem, Expr head, Expr tail) {
  ListShape shape = list_shape(elem);
  return Expr::fold(
      shape.list,
      Expr::inject(
          Expr::record({{"hd", std::move(head)}, {"tail", std::move(tail)}}),
          "cons", shape.unrolled));
}

Expr list_from(const Type& elem, const std::vector<Expr>& items) {
  Expr acc = nil(elem);
  for (auto it = items.rbegin(); it != items.rend(); ++it)
    acc = cons(elem, *it, acc);
  return acc;
}

Expr from_literal(const Type& elem, const std::vector<Expr>& values) {
  for (size_t i = 0; i < values.size(); ++i) {
    Type found = typecheck(TyCtxt(), values[i]);
    if (found != elem) {
      throw TypeError(TypeErrorKind::TypeMismatch,
                      "list element type mismatch: expected " +
                          type_display_name(elem) + ", found " +
                          type_display_name(found),
                      "element " + std::to_string(i));
    }
  }
  return list_from(elem, values);
}

std::optional<std::vector<Expr>> list_to_values(const Expr& value) {
  std::vector<Expr> out;
  const Expr* cur = &value;
  for (;;) {
    const auto* fold = std::get_if<FoldE>(&cur->node());
    if (!fold) return std::nullopt;
    const auto* inj = std::get_if<InjectE>(&fold->value.node());
    if (!inj) return std::nullopt;
    if (inj->label == "nil") return out;
    if (inj->label != "cons") return std::nullopt;
    const auto* rec = std::get_if<RecordE>(&inj->value.node());
    if (!rec) return std::nullopt;
    const Expr* hd = nullptr;
    const Expr* tail = nullptr;
    for (const auto& [l, f] : rec->fields) {
      if (l == "hd") hd = &f;
      else if (l == "tail") tail = &f;
    }
    if (!hd || !tail) return std::nullopt;
    out.push_back(*hd);
    cur = tail;
  }
}

Expr text_node(Expr text) {
  return make_variant(node_ty(), "text", std::move(text));
}

Expr struct_node(Expr name, Expr attrs, Expr children) {
  return make_variant(node_ty(), "node",
                      Expr::record({{"name", std::move(name)},
                                    {"attrs", std::move(attrs)},
                                    {"children", std::move(children)}}));
}

Expr text_react(Expr text) {
  return make_variant(react_node(), "text", std::move(text));
}

Expr struct_react(Expr name, Expr attrs, Expr children) {
  return make_variant(react_node(), "node",
                      Expr::record({{"name", std::move(name)},
                                    {"attrs", std::move(attrs)},
                                    {"children", std::move(children)}}));
}

Expr inst_react(Expr key, Expr props, const Type& props_ty) {
  Expr payload = Expr::pack(
      Expr::record({{"com", std::move(key)}, {"props", std::move(props)}}),
      props_ty, instance_ty());
  return make_variant(react_node(), "inst", std::move(payload));
}

Expr text_fnode(Expr text) {
  return make_variant(fnode_ty(), "text", std::move(text));
}

Expr struct_fnode(Expr name, Expr attrs, Expr children_frag) {
  return make_variant(fnode_ty(), "node",
                      Expr::record({{"name", std::move(name)},
                                    {"attrs", std::move(attrs)},
                                    {"children", std::move(children_frag)}}));
}

Expr frag_base(Expr fnode) {
  return make_variant(node_frag(), "base", std::move(fnode));
}

Expr frag_children(Expr frag_list) {
  return make_variant(node_frag(), "children", std::move(frag_list));
}

Expr attr_list(const std::vector<std::pair<std::string, Expr>>& attrs) {
  Type pr = pair_type(Type::str(), Type::str());
  std::vector<Expr> items;
  items.reserve(attrs.size());
  for (const auto& [k, v] : attrs)
    items.push_back(pair(Expr::str_lit(k), v));
  return list_from(pr, items);
}

Expr elim_frags_term() {
  static const Expr cached = [] {
    Type nt = node_ty();
    Type nl = list_type(nt);
    Type nf = node_frag();
    Type fn = fnode_ty();
    Expr ef = Expr::var("elim");
    Expr f = Expr::var("f");

    Expr text_case = cons(nt, text_node(Expr::var("s")), nil(nt));
    Expr node_case = cons(
        nt,
        struct_node(Expr::project(Expr::var("r"), "name"),
                    Expr::project(Expr::var("r"), "attrs"),
                    Expr::app(ef, Expr::project(Expr::var("r"), "children"))),
        nil(nt));
    Expr base_arm = Expr::case_of(Expr::unfold(fn, Expr::var("n")),
                                  {CaseArm{"text", "s", text_case},
                                   CaseArm{"node", "r", node_case}});
    Expr children_arm =
        Expr::prim(PrimName::Flatten, {nt},
                   {Expr::prim(PrimName::Map, {nf, nl}, {ef, Expr::var("l")})});
    Expr body = Expr::case_of(Expr::unfold(nf, f),
                              {CaseArm{"base", "n", base_arm},
                               CaseArm{"children", "l", children_arm}});
    return Expr::fix("elim", Type::arrow(nf, nl),
                     Expr::lambda("f", nf, std::move(body)));
  }();
  return cached;
}

Expr reforest_term(bool literal) {
  auto build = [](bool keep_empty) {
    Type nt = node_ty();
    Type nl = list_type(nt);
    Type str = Type::str();

    auto streq = [&](Expr a, Expr b) {
      return Expr::prim(PrimName::StrEq, {}, {std::move(a), std::move(b)});
    };

    // isBlock : Str -> Bool
    Expr is_block_body = Expr::if_then_else(
        streq(Expr::var("nm"), Expr::str_lit("para")), Expr::bool_lit(true),
        Expr::if_then_else(
            streq(Expr::var("nm"), Expr::str_lit("section")),
            Expr::bool_lit(true),
            Expr::if_then_else(streq(Expr::var("nm"), Expr::str_lit("figure")),
                               Expr::bool_lit(true),
                               streq(Expr::var("nm"), Expr::str_lit("list")))));
    Expr is_block_fn = Expr::lambda("nm", str, std::move(is_block_body));

    // emitPar : NodeTy list -> NodeTy list -> NodeTy list
    auto para_of = [&](Expr children) {
      return struct_node(Expr::str_lit("para"), attr_list({}),
                         std::move(children));
    };
    Expr rev_par = Expr::prim(PrimName::Rev, {nt}, {Expr::var("par")});
    Expr emit_always = cons(nt, para_of(rev_par), Expr::var("rest"));
    Expr emit_body =
        keep_empty ? emit_always
                   : Expr::case_of(Expr::unfold(nl, Expr::var("par")),
                                   {CaseArm{"nil", "u", Expr::var("rest")},
                                    CaseArm{"cons", "c", emit_always}});
    Expr emit_fn =
        Expr::lambda("par", nl, Expr::lambda("rest", nl, std::move(emit_body)));

    auto emit = [&](Expr par, Expr rest) {
      return Expr::app(Expr::app(Expr::var("emitPar"), std::move(par)),
                       std::move(rest));
    };
    auto recurse = [&](Expr ns, Expr par) {
      return Expr::app(Expr::app(Expr::var("reforest"), std::move(ns)),
                       std::move(par));
    };

    Expr hd = Expr::project(Expr::var("c"), "hd");
    Expr tl = Expr::project(Expr::var("c"), "tail");

    Expr text_arm = Expr::let_in(
        "t", tl,
        Expr::if_then_else(
            streq(Expr::var("s"), Expr::str_lit("\n\n")),
            emit(Expr::var("par"), recurse(Expr::var("t"), nil(nt))),
            recurse(Expr::var("t"),
                    cons(nt, text_node(Expr::var("s")), Expr::var("par")))));

    Expr block_node = struct_node(
        Expr::project(Expr::var("r"), "name"),
        Expr::project(Expr::var("r"), "attrs"),
        recurse(Expr::project(Expr::var("r"), "children"), nil(nt)));
    Expr inline_node = struct_node(Expr::project(Expr::var("r"), "name"),
                                   Expr::project(Expr::var("r"), "attrs"),
                                   Expr::project(Expr::var("r"), "children"));
    Expr node_arm = Expr::let_in(
        "t", tl,
        Expr::if_then_else(
            Expr::app(Expr::var("isBlock"),
                      Expr::project(Expr::var("r"), "name")),
            emit(Expr::var("par"),
                 cons(nt, block_node, recurse(Expr::var("t"), nil(nt)))),
            recurse(Expr::var("t"), cons(nt, inline_node, Expr::var("par")))));

    Expr cons_arm = Expr::case_of(Expr::unfold(nt, hd),
                                  {CaseArm{"text", "s", text_arm},
                                   CaseArm{"node", "r", node_arm}});
    Expr loop_body = Expr::case_of(
        Expr::unfold(nl, Expr::var("ns")),
        {CaseArm{"nil", "u", emit(Expr::var("par"), nil(nt))},
         CaseArm{"cons", "c", cons_arm}});

    Expr loop =
        Expr::fix("reforest", Type::arrow(nl, Type::arrow(nl, nl)),
                  Expr::lambda("ns", nl, Expr::lambda("par", nl, loop_body)));

    return Expr::let_in(
        "isBlock", std::move(is_block_fn),
        Expr::let_in("emitPar", std::move(emit_fn), std::move(loop)));
  };
  static const Expr literal_term = build(true);
  static const Expr grouped_term = build(false);
  return literal ? literal_term : grouped_term;
}

}  // namespace doccalc::kernel::stdlib
