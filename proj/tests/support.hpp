#pragma once

#include <cstdlib>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doccalc/doc/bridge.hpp"
#include "doccalc/doc/node.hpp"
#include "doccalc/kernel/ast.hpp"
#include "doccalc/kernel/eval.hpp"
#include "doccalc/kernel/stdlib.hpp"
#include "doccalc/kernel/typecheck.hpp"
#include "doccalc/reactive/reactive.hpp"
#include "doccalc/template/desugar.hpp"
#include "doccalc/util/overloaded.hpp"

namespace support {

using doccalc::kernel::CaseArm;
using doccalc::kernel::Expr;
using doccalc::kernel::Template;
using doccalc::kernel::TemplatePart;
using doccalc::kernel::TyCtxt;
using doccalc::kernel::Type;
namespace klib = doccalc::kernel::stdlib;
namespace docm = doccalc::doc;

inline std::uint64_t test_seed(std::uint64_t fallback = 42) {
  if (const char* env = std::getenv("DOCCALC_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return fallback;
}

struct Rng {
  std::mt19937_64 engine;

  explicit Rng(std::uint64_t seed) : engine(seed) {}

  int range(int lo, int hi) {  // inclusive
    return static_cast<int>(engine() % static_cast<std::uint64_t>(hi - lo + 1)) +
           lo;
  }
  bool chance(int percent) { return range(1, 100) <= percent; }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<size_t>(range(0, static_cast<int>(items.size()) - 1))];
  }
  std::string word() {
    static const std::vector<std::string> pool = {"a", "b",  "hi", "doc",
                                                  "x", "yz", "q",  ""};
    return pool[static_cast<size_t>(range(0, static_cast<int>(pool.size()) - 1))];
  }
};

// --- sequence-level oracles (independent of the kernel) ----------------------

using Strings = std::vector<std::string>;

inline Strings oracle_append(const Strings& a, const Strings& b) {
  Strings out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Strings oracle_flatten(const std::vector<Strings>& xs) {
  Strings out;
  for (const auto& x : xs) out.insert(out.end(), x.begin(), x.end());
  return out;
}

inline std::string oracle_join(const Strings& xs) {
  std::string out;
  for (const auto& x : xs) out += x;
  return out;
}

inline Strings oracle_rev(const Strings& xs) {
  return Strings(xs.rbegin(), xs.rend());
}

// --- kernel list helpers for tests ------------------------------------------

inline Expr str_list(const Strings& xs) {
  std::vector<Expr> items;
  items.reserve(xs.size());
  for (const auto& x : xs) items.push_back(Expr::str_lit(x));
  return klib::list_from(Type::str(), items);
}

inline Strings decode_str_list(const Expr& value) {
  auto items = klib::list_to_values(value);
  if (!items) throw std::runtime_error("expected a string list value");
  Strings out;
  for (const auto& item : *items) out.push_back(docm::decode_str(item));
  return out;
}

inline Expr eval_ok(const Expr& e) { return doccalc::kernel::eval(e); }

inline Type check_closed(const Expr& e) {
  return doccalc::kernel::typecheck(TyCtxt(), e);
}

// --- random well-typed kernel terms -----------------------------------------

struct TermGen {
  Rng& rng;
  int fuel_types = 0;

  explicit TermGen(Rng& r) : rng(r) {}

  Type gen_type(int depth) {
    int roll = rng.range(1, depth > 0 ? 10 : 5);
    switch (roll) {
      case 1:
      case 2:
      case 3: return Type::str();
      case 4:
      case 5: return Type::boolean();
      case 6:
      case 7: return Type::arrow(gen_type(depth - 1), gen_type(depth - 1));
      case 8: {
        std::vector<std::pair<std::string, Type>> fields;
        int n = rng.range(1, 2);
        for (int i = 0; i < n; ++i)
          fields.emplace_back("f" + std::to_string(i), gen_type(depth - 1));
        return Type::record(std::move(fields));
      }
      case 9: {
        std::vector<std::pair<std::string, Type>> variants;
        int n = rng.range(1, 2);
        for (int i = 0; i < n; ++i)
          variants.emplace_back("v" + std::to_string(i), gen_type(depth - 1));
        return Type::sum(std::move(variants));
      }
      default: return klib::list_type(gen_type(depth - 1));
    }
  }

  using Env = std::vector<std::pair<std::string, Type>>;

  Expr gen(const Env& env, const Type& want, int depth) {
    // reuse a variable of the right type when possible
    if (rng.chance(30)) {
      std::vector<const std::pair<std::string, Type>*> hits;
      for (const auto& binding : env) {
        if (binding.second == want) hits.push_back(&binding);
      }
      if (!hits.empty()) {
        return Expr::var(
            hits[static_cast<size_t>(rng.range(0, static_cast<int>(hits.size()) - 1))]
                ->first);
      }
    }
    if (depth <= 0) return gen_base(env, want);
    switch (rng.range(1, 12)) {
      case 1: {  // let
        Type bound_ty = gen_type(1);
        Expr bound = gen(env, bound_ty, depth - 1);
        Env inner = env;
        std::string name = "v" + std::to_string(env.size());
        inner.emplace_back(name, bound_ty);
        return Expr::let_in(name, bound, gen(inner, want, depth - 1));
      }
      case 2: {  // if
        return Expr::if_then_else(gen(env, Type::boolean(), depth - 1),
                                  gen(env, want, depth - 1),
                                  gen(env, want, depth - 1));
      }
      case 3: {  // application
        Type arg_ty = gen_type(1);
        Expr fn = gen(env, Type::arrow(arg_ty, want), depth - 1);
        Expr arg = gen(env, arg_ty, depth - 1);
        return Expr::app(fn, arg);
      }
      case 4: {  // projection
        Type other = gen_type(1);
        Type rec = Type::record({{"l", want}, {"r", other}});
        return Expr::project(gen(env, rec, depth - 1), "l");
      }
      case 5: {  // case over a small sum
        Type payload = gen_type(1);
        Type sum = Type::sum({{"one", payload}, {"two", Type::str()}});
        Expr scrutinee = gen(env, sum, depth - 1);
        Env inner = env;
        std::string binder = "c" + std::to_string(env.size());
        Env one_env = env;
        one_env.emplace_back(binder, payload);
        Env two_env = env;
        two_env.emplace_back(binder, Type::str());
        return Expr::case_of(scrutinee,
                             {CaseArm{"one", binder, gen(one_env, want, depth - 1)},
                              CaseArm{"two", binder, gen(two_env, want, depth - 1)}});
      }
      case 6: {  // type application with an unused parameter
        return Expr::ty_app(Expr::ty_lambda("t", gen(env, want, depth - 1)),
                            gen_type(0));
      }
      case 7: {  // unpack of a fresh pack, binder unused
        Type witness = gen_type(0);
        Expr packed = Expr::pack(gen(env, witness, depth - 1), witness,
                                 Type::exists("h", Type::var("h")));
        std::string binder = "p" + std::to_string(env.size());
        return Expr::unpack(binder, "h", packed, gen(env, want, depth - 1));
      }
      case 8: {  // case over an unfolded list
        Type elem = gen_type(0);
        Type list_ty = klib::list_type(elem);
        Expr scrutinee = Expr::unfold(list_ty, gen(env, list_ty, depth - 1));
        std::string binder = "u" + std::to_string(env.size());
        Env cons_env = env;
        cons_env.emplace_back(
            binder, Type::record({{"hd", elem}, {"tail", list_ty}}));
        Env nil_env = env;
        nil_env.emplace_back(binder, Type::record({}));
        return Expr::case_of(
            scrutinee, {CaseArm{"nil", binder, gen(nil_env, want, depth - 1)},
                        CaseArm{"cons", binder, gen(cons_env, want, depth - 1)}});
      }
      case 9: {  // terminating fix (binder unused)
        return Expr::fix("f" + std::to_string(env.size()), want,
                         gen(env, want, depth - 1));
      }
      default: return gen_structural(env, want, depth);
    }
  }

  Expr gen_structural(const Env& env, const Type& want, int depth) {
    return std::visit(
        doccalc::overloaded{
            [&](const doccalc::kernel::StrTy&) {
              if (depth > 0 && rng.chance(50)) {
                if (rng.chance(30)) {
                  return Expr::prim(doccalc::kernel::PrimName::Join, {},
                                    {gen(env, klib::list_type(Type::str()),
                                         depth - 1)});
                }
                return Expr::concat(gen(env, Type::str(), depth - 1),
                                    gen(env, Type::str(), depth - 1));
              }
              return Expr::str_lit(rng.word());
            },
            [&](const doccalc::kernel::BoolTy&) {
              if (depth > 0 && rng.chance(40)) {
                return Expr::prim(doccalc::kernel::PrimName::StrEq, {},
                                  {gen(env, Type::str(), depth - 1),
                                   gen(env, Type::str(), depth - 1)});
              }
              return Expr::bool_lit(rng.chance(50));
            },
            [&](const doccalc::kernel::ArrowTy& a) {
              std::string param = "x" + std::to_string(env.size());
              Env inner = env;
              inner.emplace_back(param, a.param);
              return Expr::lambda(param, a.param,
                                  gen(inner, a.result, depth - 1));
            },
            [&](const doccalc::kernel::RecordTy& r) {
              std::vector<std::pair<std::string, Expr>> fields;
              for (const auto& [l, ft] : r.fields)
                fields.emplace_back(l, gen(env, ft, depth - 1));
              return Expr::record(std::move(fields));
            },
            [&](const doccalc::kernel::SumTy& s) {
              const auto& pickv = s.variants[static_cast<size_t>(
                  rng.range(0, static_cast<int>(s.variants.size()) - 1))];
              return Expr::inject(gen(env, pickv.second, depth - 1),
                                  pickv.first, want);
            },
            [&](const doccalc::kernel::MuTy&) {
              auto elem = klib::list_elem_type(want);
              if (!elem) {
                // non-list mu types are not generated as targets
                return Expr::fold(
                    want, gen(env,
                              doccalc::kernel::subst_type(
                                  std::get<doccalc::kernel::MuTy>(want.node())
                                      .body,
                                  std::get<doccalc::kernel::MuTy>(want.node())
                                      .var,
                                  want),
                              0));
              }
              if (depth > 0 && rng.chance(40)) {
                switch (rng.range(1, 4)) {
                  case 1:
                    return Expr::prim(doccalc::kernel::PrimName::Append, {*elem},
                                      {gen(env, want, depth - 1),
                                       gen(env, want, depth - 1)});
                  case 2:
                    return Expr::prim(doccalc::kernel::PrimName::Rev, {*elem},
                                      {gen(env, want, depth - 1)});
                  case 3: {
                    Type src_elem = gen_type(0);
                    Expr fn = gen(env, Type::arrow(src_elem, *elem), depth - 1);
                    Expr xs =
                        gen(env, klib::list_type(src_elem), depth - 1);
                    return Expr::prim(doccalc::kernel::PrimName::Map,
                                      {src_elem, *elem}, {fn, xs});
                  }
                  default:
                    return Expr::prim(
                        doccalc::kernel::PrimName::Flatten, {*elem},
                        {gen(env, klib::list_type(want), depth - 1)});
                }
              }
              int n = rng.range(0, 2);
              std::vector<Expr> items;
              for (int i = 0; i < n; ++i)
                items.push_back(gen(env, *elem, depth > 0 ? depth - 1 : 0));
              return klib::list_from(*elem, items);
            },
            [&](const auto&) {  // forall/exists/var targets are not generated
              return Expr::str_lit("?");
            },
        },
        want.node());
  }

  Expr gen_base(const Env& env, const Type& want) {
    return gen_structural(env, want, 0);
  }
};

// --- random native documents (refs/reforest) ----------------------------------

struct DocGen {
  Rng& rng;
  int next_id = 0;

  explicit DocGen(Rng& r) : rng(r) {}

  docm::NodeList gen_inlines(int depth) {
    docm::NodeList out;
    int n = rng.range(0, 3);
    for (int i = 0; i < n; ++i) {
      if (depth > 0 && rng.chance(25)) {
        out.push_back(docm::node("bold", {}, gen_inlines(depth - 1)));
      } else {
        out.push_back(docm::text(rng.word()));
      }
    }
    return out;
  }

  // valid article with uniquely-identified sections; collects ids
  docm::NodeList gen_article(int depth, std::vector<std::string>& ids) {
    docm::NodeList out;
    int n = rng.range(1, 3);
    for (int i = 0; i < n; ++i) {
      if (depth > 0 && rng.chance(45)) {
        docm::AttrList attrs;
        if (rng.chance(70)) {
          std::string id = "s" + std::to_string(next_id++);
          ids.push_back(id);
          attrs.emplace_back("id", id);
        }
        out.push_back(
            docm::node("section", attrs, gen_article(depth - 1, ids)));
      } else {
        out.push_back(docm::node("para", {}, gen_inlines(2)));
      }
    }
    return out;
  }

  void sprinkle_refs(docm::NodeList& doc, const std::vector<std::string>& ids) {
    if (ids.empty()) return;
    for (auto& n : doc) {
      if (auto* s = std::get_if<docm::StructNode>(&n)) {
        if (s->name == "para" && rng.chance(40)) {
          s->children.push_back(
              docm::node("ref", {{"target", rng.pick(ids)}}, {}));
        } else {
          sprinkle_refs(s->children, ids);
        }
      }
    }
  }
};

// --- random templates -----------------------------------------------------------

namespace tplns = doccalc::tpl;

struct TplGen {
  Rng& rng;
  bool frag_expressible_only = false;  // restrict to parts both strategies take
  int next_var = 0;

  using Env = std::vector<std::pair<std::string, Type>>;

  explicit TplGen(Rng& r) : rng(r) {}

  Expr gen_str_expr(const Env& env, int depth) {
    std::vector<std::string> str_vars;
    for (const auto& [name, ty] : env) {
      if (ty == Type::str()) str_vars.push_back(name);
    }
    if (!str_vars.empty() && rng.chance(40)) {
      return Expr::var(rng.pick(str_vars));
    }
    if (depth > 0 && rng.chance(30)) {
      return Expr::concat(gen_str_expr(env, depth - 1),
                          gen_str_expr(env, depth - 1));
    }
    return Expr::str_lit(rng.word());
  }

  Expr gen_list_expr(const Env& env, tplns::ContextType ctx) {
    if (ctx == tplns::ContextType::Str) {
      Strings xs;
      int n = rng.range(0, 3);
      for (int i = 0; i < n; ++i) xs.push_back(rng.word());
      return str_list(xs);
    }
    if (ctx == tplns::ContextType::Node) {
      docm::NodeList doc;
      int n = rng.range(0, 2);
      for (int i = 0; i < n; ++i) doc.push_back(docm::text(rng.word()));
      return docm::encode_doc(doc);
    }
    return klib::nil(tplns::context_elem_type(ctx));
  }

  Expr gen_source_list(const Env& env) {
    Strings xs;
    int n = rng.range(0, 3);
    for (int i = 0; i < n; ++i) xs.push_back(rng.word());
    (void)env;
    return str_list(xs);
  }

  Template gen(Env env, tplns::ContextType ctx, int depth, int max_parts) {
    Template t;
    int parts = rng.range(0, max_parts);
    for (int i = 0; i < parts; ++i) {
      t.parts.push_back(gen_part(env, ctx, depth));
    }
    return t;
  }

  TemplatePart gen_part(Env& env, tplns::ContextType ctx, int depth) {
    bool tree = ctx != tplns::ContextType::Str;
    for (;;) {
      switch (rng.range(1, 9)) {
        case 1:
        case 2: return doccalc::kernel::LitPart{rng.word()};
        case 3: return doccalc::kernel::ExprPart{gen_str_expr(env, 1)};
        case 4: {
          std::string name = "t" + std::to_string(next_var++);
          doccalc::kernel::SetPart part{name, gen_str_expr(env, 1)};
          env.emplace_back(name, Type::str());
          return part;
        }
        case 5: {
          if (depth <= 0) continue;
          return doccalc::kernel::IfPart{Expr::bool_lit(rng.chance(50)),
                                         gen(env, ctx, depth - 1, 2),
                                         gen(env, ctx, depth - 1, 2)};
        }
        case 6: {
          if (depth <= 0) continue;
          std::string binder = "it" + std::to_string(next_var++);
          Env body_env = env;
          body_env.emplace_back(binder, Type::str());
          return doccalc::kernel::ForeachPart{gen_source_list(env), binder,
                                              gen(body_env, ctx, depth - 1, 2)};
        }
        case 7: {
          if (!tree || depth <= 0) continue;
          std::vector<doccalc::kernel::NodeAttr> attrs;
          if (rng.chance(40)) {
            attrs.push_back(
                doccalc::kernel::NodeAttr{"k", gen_str_expr(env, 0)});
          }
          static const std::vector<std::string> tags = {"para", "bold", "item",
                                                        "group"};
          return doccalc::kernel::NodePart{rng.pick(tags), std::move(attrs),
                                           gen(env, ctx, depth - 1, 2)};
        }
        case 8: {
          if (frag_expressible_only || ctx == tplns::ContextType::Frag)
            continue;
          return doccalc::kernel::SplicePart{gen_list_expr(env, ctx)};
        }
        default: {
          if (frag_expressible_only || ctx != tplns::ContextType::React)
            continue;
          return doccalc::kernel::ComponentPart{Expr::str_lit("counter"),
                                                gen_str_expr(env, 0)};
        }
      }
    }
  }
};

// Exhaustive enumeration of templates up to a part budget, over a small
// grammar with a fixed expression pool. Sub-template sizes count toward the
// budget.
struct TplEnum {
  std::vector<Template> by_size[5];  // templates with exactly N parts

  TplEnum() {
    by_size[0].push_back(Template{});
    for (int size = 1; size <= 4; ++size) {
      for (int head = 1; head <= size; ++head) {
        for (const auto& part : parts_of_size(head)) {
          for (const auto& tail : by_size[size - head]) {
            Template t;
            t.parts.push_back(part);
            t.parts.insert(t.parts.end(), tail.parts.begin(),
                           tail.parts.end());
            by_size[size].push_back(std::move(t));
          }
        }
      }
    }
  }

  std::vector<Template> all() const {
    std::vector<Template> out;
    for (int size = 1; size <= 4; ++size) {
      out.insert(out.end(), by_size[size].begin(), by_size[size].end());
    }
    return out;
  }

 private:
  std::vector<TemplatePart> parts_of_size(int size) const {
    std::vector<TemplatePart> out;
    if (size == 1) {
      out.push_back(doccalc::kernel::LitPart{"a"});
      for (const char* name : {"u", "y", "n1", "it"}) {
        out.push_back(doccalc::kernel::ExprPart{Expr::var(name)});
      }
      out.push_back(doccalc::kernel::SetPart{"y", Expr::var("u")});
      out.push_back(doccalc::kernel::SplicePart{Expr::var("xs")});
      out.push_back(doccalc::kernel::SplicePart{Expr::var("ns")});
    }
    int inner = size - 1;
    if (inner >= 0) {
      for (int left = 0; left <= inner; ++left) {
        for (const auto& t1 : by_size[left]) {
          for (const auto& t2 : by_size[inner - left]) {
            out.push_back(
                doccalc::kernel::IfPart{Expr::var("b"), t1, t2});
          }
        }
      }
      for (const auto& body : by_size[inner]) {
        out.push_back(doccalc::kernel::ForeachPart{Expr::var("xs"), "it", body});
      }
      for (const auto& children : by_size[inner]) {
        out.push_back(doccalc::kernel::NodePart{"item", {}, children});
        out.push_back(doccalc::kernel::NodePart{
            "para",
            {doccalc::kernel::NodeAttr{"k", Expr::var("u")}},
            children});
      }
    }
    return out;
  }
};

// Typing context shared by the enumeration: u, b, xs, ns, n1.
inline TyCtxt enum_ctx() {
  return TyCtxt()
      .with_term("u", Type::str())
      .with_term("b", Type::boolean())
      .with_term("xs", klib::list_type(Type::str()))
      .with_term("ns", klib::list_type(klib::node_ty()))
      .with_term("n1", klib::node_ty());
}

// --- random reactive documents ----------------------------------------------

namespace reactive = doccalc::reactive;

struct ReactGen {
  Rng& rng;
  reactive::Runtime& rt;
  int next_static = 0;
  int next_toggle = 0;
  int next_nested = 0;
  std::vector<std::string> static_ids;

  ReactGen(Rng& r, reactive::Runtime& runtime) : rng(r), rt(runtime) {}

  reactive::ReactNode gen_node(int depth) {
    switch (rng.range(1, 10)) {
      case 1:
      case 2: return reactive::ReactNode(reactive::RText{rng.word()});
      case 3: {
        std::string id = "st" + std::to_string(next_static++);
        static_ids.push_back(id);
        std::vector<reactive::ReactNode> children;
        if (depth > 0 && rng.chance(50)) children.push_back(gen_node(depth - 1));
        return reactive::ReactNode(
            reactive::RNode{"section", {{"id", id}}, std::move(children)});
      }
      case 4: {
        std::vector<reactive::ReactNode> children;
        int n = rng.range(0, 2);
        for (int i = 0; i < n && depth > 0; ++i)
          children.push_back(gen_node(depth - 1));
        return reactive::ReactNode(
            reactive::RNode{"group", {}, std::move(children)});
      }
      case 5:
      case 6:
        return rt.instantiate_key("counter", Expr::str_lit("|"));
      case 7:
        return rt.instantiate_key("static-text", Expr::str_lit(rng.word()));
      case 8:
      case 9:
        return rt.instantiate_key(
            "toggle-section",
            Expr::str_lit("tg" + std::to_string(next_toggle++)));
      default: {
        static const std::vector<std::string> kinds = {
            "counter", "static-text", "toggle-section"};
        std::string child = rng.pick(kinds);
        std::string cprops = child == "toggle-section"
                                 ? "ng" + std::to_string(next_nested++)
                                 : rng.word();
        return rt.instantiate_key(
            "nest", Expr::record({{"child", Expr::str_lit(child)},
                                  {"cprops", Expr::str_lit(cprops)}}));
      }
    }
  }

  std::vector<reactive::ReactNode> gen_doc(int max_roots) {
    std::vector<reactive::ReactNode> roots;
    // a stable section so refs always resolve
    std::string anchor = "st" + std::to_string(next_static++);
    static_ids.push_back(anchor);
    roots.push_back(
        reactive::ReactNode(reactive::RNode{"section", {{"id", anchor}}, {}}));
    int n = rng.range(1, max_roots);
    for (int i = 0; i < n; ++i) roots.push_back(gen_node(2));
    // a paragraph referring to a stable section
    roots.push_back(reactive::ReactNode(reactive::RNode{
        "para",
        {},
        {reactive::ReactNode(
            reactive::RNode{"ref", {{"target", rng.pick(static_ids)}}, {}})}}));
    return roots;
  }

  void collect_kinds(const reactive::ReactNode& n,
                     std::vector<std::pair<reactive::InstId, std::string>>& out) {
    std::visit(doccalc::overloaded{
                   [&](const reactive::RText&) {},
                   [&](const reactive::RNode& x) {
                     for (const auto& c : x.children) collect_kinds(c, out);
                   },
                   [&](const reactive::RInst& x) {
                     out.emplace_back(x.inst->id, x.inst->com->key);
                     collect_kinds(x.inst->node, out);
                   },
               },
               n);
  }

  std::vector<reactive::SignalMap> gen_trace(
      const std::vector<reactive::ReactNode>& roots, int steps) {
    std::vector<std::pair<reactive::InstId, std::string>> kinds;
    for (const auto& n : roots) collect_kinds(n, kinds);
    std::vector<reactive::SignalMap> trace;
    for (int s = 0; s < steps; ++s) {
      reactive::SignalMap signals;
      for (const auto& [id, key] : kinds) {
        if (!rng.chance(30)) continue;
        if (key == "counter") signals[id] = "click";
        else if (key == "toggle-section") signals[id] = "toggle";
        else if (key == "nest") signals[id] = "ping";
        else signals[id] = "noop";
      }
      trace.push_back(std::move(signals));
    }
    return trace;
  }
};

// --- random fragments -----------------------------------------------------------

inline docm::NodeFrag gen_frag(Rng& rng, int depth) {
  if (depth <= 0 || rng.chance(40)) {
    if (rng.chance(60)) return docm::frag_base(docm::fnode_text(rng.word()));
    return docm::frag_base(docm::fnode_struct(
        rng.chance(50) ? "para" : "bold", {},
        depth > 0 ? gen_frag(rng, depth - 1)
                  : docm::frag_children({})));
  }
  std::vector<docm::NodeFrag> items;
  int n = rng.range(0, 3);
  for (int i = 0; i < n; ++i) items.push_back(gen_frag(rng, depth - 1));
  return docm::frag_children(std::move(items));
}

}  // namespace support
