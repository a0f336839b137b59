#include "doccalc/template/check.hpp"

#include <random>

#include "doccalc/doc/bridge.hpp"
#include "doccalc/kernel/stdlib.hpp"
#include "doccalc/kernel/typecheck.hpp"
#include "doccalc/template/desugar.hpp"
#include "doccalc/template/typecheck.hpp"

namespace doccalc::tpl {

using kernel::Expr;
using kernel::Template;
using kernel::TemplatePart;
using kernel::TplKind;
using kernel::TyCtxt;
using kernel::Type;
namespace klib = kernel::stdlib;

namespace {

// Well-typed-by-construction template generator. Set parts extend the
// environment for the remainder of their part list; foreach binders scope
// over the loop body.
struct Generator {
  std::mt19937_64 rng;
  int next_var = 0;

  explicit Generator(std::uint64_t seed) : rng(seed) {}

  int range(int lo, int hi) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)) +
           lo;
  }
  bool chance(int percent) { return range(1, 100) <= percent; }

  std::string word() {
    static const char* pool[] = {"a", "b", "doc", "x", ""};
    return pool[range(0, 4)];
  }

  using Env = std::vector<std::pair<std::string, Type>>;

  Expr str_expr(const Env& env, int depth) {
    std::vector<std::string> vars;
    for (const auto& [name, ty] : env) {
      if (ty == Type::str()) vars.push_back(name);
    }
    if (!vars.empty() && chance(40)) {
      return Expr::var(vars[static_cast<size_t>(
          range(0, static_cast<int>(vars.size()) - 1))]);
    }
    if (depth > 0 && chance(30)) {
      return Expr::concat(str_expr(env, depth - 1), str_expr(env, depth - 1));
    }
    return Expr::str_lit(word());
  }

  Expr str_list_expr() {
    std::vector<Expr> items;
    int n = range(0, 3);
    for (int i = 0; i < n; ++i) items.push_back(Expr::str_lit(word()));
    return klib::list_from(Type::str(), items);
  }

  Expr splice_expr(ContextType ctx) {
    if (ctx == ContextType::Str) return str_list_expr();
    if (ctx == ContextType::Node) {
      doc::NodeList nodes;
      int n = range(0, 2);
      for (int i = 0; i < n; ++i) nodes.push_back(doc::text(word()));
      return doc::encode_doc(nodes);
    }
    return klib::nil(context_elem_type(ctx));
  }

  Template gen(Env env, ContextType ctx, int depth, int max_parts) {
    Template t;
    int parts = range(0, max_parts);
    for (int i = 0; i < parts; ++i) t.parts.push_back(part(env, ctx, depth));
    return t;
  }

  TemplatePart part(Env& env, ContextType ctx, int depth) {
    for (;;) {
      switch (range(1, 9)) {
        case 1:
        case 2: return kernel::LitPart{word()};
        case 3: return kernel::ExprPart{str_expr(env, 1)};
        case 4: {
          std::string name = "s" + std::to_string(next_var++);
          kernel::SetPart set{name, str_expr(env, 1)};
          env.emplace_back(name, Type::str());
          return set;
        }
        case 5: {
          if (depth <= 0) continue;
          return kernel::IfPart{Expr::bool_lit(chance(50)),
                                gen(env, ctx, depth - 1, 2),
                                gen(env, ctx, depth - 1, 2)};
        }
        case 6: {
          if (depth <= 0) continue;
          std::string binder = "i" + std::to_string(next_var++);
          Env body_env = env;
          body_env.emplace_back(binder, Type::str());
          return kernel::ForeachPart{str_list_expr(), binder,
                                     gen(body_env, ctx, depth - 1, 2)};
        }
        case 7: {
          if (ctx == ContextType::Str || depth <= 0) continue;
          std::vector<kernel::NodeAttr> attrs;
          if (chance(40)) {
            attrs.push_back(kernel::NodeAttr{"k", str_expr(env, 0)});
          }
          static const char* tags[] = {"para", "bold", "item", "group"};
          return kernel::NodePart{tags[range(0, 3)], std::move(attrs),
                                  gen(env, ctx, depth - 1, 2)};
        }
        case 8: {
          if (ctx == ContextType::Frag) continue;
          return kernel::SplicePart{splice_expr(ctx)};
        }
        default: {
          if (ctx != ContextType::React) continue;
          return kernel::ComponentPart{Expr::str_lit("counter"),
                                       str_expr(env, 0)};
        }
      }
    }
  }
};

}  // namespace

Theorem1Report check_theorem1(std::uint64_t seed, std::size_t count) {
  Generator gen(seed);
  TyCtxt ctx = TyCtxt().with_term("u", Type::str());
  Generator::Env env = {{"u", Type::str()}};
  static const TplKind kinds[] = {TplKind::StrTpl, TplKind::TreeTpl,
                                  TplKind::FragTpl, TplKind::FlowTpl,
                                  TplKind::ReactTpl};

  Theorem1Report report;
  for (std::size_t trial = 0; trial < count; ++trial) {
    TplKind kind = kinds[gen.range(0, 4)];
    Template t = gen.gen(env, context_for_kind(kind), 3, 8);
    Expr sugared = Expr::tpl(kind, t);
    Type before = kernel::typecheck(ctx, sugared);
    Expr lowered = desugar_expr(ctx, sugared);
    Type after = kernel::typecheck(ctx, lowered);
    ++report.checked;
    if (!(before == after) || kernel::contains_template(lowered)) {
      report.failures.push_back(Theorem1Case{
          sugared, klib::type_display_name(before),
          klib::type_display_name(after)});
    }
  }
  return report;
}

}  // namespace doccalc::tpl
