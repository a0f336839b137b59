#include "doccalc/template/desugar.hpp"

#include "doccalc/kernel/stdlib.hpp"
#include "doccalc/util/overloaded.hpp"

namespace doccalc::tpl {

using kernel::CaseArm;
using kernel::Expr;
using kernel::Template;
using kernel::TemplatePart;
using kernel::TyCtxt;
using kernel::Type;
namespace klib = kernel::stdlib;

namespace {

std::string at_part(size_t index) {
  return "template part " + std::to_string(index);
}

// Element coercion for literal parts.
Expr elaborate_lit(ContextType tctx, const std::string& s) {
  switch (tctx) {
    case ContextType::Str: return Expr::str_lit(s);
    case ContextType::Node: return klib::text_node(Expr::str_lit(s));
    case ContextType::React: return klib::text_react(Expr::str_lit(s));
    case ContextType::Frag:
      return klib::frag_base(klib::text_fnode(Expr::str_lit(s)));
  }
  return Expr::str_lit(s);
}

// Type-directed elaboration of a bare expression part: a Str expression in
// a tree context becomes a text node; an element-typed expression is used
// as-is.
Expr elaborate_expr(const TyCtxt& ctx, ContextType tctx, const Expr& e,
                    size_t index) {
  Type elem = context_elem_type(tctx);
  Type found = kernel::typecheck(ctx, e);
  if (found == elem) return e;
  if (found == Type::str()) {
    switch (tctx) {
      case ContextType::Node: return klib::text_node(e);
      case ContextType::React: return klib::text_react(e);
      case ContextType::Frag: return klib::frag_base(klib::text_fnode(e));
      case ContextType::Str: break;
    }
  }
  throw kernel::TypeError(kernel::TypeErrorKind::TypeMismatch,
                          "expected " + klib::type_display_name(elem) +
                              ", found " + klib::type_display_name(found),
                          at_part(index));
}

struct TemplateDesugar {
  const DesugarOptions& opts;

  Expr expr(const TyCtxt& ctx, const Expr& e);

  Expr parts(const TyCtxt& ctx, ContextType tctx,
             const std::vector<TemplatePart>& ps, size_t index) {
    Type elem = context_elem_type(tctx);
    if (index >= ps.size()) return klib::nil(elem);
    auto rest = [&](const TyCtxt& c) { return parts(c, tctx, ps, index + 1); };
    return std::visit(
        overloaded{
            [&](const kernel::LitPart& p) {
              return klib::cons(elem, elaborate_lit(tctx, p.value), rest(ctx));
            },
            [&](const kernel::ExprPart& p) {
              Expr inner = expr(ctx, p.expr);
              return klib::cons(elem, elaborate_expr(ctx, tctx, inner, index),
                                rest(ctx));
            },
            [&](const kernel::SetPart& p) {
              Expr bound = expr(ctx, p.expr);
              Type bound_ty = kernel::typecheck(ctx, bound);
              return Expr::let_in(p.name, bound,
                                  rest(ctx.with_term(p.name, bound_ty)));
            },
            [&](const kernel::IfPart& p) {
              Expr cond = expr(ctx, p.cond);
              Expr then_list = parts(ctx, tctx, p.then_parts.parts, 0);
              Expr else_list = parts(ctx, tctx, p.else_parts.parts, 0);
              Expr branch =
                  Expr::if_then_else(cond, then_list, else_list);
              if (tctx == ContextType::Frag) {
                return klib::cons(elem, klib::frag_children(branch), rest(ctx));
              }
              // splice of the chosen branch onto the tail
              return Expr::prim(kernel::PrimName::Append, {elem},
                                {branch, rest(ctx)});
            },
            [&](const kernel::ForeachPart& p) {
              Expr source = expr(ctx, p.source);
              Type source_ty = kernel::typecheck(ctx, source);
              auto item_ty = klib::list_elem_type(source_ty);
              if (!item_ty) {
                throw kernel::TypeError(
                    kernel::TypeErrorKind::TypeMismatch,
                    "foreach source must be a list, found " +
                        klib::type_display_name(source_ty),
                    at_part(index));
              }
              TyCtxt body_ctx = ctx.with_term(p.binder, *item_ty);
              Expr body_list = parts(body_ctx, tctx, p.body.parts, 0);
              if (tctx == ContextType::Frag) {
                Expr per_item = Expr::lambda(p.binder, *item_ty,
                                             klib::frag_children(body_list));
                Expr mapped =
                    Expr::prim(kernel::PrimName::Map,
                               {*item_ty, klib::node_frag()}, {per_item, source});
                return klib::cons(elem, klib::frag_children(mapped), rest(ctx));
              }
              // splice (flatten (map (\x. body) source)) onto the tail
              Expr per_item = Expr::lambda(p.binder, *item_ty, body_list);
              Expr mapped = Expr::prim(kernel::PrimName::Map,
                                       {*item_ty, klib::list_type(elem)},
                                       {per_item, source});
              Expr flat = Expr::prim(kernel::PrimName::Flatten, {elem}, {mapped});
              return Expr::prim(kernel::PrimName::Append, {elem},
                                {flat, rest(ctx)});
            },
            [&](const kernel::NodePart& p) {
              if (tctx == ContextType::Str) {
                throw DesugarError(DesugarErrorKind::NodeInStrContext,
                                   "node part '" + p.name +
                                       "' is not allowed in a string template",
                                   at_part(index));
              }
              std::vector<std::pair<std::string, Expr>> attrs;
              attrs.reserve(p.attrs.size());
              for (const auto& attr : p.attrs)
                attrs.emplace_back(attr.key, expr(ctx, attr.value));
              Expr attr_list = klib::attr_list(attrs);
              Expr children = parts(ctx, tctx, p.children.parts, 0);
              Expr name = Expr::str_lit(p.name);
              Expr node = [&] {
                switch (tctx) {
                  case ContextType::Node:
                    return klib::struct_node(name, attr_list, children);
                  case ContextType::React:
                    return klib::struct_react(name, attr_list, children);
                  case ContextType::Frag:
                    return klib::frag_base(klib::struct_fnode(
                        name, attr_list, klib::frag_children(children)));
                  case ContextType::Str: break;
                }
                return children;  // unreachable
              }();
              return klib::cons(elem, node, rest(ctx));
            },
            [&](const kernel::SplicePart& p) {
              if (tctx == ContextType::Frag) {
                throw DesugarError(DesugarErrorKind::SpliceInFragContext,
                                   "splice parts are not supported in "
                                   "fragment templates",
                                   at_part(index));
              }
              return Expr::prim(kernel::PrimName::Append, {elem},
                                {expr(ctx, p.expr), rest(ctx)});
            },
            [&](const kernel::ComponentPart& p) {
              if (tctx != ContextType::React) {
                throw DesugarError(DesugarErrorKind::ComponentOutsideReact,
                                   "component parts require a reactive "
                                   "template",
                                   at_part(index));
              }
              Expr key = expr(ctx, p.component);
              Expr props = expr(ctx, p.props);
              Type props_ty = kernel::typecheck(ctx, props);
              return klib::cons(elem, klib::inst_react(key, props, props_ty),
                                rest(ctx));
            },
        },
        ps[index]);
  }

  Expr tpl_expr(const TyCtxt& ctx, kernel::TplKind kind, const Template& body) {
    switch (kind) {
      case kernel::TplKind::StrTpl:
        return Expr::prim(kernel::PrimName::Join, {},
                          {parts(ctx, ContextType::Str, body.parts, 0)});
      case kernel::TplKind::TreeTpl:
        if (opts.fragment_strategy) return fragment_pipeline(ctx, body);
        return parts(ctx, ContextType::Node, body.parts, 0);
      case kernel::TplKind::FragTpl:
        return fragment_pipeline(ctx, body);
      case kernel::TplKind::FlowTpl: {
        Expr tree = opts.fragment_strategy
                        ? fragment_pipeline(ctx, body)
                        : parts(ctx, ContextType::Node, body.parts, 0);
        Expr reforest = klib::reforest_term(opts.literal_reforest);
        return Expr::app(Expr::app(reforest, tree),
                         klib::nil(klib::node_ty()));
      }
      case kernel::TplKind::ReactTpl:
        return parts(ctx, ContextType::React, body.parts, 0);
    }
    return parts(ctx, ContextType::Str, body.parts, 0);
  }

  Expr fragment_pipeline(const TyCtxt& ctx, const Template& body) {
    Expr frag_list = parts(ctx, ContextType::Frag, body.parts, 0);
    return Expr::app(klib::elim_frags_term(), klib::frag_children(frag_list));
  }
};

Expr TemplateDesugar::expr(const TyCtxt& ctx, const Expr& e) {
  auto go = [&](const Expr& sub) { return expr(ctx, sub); };
  return std::visit(
      overloaded{
          [&](const kernel::StrLit&) { return e; },
          [&](const kernel::BoolE&) { return e; },
          [&](const kernel::VarE&) { return e; },
          [&](const kernel::ConcatE& x) {
            return Expr::concat(go(x.lhs), go(x.rhs));
          },
          [&](const kernel::LambdaE& x) {
            return Expr::lambda(
                x.param, x.annot,
                expr(ctx.with_term(x.param, x.annot), x.body));
          },
          [&](const kernel::AppE& x) { return Expr::app(go(x.fn), go(x.arg)); },
          [&](const kernel::FixE& x) {
            return Expr::fix(x.name, x.annot,
                             expr(ctx.with_term(x.name, x.annot), x.body));
          },
          [&](const kernel::LetE& x) {
            Expr bound = go(x.bound);
            Type bound_ty = kernel::typecheck(ctx, bound);
            return Expr::let_in(x.name, bound,
                                expr(ctx.with_term(x.name, bound_ty), x.body));
          },
          [&](const kernel::RecordE& x) {
            std::vector<std::pair<std::string, Expr>> fields;
            fields.reserve(x.fields.size());
            for (const auto& [l, f] : x.fields) fields.emplace_back(l, go(f));
            return Expr::record(std::move(fields));
          },
          [&](const kernel::ProjectE& x) {
            return Expr::project(go(x.value), x.label);
          },
          [&](const kernel::InjectE& x) {
            return Expr::inject(go(x.value), x.label, x.annot);
          },
          [&](const kernel::CaseE& x) {
            Expr scrut = go(x.scrutinee);
            Type scrut_ty = kernel::typecheck(ctx, scrut);
            const auto* sum = std::get_if<kernel::SumTy>(&scrut_ty.node());
            std::vector<CaseArm> arms;
            arms.reserve(x.arms.size());
            for (const auto& arm : x.arms) {
              TyCtxt arm_ctx = ctx;
              if (sum) {
                for (const auto& [l, vt] : sum->variants) {
                  if (l == arm.label) {
                    arm_ctx = ctx.with_term(arm.binder, vt);
                    break;
                  }
                }
              }
              arms.push_back(CaseArm{arm.label, arm.binder,
                                     expr(arm_ctx, arm.body)});
            }
            return Expr::case_of(scrut, std::move(arms));
          },
          [&](const kernel::FoldE& x) {
            return Expr::fold(x.annot, go(x.value));
          },
          [&](const kernel::UnfoldE& x) {
            return Expr::unfold(x.annot, go(x.value));
          },
          [&](const kernel::TyLambdaE& x) {
            return Expr::ty_lambda(x.var, expr(ctx.with_tyvar(x.var), x.body));
          },
          [&](const kernel::TyAppE& x) { return Expr::ty_app(go(x.fn), x.arg); },
          [&](const kernel::PackE& x) {
            return Expr::pack(go(x.value), x.witness, x.annot);
          },
          [&](const kernel::UnpackE& x) {
            Expr packed = go(x.packed);
            Type packed_ty = kernel::typecheck(ctx, packed);
            TyCtxt body_ctx = ctx.with_tyvar(x.tyvar);
            if (const auto* ex = std::get_if<kernel::ExistsTy>(&packed_ty.node())) {
              body_ctx = body_ctx.with_term(
                  x.binder,
                  kernel::subst_type(ex->body, ex->var, Type::var(x.tyvar)));
            }
            return Expr::unpack(x.binder, x.tyvar, packed,
                                expr(body_ctx, x.body));
          },
          [&](const kernel::IfE& x) {
            return Expr::if_then_else(go(x.cond), go(x.then_branch),
                                      go(x.else_branch));
          },
          [&](const kernel::PrimE& x) {
            std::vector<Expr> args;
            args.reserve(x.args.size());
            for (const auto& a : x.args) args.push_back(go(a));
            return Expr::prim(x.name, x.tyargs, std::move(args));
          },
          [&](const kernel::TplE& x) {
            return tpl_expr(ctx.with_tpl(context_elem_type(
                                context_for_kind(x.kind))),
                            x.kind, x.body);
          },
      },
      e.node());
}

}  // namespace

Expr desugar_expr(const TyCtxt& ctx, const Expr& e, const DesugarOptions& opts) {
  TemplateDesugar d{opts};
  return d.expr(ctx, e);
}

Expr desugar(const Expr& e, const DesugarOptions& opts) {
  return desugar_expr(TyCtxt(), e, opts);
}

Expr desugar_template(const TyCtxt& ctx, const Template& t, ContextType tctx,
                      const DesugarOptions& opts) {
  TemplateDesugar d{opts};
  return d.parts(ctx.with_tpl(context_elem_type(tctx)), tctx, t.parts, 0);
}

}  // namespace doccalc::tpl
