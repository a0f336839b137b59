#include "doccalc/template/typecheck.hpp"

#include "doccalc/kernel/stdlib.hpp"
#include "doccalc/util/overloaded.hpp"

namespace doccalc::tpl {

using kernel::Type;
using kernel::TyCtxt;
using kernel::TypeError;
using kernel::TypeErrorKind;

Type context_elem_type(ContextType ctx) {
  switch (ctx) {
    case ContextType::Str: return Type::str();
    case ContextType::Node: return kernel::stdlib::node_ty();
    case ContextType::Frag: return kernel::stdlib::node_frag();
    case ContextType::React: return kernel::stdlib::react_node();
  }
  return Type::str();
}

ContextType context_for_kind(kernel::TplKind kind) {
  switch (kind) {
    case kernel::TplKind::StrTpl: return ContextType::Str;
    case kernel::TplKind::TreeTpl: return ContextType::Node;
    case kernel::TplKind::FragTpl: return ContextType::Frag;
    case kernel::TplKind::FlowTpl: return ContextType::Node;
    case kernel::TplKind::ReactTpl: return ContextType::React;
  }
  return ContextType::Str;
}

namespace {

std::string at_part(size_t index) {
  return "template part " + std::to_string(index);
}

bool is_tree_elem(const Type& elem) {
  return elem == kernel::stdlib::node_ty() ||
         elem == kernel::stdlib::react_node() ||
         elem == kernel::stdlib::node_frag();
}

// Checks the part list left to right; set parts extend the context for the
// remainder of the list.
void check_parts(TyCtxt ctx, const Type& elem,
                 const std::vector<kernel::TemplatePart>& parts, size_t index) {
  if (index >= parts.size()) return;
  const auto& part = parts[index];
  std::visit(
      overloaded{
          [&](const kernel::LitPart&) {
            check_parts(ctx, elem, parts, index + 1);
          },
          [&](const kernel::ExprPart& p) {
            Type found = kernel::typecheck(ctx, p.expr);
            if (!(found == elem ||
                  (is_tree_elem(elem) && found == Type::str()))) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "expected " +
                                  kernel::stdlib::type_display_name(elem) +
                                  ", found " +
                                  kernel::stdlib::type_display_name(found),
                              at_part(index));
            }
            check_parts(ctx, elem, parts, index + 1);
          },
          [&](const kernel::SetPart& p) {
            Type bound = kernel::typecheck(ctx, p.expr);
            check_parts(ctx.with_term(p.name, bound), elem, parts, index + 1);
          },
          [&](const kernel::IfPart& p) {
            Type cond = kernel::typecheck(ctx, p.cond);
            if (cond != Type::boolean()) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "if condition must be Bool, found " +
                                  kernel::stdlib::type_display_name(cond),
                              at_part(index));
            }
            typecheck_template(ctx, p.then_parts);
            typecheck_template(ctx, p.else_parts);
            check_parts(ctx, elem, parts, index + 1);
          },
          [&](const kernel::ForeachPart& p) {
            Type source = kernel::typecheck(ctx, p.source);
            auto item = kernel::stdlib::list_elem_type(source);
            if (!item) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "foreach source must be a list, found " +
                                  kernel::stdlib::type_display_name(source),
                              at_part(index));
            }
            typecheck_template(ctx.with_term(p.binder, *item), p.body);
            check_parts(ctx, elem, parts, index + 1);
          },
          [&](const kernel::NodePart& p) {
            if (!is_tree_elem(elem)) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "node part '" + p.name +
                                  "' is not allowed in a string template",
                              at_part(index));
            }
            for (const auto& attr : p.attrs) {
              Type found = kernel::typecheck(ctx, attr.value);
              if (found != Type::str()) {
                throw TypeError(TypeErrorKind::TypeMismatch,
                                "attribute '" + attr.key +
                                    "' must be Str, found " +
                                    kernel::stdlib::type_display_name(found),
                                at_part(index));
              }
            }
            typecheck_template(ctx, p.children);
            check_parts(ctx, elem, parts, index + 1);
          },
          [&](const kernel::SplicePart& p) {
            if (elem == kernel::stdlib::node_frag()) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "splice parts are not supported in fragment "
                              "templates",
                              at_part(index));
            }
            Type found = kernel::typecheck(ctx, p.expr);
            if (found != kernel::stdlib::list_type(elem)) {
              throw TypeError(
                  TypeErrorKind::TypeMismatch,
                  "spliced expression must have type " +
                      kernel::stdlib::type_display_name(elem) + " list, found " +
                      kernel::stdlib::type_display_name(found),
                  at_part(index));
            }
            check_parts(ctx, elem, parts, index + 1);
          },
          [&](const kernel::ComponentPart& p) {
            if (elem != kernel::stdlib::react_node()) {
              throw TypeError(TypeErrorKind::ComponentOutsideReact,
                              "component parts require a reactive template",
                              at_part(index));
            }
            Type key = kernel::typecheck(ctx, p.component);
            if (key != Type::str()) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "component reference must be Str, found " +
                                  kernel::stdlib::type_display_name(key),
                              at_part(index));
            }
            kernel::typecheck(ctx, p.props);  // any type
            check_parts(ctx, elem, parts, index + 1);
          },
      },
      part);
}

}  // namespace

Type typecheck_template(const TyCtxt& ctx, const kernel::Template& t) {
  auto elem = ctx.current_tpl();
  if (!elem) {
    throw TypeError(TypeErrorKind::TemplateOutsideContext,
                    "template checked without a template context");
  }
  check_parts(ctx, *elem, t.parts, 0);
  return kernel::stdlib::list_type(*elem);
}

}  // namespace doccalc::tpl
