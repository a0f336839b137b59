#pragma once

#include "doccalc/kernel/ast.hpp"
#include "doccalc/kernel/typecheck.hpp"

namespace doccalc::tpl {

// Desugaring context of a template: determines how literal, node, foreach
// and if parts elaborate, and the element type of the resulting list.
enum class ContextType { Str, Node, Frag, React };

kernel::Type context_elem_type(ContextType ctx);
ContextType context_for_kind(kernel::TplKind kind);

// Types a template under the current `tpl tau` fact of `ctx`; the result is
// `tau list`. Throws kernel::TypeError (TemplateOutsideContext when no
// template fact is set; part errors carry the part index as location).
kernel::Type typecheck_template(const kernel::TyCtxt& ctx,
                                const kernel::Template& t);

}  // namespace doccalc::tpl
