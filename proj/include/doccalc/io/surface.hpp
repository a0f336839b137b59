#pragma once

#include <string>

#include "doccalc/io/json_ast.hpp"
#include "doccalc/kernel/ast.hpp"

namespace doccalc::io {

// Minimal template surface syntax:
//   {{ expr }}                          interpolation
//   {% set x = expr %}                  binding
//   {% if expr %}...{% else %}...{% endif %}
//   {% for x in expr %}...{% endfor %}
//   {% splice expr %}
//   <tag attr="...">...</tag>           node parts
// Expressions are identifiers, double-quoted strings, true/false, and `+`.
// Plain text becomes literal parts; "\n\n" always stands alone so paragraph
// grouping can match it. CRLF is normalized to LF.
kernel::Template parse_surface(const std::string& text);

// Inverse of parse_surface on parsed templates.
std::string surface_to_string(const kernel::Template& t);

}  // namespace doccalc::io
