#include "doccalc/reforest/reforest.hpp"

#include <algorithm>

#include "doccalc/util/overloaded.hpp"

namespace doccalc::doc {

namespace {

// par is accumulated in reverse
void emit_par(const NodeList& par, bool literal, NodeList& out) {
  if (par.empty() && !literal) return;
  NodeList children(par.rbegin(), par.rend());
  out.push_back(node("para", {}, std::move(children)));
}

void reforest_into(const NodeList& nodes, size_t index, NodeList par,
                   bool literal, NodeList& out) {
  if (index >= nodes.size()) {
    emit_par(par, literal, out);
    return;
  }
  const NodeTy& head = nodes[index];
  std::visit(
      overloaded{
          [&](const TextNode& t) {
            if (t.text == "\n\n") {
              emit_par(par, literal, out);
              reforest_into(nodes, index + 1, {}, literal, out);
            } else {
              par.insert(par.begin(), head);
              reforest_into(nodes, index + 1, std::move(par), literal, out);
            }
          },
          [&](const StructNode& s) {
            if (is_block(s.name)) {
              emit_par(par, literal, out);
              out.push_back(
                  node(s.name, s.attrs, reforest(s.children, {}, literal)));
              reforest_into(nodes, index + 1, {}, literal, out);
            } else {
              par.insert(par.begin(), head);
              reforest_into(nodes, index + 1, std::move(par), literal, out);
            }
          },
      },
      head);
}

}  // namespace

NodeList reforest(const NodeList& nodes, const NodeList& par, bool literal) {
  NodeList out;
  reforest_into(nodes, 0, par, literal, out);
  return out;
}

}  // namespace doccalc::doc
