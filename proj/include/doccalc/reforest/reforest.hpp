#pragma once

#include "doccalc/doc/node.hpp"

namespace doccalc::doc {

// Groups inline runs into paragraphs: a paragraph is emitted at the end of
// the list, at a "\n\n" text node, and before a block node; block nodes are
// reforested recursively with a fresh accumulator. Empty paragraphs are
// suppressed unless `literal` is set.
NodeList reforest(const NodeList& nodes, const NodeList& par,
                  bool literal = false);

inline NodeList reforest(const NodeList& nodes, bool literal = false) {
  return reforest(nodes, {}, literal);
}

}  // namespace doccalc::doc
