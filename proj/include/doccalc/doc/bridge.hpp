#pragma once

#include <stdexcept>

#include "doccalc/doc/node.hpp"
#include "doccalc/kernel/ast.hpp"

// Conversion between the kernel's fold/inject encodings and the native trees.
namespace doccalc::doc {

struct EncodingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

kernel::Expr encode_node(const NodeTy& n);
kernel::Expr encode_doc(const NodeList& doc);
kernel::Expr encode_attrs(const AttrList& attrs);
kernel::Expr encode_frag(const NodeFrag& frag);

// Each decoder requires a kernel *value* of the corresponding type and
// throws EncodingError otherwise.
NodeTy decode_node(const kernel::Expr& value);
NodeList decode_doc(const kernel::Expr& value);
AttrList decode_attrs(const kernel::Expr& value);
NodeFrag decode_frag(const kernel::Expr& value);

std::string decode_str(const kernel::Expr& value);

}  // namespace doccalc::doc
