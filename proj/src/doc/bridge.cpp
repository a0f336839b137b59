#include "doccalc/doc/bridge.hpp"

#include "doccalc/kernel/stdlib.hpp"
#include "doccalc/util/overloaded.hpp"

namespace doccalc::doc {

using kernel::Expr;
namespace klib = kernel::stdlib;

namespace {

const Expr& record_field(const kernel::RecordE& rec, const std::string& label) {
  for (const auto& [l, f] : rec.fields) {
    if (l == label) return f;
  }
  throw EncodingError("missing record field '" + label + "'");
}

// fold (inject payload at label) -> (label, payload)
std::pair<std::string, Expr> variant_view(const Expr& value,
                                          const char* what) {
  const auto* fold = std::get_if<kernel::FoldE>(&value.node());
  if (!fold) throw EncodingError(std::string(what) + ": expected a fold value");
  const auto* inj = std::get_if<kernel::InjectE>(&fold->value.node());
  if (!inj) throw EncodingError(std::string(what) + ": expected an injection");
  return {inj->label, inj->value};
}

std::vector<Expr> list_values(const Expr& value, const char* what) {
  auto items = klib::list_to_values(value);
  if (!items) throw EncodingError(std::string(what) + ": expected a list value");
  return *items;
}

}  // namespace

std::string decode_str(const Expr& value) {
  const auto* s = std::get_if<kernel::StrLit>(&value.node());
  if (!s) throw EncodingError("expected a string value");
  return s->value;
}

Expr encode_attrs(const AttrList& attrs) {
  std::vector<std::pair<std::string, Expr>> pairs;
  pairs.reserve(attrs.size());
  for (const auto& [k, v] : attrs) pairs.emplace_back(k, Expr::str_lit(v));
  return klib::attr_list(pairs);
}

AttrList decode_attrs(const Expr& value) {
  AttrList out;
  for (const auto& item : list_values(value, "attrs")) {
    const auto* rec = std::get_if<kernel::RecordE>(&item.node());
    if (!rec) throw EncodingError("attrs: expected a pair record");
    out.emplace_back(decode_str(record_field(*rec, "fst")),
                     decode_str(record_field(*rec, "snd")));
  }
  return out;
}

Expr encode_node(const NodeTy& n) {
  return std::visit(
      overloaded{
          [&](const TextNode& t) {
            return klib::text_node(Expr::str_lit(t.text));
          },
          [&](const StructNode& s) {
            return klib::struct_node(Expr::str_lit(s.name),
                                     encode_attrs(s.attrs),
                                     encode_doc(s.children));
          },
      },
      n);
}

Expr encode_doc(const NodeList& doc) {
  std::vector<Expr> items;
  items.reserve(doc.size());
  for (const auto& n : doc) items.push_back(encode_node(n));
  return klib::list_from(klib::node_ty(), items);
}

NodeTy decode_node(const Expr& value) {
  auto [label, payload] = variant_view(value, "node");
  if (label == "text") return text(decode_str(payload));
  if (label == "node") {
    const auto* rec = std::get_if<kernel::RecordE>(&payload.node());
    if (!rec) throw EncodingError("node: expected a struct-node record");
    return node(decode_str(record_field(*rec, "name")),
                decode_attrs(record_field(*rec, "attrs")),
                decode_doc(record_field(*rec, "children")));
  }
  throw EncodingError("node: unexpected variant '" + label + "'");
}

NodeList decode_doc(const Expr& value) {
  NodeList out;
  for (const auto& item : list_values(value, "doc")) {
    out.push_back(decode_node(item));
  }
  return out;
}

Expr encode_frag(const NodeFrag& frag) {
  return std::visit(
      overloaded{
          [&](const FragBase& base) {
            return std::visit(
                overloaded{
                    [&](const FText& t) {
                      return klib::frag_base(
                          klib::text_fnode(Expr::str_lit(t.text)));
                    },
                    [&](const FStruct& s) {
                      return klib::frag_base(klib::struct_fnode(
                          Expr::str_lit(s.name), encode_attrs(s.attrs),
                          encode_frag(*s.children)));
                    },
                },
                base.node);
          },
          [&](const FragChildren& children) {
            std::vector<Expr> items;
            items.reserve(children.items.size());
            for (const auto& item : children.items)
              items.push_back(encode_frag(item));
            return klib::frag_children(
                klib::list_from(klib::node_frag(), items));
          },
      },
      frag);
}

NodeFrag decode_frag(const Expr& value) {
  auto [label, payload] = variant_view(value, "fragment");
  if (label == "base") {
    auto [flabel, fpayload] = variant_view(payload, "fragment node");
    if (flabel == "text") return frag_base(fnode_text(decode_str(fpayload)));
    if (flabel == "node") {
      const auto* rec = std::get_if<kernel::RecordE>(&fpayload.node());
      if (!rec) throw EncodingError("fragment node: expected a record");
      return frag_base(fnode_struct(decode_str(record_field(*rec, "name")),
                                    decode_attrs(record_field(*rec, "attrs")),
                                    decode_frag(record_field(*rec, "children"))));
    }
    throw EncodingError("fragment node: unexpected variant '" + flabel + "'");
  }
  if (label == "children") {
    std::vector<NodeFrag> items;
    for (const auto& item : list_values(payload, "fragment children")) {
      items.push_back(decode_frag(item));
    }
    return frag_children(std::move(items));
  }
  throw EncodingError("fragment: unexpected variant '" + label + "'");
}

}  // namespace doccalc::doc
