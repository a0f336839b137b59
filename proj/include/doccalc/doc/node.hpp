#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace doccalc::doc {

// ---------------------------------------------------------------------------
// Flattened document nodes
// ---------------------------------------------------------------------------

struct NodeTy;

using AttrList = std::vector<std::pair<std::string, std::string>>;

struct TextNode {
  std::string text;
};

struct StructNode {
  std::string name;
  AttrList attrs;
  std::vector<NodeTy> children;
};

struct NodeTy : std::variant<TextNode, StructNode> {
  using variant::variant;
};

using NodeList = std::vector<NodeTy>;

NodeTy text(std::string s);
NodeTy node(std::string name, AttrList attrs, NodeList children);

bool operator==(const NodeTy& a, const NodeTy& b);
inline bool operator!=(const NodeTy& a, const NodeTy& b) { return !(a == b); }

std::string node_to_string(const NodeTy& n);
std::string doc_to_string(const NodeList& doc);

// ---------------------------------------------------------------------------
// Fragments: an arbitrarily nested list of document content, flattened late
// ---------------------------------------------------------------------------

struct NodeFrag;

struct FText {
  std::string text;
};

struct FStruct {
  std::string name;
  AttrList attrs;
  std::shared_ptr<const NodeFrag> children;
};

struct FNode : std::variant<FText, FStruct> {
  using variant::variant;
};

struct FragBase {
  FNode node;
};
struct FragChildren {
  std::vector<NodeFrag> items;
};

struct NodeFrag : std::variant<FragBase, FragChildren> {
  using variant::variant;
};

NodeFrag frag_base(FNode n);
NodeFrag frag_children(std::vector<NodeFrag> items);
FNode fnode_text(std::string s);
FNode fnode_struct(std::string name, AttrList attrs, NodeFrag children);

bool operator==(const NodeFrag& a, const NodeFrag& b);
inline bool operator!=(const NodeFrag& a, const NodeFrag& b) {
  return !(a == b);
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// True exactly for the block tags of the article schema.
bool is_block(const std::string& tag);

struct SchemaViolation {
  std::vector<int> path;  // child indices from the document root
  std::string message;
  bool warning = false;
};

struct ValidationReport {
  std::vector<SchemaViolation> errors;
  std::vector<SchemaViolation> warnings;
  bool ok() const { return errors.empty(); }
};

// Checks `doc` against the article schema (para/section blocks, text/bold/ref
// inlines, plus figure and list/item). In permissive mode unknown tags are
// downgraded to warnings.
ValidationReport validate_article(const NodeList& doc, bool permissive = false);

// Flattens a fragment into a plain node list.
NodeList elim_frags(const NodeFrag& frag);

std::string path_to_string(const std::vector<int>& path);

}  // namespace doccalc::doc
