#include "doccalc/doc/node.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "doccalc/util/overloaded.hpp"

namespace doccalc::doc {

NodeTy text(std::string s) { return NodeTy(TextNode{std::move(s)}); }

NodeTy node(std::string name, AttrList attrs, NodeList children) {
  return NodeTy(StructNode{std::move(name), std::move(attrs), std::move(children)});
}

namespace {

// Attribute order is preserved for serialization but insignificant for
// equality, unless keys repeat.
bool attrs_equal(const AttrList& a, const AttrList& b) {
  if (a.size() != b.size()) return false;
  auto has_dupes = [](const AttrList& attrs) {
    std::set<std::string> keys;
    for (const auto& [k, v] : attrs) {
      if (!keys.insert(k).second) return true;
    }
    return false;
  };
  if (has_dupes(a) || has_dupes(b)) return a == b;
  AttrList sa = a;
  AttrList sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

}  // namespace

bool operator==(const NodeTy& a, const NodeTy& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const TextNode& x) { return x.text == std::get<TextNode>(b).text; },
          [&](const StructNode& x) {
            const auto& y = std::get<StructNode>(b);
            if (x.name != y.name || !attrs_equal(x.attrs, y.attrs) ||
                x.children.size() != y.children.size())
              return false;
            for (size_t i = 0; i < x.children.size(); ++i)
              if (x.children[i] != y.children[i]) return false;
            return true;
          },
      },
      a);
}

namespace {

void print_node(std::ostringstream& os, const NodeTy& n) {
  std::visit(overloaded{
                 [&](const TextNode& t) { os << "text \"" << t.text << '"'; },
                 [&](const StructNode& s) {
                   os << "node(" << s.name << ", [";
                   bool first = true;
                   for (const auto& [k, v] : s.attrs) {
                     if (!first) os << ", ";
                     first = false;
                     os << "(" << k << ", " << v << ")";
                   }
                   os << "], [";
                   first = true;
                   for (const auto& c : s.children) {
                     if (!first) os << ", ";
                     first = false;
                     print_node(os, c);
                   }
                   os << "])";
                 },
             },
             n);
}

}  // namespace

std::string node_to_string(const NodeTy& n) {
  std::ostringstream os;
  print_node(os, n);
  return os.str();
}

std::string doc_to_string(const NodeList& doc) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& n : doc) {
    if (!first) os << ", ";
    first = false;
    print_node(os, n);
  }
  os << "]";
  return os.str();
}

// --- fragments ---------------------------------------------------------------

NodeFrag frag_base(FNode n) { return NodeFrag(FragBase{std::move(n)}); }

NodeFrag frag_children(std::vector<NodeFrag> items) {
  return NodeFrag(FragChildren{std::move(items)});
}

FNode fnode_text(std::string s) { return FNode(FText{std::move(s)}); }

FNode fnode_struct(std::string name, AttrList attrs, NodeFrag children) {
  return FNode(FStruct{std::move(name), std::move(attrs),
                       std::make_shared<const NodeFrag>(std::move(children))});
}

namespace {
bool fnode_equal(const FNode& a, const FNode& b);
}

bool operator==(const NodeFrag& a, const NodeFrag& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const FragBase& x) {
            return fnode_equal(x.node, std::get<FragBase>(b).node);
          },
          [&](const FragChildren& x) {
            const auto& y = std::get<FragChildren>(b);
            if (x.items.size() != y.items.size()) return false;
            for (size_t i = 0; i < x.items.size(); ++i)
              if (x.items[i] != y.items[i]) return false;
            return true;
          },
      },
      a);
}

namespace {

bool fnode_equal(const FNode& a, const FNode& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const FText& x) { return x.text == std::get<FText>(b).text; },
          [&](const FStruct& x) {
            const auto& y = std::get<FStruct>(b);
            return x.name == y.name && x.attrs == y.attrs &&
                   *x.children == *y.children;
          },
      },
      a);
}

}  // namespace

// --- operations --------------------------------------------------------------

bool is_block(const std::string& tag) {
  return tag == "para" || tag == "section" || tag == "figure" || tag == "list";
}

NodeList elim_frags(const NodeFrag& frag) {
  return std::visit(
      overloaded{
          [&](const FragBase& base) {
            return std::visit(
                overloaded{
                    [&](const FText& t) { return NodeList{text(t.text)}; },
                    [&](const FStruct& s) {
                      return NodeList{
                          node(s.name, s.attrs, elim_frags(*s.children))};
                    },
                },
                base.node);
          },
          [&](const FragChildren& children) {
            NodeList out;
            for (const auto& item : children.items) {
              NodeList sub = elim_frags(item);
              out.insert(out.end(), sub.begin(), sub.end());
            }
            return out;
          },
      },
      frag);
}

// --- article validation --------------------------------------------------------

namespace {

enum class Position { Block, Inline };

struct Validator {
  bool permissive;
  std::vector<SchemaViolation> errors;
  std::vector<SchemaViolation> warnings;

  void fail(const std::vector<int>& path, std::string message) {
    errors.push_back(SchemaViolation{path, std::move(message), false});
  }

  void warn(const std::vector<int>& path, std::string message) {
    warnings.push_back(SchemaViolation{path, std::move(message), true});
  }

  void check_no_duplicate_id(const StructNode& s, const std::vector<int>& path) {
    int ids = 0;
    for (const auto& [k, v] : s.attrs) {
      if (k == "id") ++ids;
    }
    if (ids > 1) fail(path, "duplicate 'id' attribute on one node");
  }

  // Attribute shape: exactly the given keys allowed, each at most once.
  void check_attrs(const StructNode& s, const std::vector<int>& path,
                   const std::set<std::string>& allowed) {
    std::set<std::string> seen;
    for (const auto& [k, v] : s.attrs) {
      if (!allowed.count(k)) {
        fail(path, "unexpected attribute '" + k + "' on <" + s.name + ">");
      } else if (!seen.insert(k).second) {
        fail(path, "duplicate '" + k + "' attribute on one node");
      }
    }
  }

  void check_list(const NodeList& nodes, Position pos, std::vector<int>& path) {
    for (size_t i = 0; i < nodes.size(); ++i) {
      path.push_back(static_cast<int>(i));
      check_node(nodes[i], pos, path);
      path.pop_back();
    }
  }

  void check_node(const NodeTy& n, Position pos, std::vector<int>& path) {
    std::visit(
        overloaded{
            [&](const TextNode&) {
              if (pos == Position::Block)
                fail(path, "text is not allowed at block position");
            },
            [&](const StructNode& s) {
              check_no_duplicate_id(s, path);
              if (pos == Position::Block) {
                check_block(s, path);
              } else {
                check_inline(s, path);
              }
            },
        },
        n);
  }

  void check_block(const StructNode& s, std::vector<int>& path) {
    if (s.name == "para") {
      check_attrs(s, path, {});
      check_list(s.children, Position::Inline, path);
    } else if (s.name == "section") {
      check_attrs(s, path, {"id"});
      check_list(s.children, Position::Block, path);
    } else if (s.name == "figure") {
      check_attrs(s, path, {});
      check_list(s.children, Position::Block, path);
    } else if (s.name == "list") {
      check_attrs(s, path, {});
      for (size_t i = 0; i < s.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        const auto* item = std::get_if<StructNode>(&s.children[i]);
        if (!item || item->name != "item") {
          fail(path, "<list> children must be <item> nodes");
        } else {
          check_attrs(*item, path, {});
          check_list(item->children, Position::Block, path);
        }
        path.pop_back();
      }
    } else if (s.name == "bold" || s.name == "ref" || s.name == "item") {
      fail(path, "<" + s.name + "> is not allowed at block position");
    } else if (permissive) {
      warn(path, "unknown tag <" + s.name + "> at block position");
      check_list(s.children, Position::Block, path);
    } else {
      fail(path, "unknown tag <" + s.name + "> at block position");
    }
  }

  void check_inline(const StructNode& s, std::vector<int>& path) {
    if (s.name == "bold") {
      check_attrs(s, path, {});
      check_list(s.children, Position::Inline, path);
    } else if (s.name == "ref") {
      check_attrs(s, path, {"target"});
      bool has_target = false;
      for (const auto& [k, v] : s.attrs) {
        if (k == "target") has_target = true;
      }
      if (!has_target) fail(path, "<ref> requires a 'target' attribute");
      if (!s.children.empty()) fail(path, "<ref> must have no children");
    } else if (is_block(s.name) || s.name == "item") {
      fail(path, "<" + s.name + "> is not allowed at inline position");
    } else if (permissive) {
      warn(path, "unknown tag <" + s.name + "> at inline position");
      check_list(s.children, Position::Inline, path);
    } else {
      fail(path, "unknown tag <" + s.name + "> at inline position");
    }
  }
};

}  // namespace

ValidationReport validate_article(const NodeList& doc, bool permissive) {
  Validator v{permissive, {}, {}};
  std::vector<int> path;
  v.check_list(doc, Position::Block, path);
  return ValidationReport{std::move(v.errors), std::move(v.warnings)};
}

std::string path_to_string(const std::vector<int>& path) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) os << ".";
    os << path[i];
  }
  os << "]";
  return os.str();
}

}  // namespace doccalc::doc
