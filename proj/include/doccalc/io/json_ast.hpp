#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "doccalc/doc/node.hpp"
#include "doccalc/kernel/ast.hpp"
#include "doccalc/reactive/reactive.hpp"

namespace doccalc::io {

using json = nlohmann::json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonical JSON AST. The printer emits the full form; the parser
// additionally accepts the type shorthands "list", "nodety", "fnode",
// "nodefrag", "reactnode" and the expression shorthand
// {"kind": "list", "elem": T, "items": [...]}.
json type_to_json(const kernel::Type& t);
kernel::Type type_from_json(const json& j);

json expr_to_json(const kernel::Expr& e);
kernel::Expr expr_from_json(const json& j);

json template_to_json(const kernel::Template& t);
kernel::Template template_from_json(const json& j);

struct ProgramFile {
  std::string version;
  kernel::Expr body;
  std::vector<std::string> components;  // registry keys the program uses
};

json program_to_json(const ProgramFile& p);
ProgramFile program_from_json(const json& j);

// Canonical article form: {"text": s} | {"name": s, "attrs": [[k,v]...],
// "children": [...]}.
json node_to_json(const doc::NodeTy& n);
json doc_to_json(const doc::NodeList& doc);
doc::NodeTy node_from_json(const json& j);
doc::NodeList doc_from_json(const json& j);

// One trace step per line: {"signals": {"<instId>": "<signal>"}}.
std::vector<reactive::SignalMap> trace_from_jsonl(const std::string& text);

}  // namespace doccalc::io
