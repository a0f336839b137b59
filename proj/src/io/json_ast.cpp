#include "doccalc/io/json_ast.hpp"

#include <sstream>

#include "doccalc/kernel/stdlib.hpp"
#include "doccalc/util/overloaded.hpp"

namespace doccalc::io {

using kernel::CaseArm;
using kernel::Expr;
using kernel::Template;
using kernel::TemplatePart;
using kernel::Type;

namespace {

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError("missing field '" + std::string(key) + "' in " + j.dump());
  }
  return *it;
}

std::string str_field(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_string()) {
    throw ParseError("field '" + std::string(key) + "' must be a string");
  }
  return f.get<std::string>();
}

}  // namespace

// --- types ----------------------------------------------------------------------

json type_to_json(const Type& t) {
  return std::visit(
      overloaded{
          [&](const kernel::StrTy&) { return json{{"kind", "str"}}; },
          [&](const kernel::BoolTy&) { return json{{"kind", "bool"}}; },
          [&](const kernel::ArrowTy& x) {
            return json{{"kind", "arrow"},
                        {"param", type_to_json(x.param)},
                        {"result", type_to_json(x.result)}};
          },
          [&](const kernel::RecordTy& x) {
            json fields = json::array();
            for (const auto& [l, ft] : x.fields)
              fields.push_back(json::array({l, type_to_json(ft)}));
            return json{{"kind", "record"}, {"fields", fields}};
          },
          [&](const kernel::SumTy& x) {
            json variants = json::array();
            for (const auto& [l, vt] : x.variants)
              variants.push_back(json::array({l, type_to_json(vt)}));
            return json{{"kind", "sum"}, {"variants", variants}};
          },
          [&](const kernel::ForallTy& x) {
            return json{{"kind", "forall"},
                        {"var", x.var},
                        {"body", type_to_json(x.body)}};
          },
          [&](const kernel::MuTy& x) {
            return json{{"kind", "mu"},
                        {"var", x.var},
                        {"body", type_to_json(x.body)}};
          },
          [&](const kernel::ExistsTy& x) {
            return json{{"kind", "exists"},
                        {"var", x.var},
                        {"body", type_to_json(x.body)}};
          },
          [&](const kernel::TyVar& x) {
            return json{{"kind", "tyvar"}, {"name", x.name}};
          },
      },
      t.node());
}

Type type_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("type must be an object: " + j.dump());
  std::string kind = str_field(j, "kind");
  if (kind == "str") return Type::str();
  if (kind == "bool") return Type::boolean();
  if (kind == "arrow") {
    return Type::arrow(type_from_json(field(j, "param")),
                       type_from_json(field(j, "result")));
  }
  if (kind == "record" || kind == "sum") {
    const char* key = kind == "record" ? "fields" : "variants";
    std::vector<std::pair<std::string, Type>> entries;
    for (const auto& item : field(j, key)) {
      if (!item.is_array() || item.size() != 2) {
        throw ParseError("type entries must be [label, type] pairs");
      }
      entries.emplace_back(item[0].get<std::string>(), type_from_json(item[1]));
    }
    return kind == "record" ? Type::record(std::move(entries))
                            : Type::sum(std::move(entries));
  }
  if (kind == "forall")
    return Type::forall(str_field(j, "var"), type_from_json(field(j, "body")));
  if (kind == "mu")
    return Type::mu(str_field(j, "var"), type_from_json(field(j, "body")));
  if (kind == "exists")
    return Type::exists(str_field(j, "var"), type_from_json(field(j, "body")));
  if (kind == "tyvar") return Type::var(str_field(j, "name"));
  // parser-only shorthands
  if (kind == "list")
    return kernel::stdlib::list_type(type_from_json(field(j, "elem")));
  if (kind == "nodety") return kernel::stdlib::node_ty();
  if (kind == "fnode") return kernel::stdlib::fnode_ty();
  if (kind == "nodefrag") return kernel::stdlib::node_frag();
  if (kind == "reactnode") return kernel::stdlib::react_node();
  throw ParseError("unknown type kind '" + kind + "'");
}

// --- templates ------------------------------------------------------------------

namespace {

json part_to_json(const TemplatePart& part) {
  return std::visit(
      overloaded{
          [&](const kernel::LitPart& p) {
            return json{{"kind", "lit"}, {"value", p.value}};
          },
          [&](const kernel::ExprPart& p) {
            return json{{"kind", "expr"}, {"expr", expr_to_json(p.expr)}};
          },
          [&](const kernel::SetPart& p) {
            return json{{"kind", "set"},
                        {"name", p.name},
                        {"expr", expr_to_json(p.expr)}};
          },
          [&](const kernel::IfPart& p) {
            return json{{"kind", "if"},
                        {"cond", expr_to_json(p.cond)},
                        {"then", template_to_json(p.then_parts)},
                        {"else", template_to_json(p.else_parts)}};
          },
          [&](const kernel::ForeachPart& p) {
            return json{{"kind", "foreach"},
                        {"source", expr_to_json(p.source)},
                        {"binder", p.binder},
                        {"body", template_to_json(p.body)}};
          },
          [&](const kernel::NodePart& p) {
            json attrs = json::array();
            for (const auto& a : p.attrs)
              attrs.push_back(json::array({a.key, expr_to_json(a.value)}));
            return json{{"kind", "node"},
                        {"name", p.name},
                        {"attrs", attrs},
                        {"children", template_to_json(p.children)}};
          },
          [&](const kernel::SplicePart& p) {
            return json{{"kind", "splice"}, {"expr", expr_to_json(p.expr)}};
          },
          [&](const kernel::ComponentPart& p) {
            return json{{"kind", "component"},
                        {"component", expr_to_json(p.component)},
                        {"props", expr_to_json(p.props)}};
          },
      },
      part);
}

TemplatePart part_from_json(const json& j) {
  std::string kind = str_field(j, "kind");
  if (kind == "lit") return kernel::LitPart{str_field(j, "value")};
  if (kind == "expr") return kernel::ExprPart{expr_from_json(field(j, "expr"))};
  if (kind == "set") {
    return kernel::SetPart{str_field(j, "name"),
                           expr_from_json(field(j, "expr"))};
  }
  if (kind == "if") {
    Template else_parts;
    if (j.contains("else")) else_parts = template_from_json(field(j, "else"));
    return kernel::IfPart{expr_from_json(field(j, "cond")),
                          template_from_json(field(j, "then")), else_parts};
  }
  if (kind == "foreach") {
    return kernel::ForeachPart{expr_from_json(field(j, "source")),
                               str_field(j, "binder"),
                               template_from_json(field(j, "body"))};
  }
  if (kind == "node") {
    std::vector<kernel::NodeAttr> attrs;
    if (j.contains("attrs")) {
      for (const auto& a : field(j, "attrs")) {
        if (!a.is_array() || a.size() != 2) {
          throw ParseError("node attrs must be [key, expr] pairs");
        }
        attrs.push_back(
            kernel::NodeAttr{a[0].get<std::string>(), expr_from_json(a[1])});
      }
    }
    Template children;
    if (j.contains("children"))
      children = template_from_json(field(j, "children"));
    return kernel::NodePart{str_field(j, "name"), std::move(attrs), children};
  }
  if (kind == "splice")
    return kernel::SplicePart{expr_from_json(field(j, "expr"))};
  if (kind == "component") {
    return kernel::ComponentPart{expr_from_json(field(j, "component")),
                                 expr_from_json(field(j, "props"))};
  }
  throw ParseError("unknown template part kind '" + kind + "'");
}

std::optional<kernel::TplKind> tpl_kind_from(const std::string& kind) {
  if (kind == "strtpl") return kernel::TplKind::StrTpl;
  if (kind == "treetpl") return kernel::TplKind::TreeTpl;
  if (kind == "fragtpl") return kernel::TplKind::FragTpl;
  if (kind == "flowtpl") return kernel::TplKind::FlowTpl;
  if (kind == "reacttpl") return kernel::TplKind::ReactTpl;
  return std::nullopt;
}

}  // namespace

json template_to_json(const Template& t) {
  json parts = json::array();
  for (const auto& part : t.parts) parts.push_back(part_to_json(part));
  return parts;
}

Template template_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("template must be an array of parts");
  Template t;
  for (const auto& part : j) t.parts.push_back(part_from_json(part));
  return t;
}

// --- expressions ------------------------------------------------------------------

json expr_to_json(const Expr& e) {
  return std::visit(
      overloaded{
          [&](const kernel::StrLit& x) {
            return json{{"kind", "str"}, {"value", x.value}};
          },
          [&](const kernel::ConcatE& x) {
            return json{{"kind", "concat"},
                        {"lhs", expr_to_json(x.lhs)},
                        {"rhs", expr_to_json(x.rhs)}};
          },
          [&](const kernel::VarE& x) {
            return json{{"kind", "var"}, {"name", x.name}};
          },
          [&](const kernel::LambdaE& x) {
            return json{{"kind", "lambda"},
                        {"param", x.param},
                        {"annot", type_to_json(x.annot)},
                        {"body", expr_to_json(x.body)}};
          },
          [&](const kernel::AppE& x) {
            return json{{"kind", "app"},
                        {"fn", expr_to_json(x.fn)},
                        {"arg", expr_to_json(x.arg)}};
          },
          [&](const kernel::FixE& x) {
            return json{{"kind", "fix"},
                        {"name", x.name},
                        {"annot", type_to_json(x.annot)},
                        {"body", expr_to_json(x.body)}};
          },
          [&](const kernel::LetE& x) {
            return json{{"kind", "let"},
                        {"name", x.name},
                        {"bound", expr_to_json(x.bound)},
                        {"body", expr_to_json(x.body)}};
          },
          [&](const kernel::RecordE& x) {
            json fields = json::array();
            for (const auto& [l, f] : x.fields)
              fields.push_back(json::array({l, expr_to_json(f)}));
            return json{{"kind", "record"}, {"fields", fields}};
          },
          [&](const kernel::ProjectE& x) {
            return json{{"kind", "project"},
                        {"value", expr_to_json(x.value)},
                        {"label", x.label}};
          },
          [&](const kernel::InjectE& x) {
            return json{{"kind", "inject"},
                        {"value", expr_to_json(x.value)},
                        {"label", x.label},
                        {"annot", type_to_json(x.annot)}};
          },
          [&](const kernel::CaseE& x) {
            json arms = json::array();
            for (const auto& arm : x.arms)
              arms.push_back(
                  json::array({arm.label, arm.binder, expr_to_json(arm.body)}));
            return json{{"kind", "case"},
                        {"scrutinee", expr_to_json(x.scrutinee)},
                        {"arms", arms}};
          },
          [&](const kernel::FoldE& x) {
            return json{{"kind", "fold"},
                        {"annot", type_to_json(x.annot)},
                        {"value", expr_to_json(x.value)}};
          },
          [&](const kernel::UnfoldE& x) {
            return json{{"kind", "unfold"},
                        {"annot", type_to_json(x.annot)},
                        {"value", expr_to_json(x.value)}};
          },
          [&](const kernel::TyLambdaE& x) {
            return json{{"kind", "tylambda"},
                        {"var", x.var},
                        {"body", expr_to_json(x.body)}};
          },
          [&](const kernel::TyAppE& x) {
            return json{{"kind", "tyapp"},
                        {"fn", expr_to_json(x.fn)},
                        {"arg", type_to_json(x.arg)}};
          },
          [&](const kernel::PackE& x) {
            return json{{"kind", "pack"},
                        {"value", expr_to_json(x.value)},
                        {"witness", type_to_json(x.witness)},
                        {"annot", type_to_json(x.annot)}};
          },
          [&](const kernel::UnpackE& x) {
            return json{{"kind", "unpack"},
                        {"binder", x.binder},
                        {"tyvar", x.tyvar},
                        {"packed", expr_to_json(x.packed)},
                        {"body", expr_to_json(x.body)}};
          },
          [&](const kernel::BoolE& x) {
            return json{{"kind", "boollit"}, {"value", x.value}};
          },
          [&](const kernel::IfE& x) {
            return json{{"kind", "if"},
                        {"cond", expr_to_json(x.cond)},
                        {"then", expr_to_json(x.then_branch)},
                        {"else", expr_to_json(x.else_branch)}};
          },
          [&](const kernel::PrimE& x) {
            json tyargs = json::array();
            for (const auto& t : x.tyargs) tyargs.push_back(type_to_json(t));
            json args = json::array();
            for (const auto& a : x.args) args.push_back(expr_to_json(a));
            return json{{"kind", "prim"},
                        {"name", kernel::prim_name_str(x.name)},
                        {"tyargs", tyargs},
                        {"args", args}};
          },
          [&](const kernel::TplE& x) {
            return json{{"kind", kernel::tpl_kind_str(x.kind)},
                        {"template", template_to_json(x.body)}};
          },
      },
      e.node());
}

Expr expr_from_json(const json& j) {
  if (j.is_string()) return Expr::str_lit(j.get<std::string>());
  if (!j.is_object()) {
    throw ParseError("expression must be an object: " + j.dump());
  }
  std::string kind = str_field(j, "kind");
  if (kind == "str") return Expr::str_lit(str_field(j, "value"));
  if (kind == "concat") {
    return Expr::concat(expr_from_json(field(j, "lhs")),
                        expr_from_json(field(j, "rhs")));
  }
  if (kind == "var") return Expr::var(str_field(j, "name"));
  if (kind == "lambda") {
    return Expr::lambda(str_field(j, "param"),
                        type_from_json(field(j, "annot")),
                        expr_from_json(field(j, "body")));
  }
  if (kind == "app") {
    return Expr::app(expr_from_json(field(j, "fn")),
                     expr_from_json(field(j, "arg")));
  }
  if (kind == "fix") {
    return Expr::fix(str_field(j, "name"), type_from_json(field(j, "annot")),
                     expr_from_json(field(j, "body")));
  }
  if (kind == "let") {
    return Expr::let_in(str_field(j, "name"),
                        expr_from_json(field(j, "bound")),
                        expr_from_json(field(j, "body")));
  }
  if (kind == "record") {
    std::vector<std::pair<std::string, Expr>> fields;
    for (const auto& item : field(j, "fields")) {
      if (!item.is_array() || item.size() != 2) {
        throw ParseError("record fields must be [label, expr] pairs");
      }
      fields.emplace_back(item[0].get<std::string>(), expr_from_json(item[1]));
    }
    return Expr::record(std::move(fields));
  }
  if (kind == "project") {
    return Expr::project(expr_from_json(field(j, "value")),
                         str_field(j, "label"));
  }
  if (kind == "inject") {
    return Expr::inject(expr_from_json(field(j, "value")),
                        str_field(j, "label"),
                        type_from_json(field(j, "annot")));
  }
  if (kind == "case") {
    std::vector<CaseArm> arms;
    for (const auto& arm : field(j, "arms")) {
      if (!arm.is_array() || arm.size() != 3) {
        throw ParseError("case arms must be [label, binder, expr] triples");
      }
      arms.push_back(CaseArm{arm[0].get<std::string>(),
                             arm[1].get<std::string>(), expr_from_json(arm[2])});
    }
    return Expr::case_of(expr_from_json(field(j, "scrutinee")), std::move(arms));
  }
  if (kind == "fold") {
    return Expr::fold(type_from_json(field(j, "annot")),
                      expr_from_json(field(j, "value")));
  }
  if (kind == "unfold") {
    return Expr::unfold(type_from_json(field(j, "annot")),
                        expr_from_json(field(j, "value")));
  }
  if (kind == "tylambda") {
    return Expr::ty_lambda(str_field(j, "var"),
                           expr_from_json(field(j, "body")));
  }
  if (kind == "tyapp") {
    return Expr::ty_app(expr_from_json(field(j, "fn")),
                        type_from_json(field(j, "arg")));
  }
  if (kind == "pack") {
    return Expr::pack(expr_from_json(field(j, "value")),
                      type_from_json(field(j, "witness")),
                      type_from_json(field(j, "annot")));
  }
  if (kind == "unpack") {
    return Expr::unpack(str_field(j, "binder"), str_field(j, "tyvar"),
                        expr_from_json(field(j, "packed")),
                        expr_from_json(field(j, "body")));
  }
  if (kind == "boollit") {
    const json& v = field(j, "value");
    if (!v.is_boolean()) throw ParseError("boollit value must be a boolean");
    return Expr::bool_lit(v.get<bool>());
  }
  if (kind == "if") {
    return Expr::if_then_else(expr_from_json(field(j, "cond")),
                              expr_from_json(field(j, "then")),
                              expr_from_json(field(j, "else")));
  }
  if (kind == "prim") {
    auto name = kernel::prim_name_parse(str_field(j, "name"));
    if (!name) throw ParseError("unknown primitive '" + str_field(j, "name") + "'");
    std::vector<Type> tyargs;
    if (j.contains("tyargs")) {
      for (const auto& t : field(j, "tyargs")) tyargs.push_back(type_from_json(t));
    }
    std::vector<Expr> args;
    for (const auto& a : field(j, "args")) args.push_back(expr_from_json(a));
    return Expr::prim(*name, std::move(tyargs), std::move(args));
  }
  if (auto tk = tpl_kind_from(kind)) {
    return Expr::tpl(*tk, template_from_json(field(j, "template")));
  }
  if (kind == "list") {
    Type elem = type_from_json(field(j, "elem"));
    std::vector<Expr> items;
    for (const auto& item : field(j, "items")) items.push_back(expr_from_json(item));
    return kernel::stdlib::list_from(elem, items);
  }
  throw ParseError("unknown expression kind '" + kind + "'");
}

// --- programs --------------------------------------------------------------------

json program_to_json(const ProgramFile& p) {
  json j{{"version", p.version}, {"body", expr_to_json(p.body)}};
  if (!p.components.empty()) j["components"] = p.components;
  return j;
}

ProgramFile program_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("program must be a JSON object");
  std::string version = str_field(j, "version");
  if (version != "1") {
    throw ParseError("unsupported program version '" + version + "'");
  }
  std::vector<std::string> components;
  if (j.contains("components")) {
    for (const auto& c : field(j, "components"))
      components.push_back(c.get<std::string>());
  }
  return ProgramFile{version, expr_from_json(field(j, "body")), components};
}

// --- article node form --------------------------------------------------------

json node_to_json(const doc::NodeTy& n) {
  return std::visit(
      overloaded{
          [&](const doc::TextNode& t) { return json{{"text", t.text}}; },
          [&](const doc::StructNode& s) {
            json attrs = json::array();
            for (const auto& [k, v] : s.attrs)
              attrs.push_back(json::array({k, v}));
            return json{{"name", s.name},
                        {"attrs", attrs},
                        {"children", doc_to_json(s.children)}};
          },
      },
      n);
}

json doc_to_json(const doc::NodeList& doc) {
  json out = json::array();
  for (const auto& n : doc) out.push_back(node_to_json(n));
  return out;
}

doc::NodeTy node_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("node must be an object");
  if (j.contains("text")) return doc::text(j["text"].get<std::string>());
  doc::AttrList attrs;
  if (j.contains("attrs")) {
    for (const auto& a : j["attrs"]) {
      if (!a.is_array() || a.size() != 2) {
        throw ParseError("node attrs must be [key, value] pairs");
      }
      attrs.emplace_back(a[0].get<std::string>(), a[1].get<std::string>());
    }
  }
  doc::NodeList children;
  if (j.contains("children")) children = doc_from_json(j["children"]);
  return doc::node(str_field(j, "name"), std::move(attrs), std::move(children));
}

doc::NodeList doc_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("document must be an array of nodes");
  doc::NodeList out;
  for (const auto& n : j) out.push_back(node_from_json(n));
  return out;
}

// --- traces -----------------------------------------------------------------------

std::vector<reactive::SignalMap> trace_from_jsonl(const std::string& text) {
  std::vector<reactive::SignalMap> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& err) {
      throw ParseError("bad trace line: " + std::string(err.what()));
    }
    reactive::SignalMap step;
    for (const auto& [key, value] : field(j, "signals").items()) {
      try {
        step[std::stoull(key)] = value.get<std::string>();
      } catch (const std::exception&) {
        throw ParseError("trace instance ids must be numeric, got '" + key + "'");
      }
    }
    out.push_back(std::move(step));
  }
  return out;
}

}  // namespace doccalc::io
