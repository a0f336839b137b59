#include "doccalc/io/surface.hpp"

#include <cctype>
#include <sstream>

#include "doccalc/util/overloaded.hpp"

namespace doccalc::io {

using kernel::Expr;
using kernel::Template;
using kernel::TemplatePart;

namespace {

std::string normalize_newlines(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') continue;
    out += text[i];
  }
  return out;
}

struct Cursor {
  const std::string& src;
  size_t pos = 0;

  bool done() const { return pos >= src.size(); }
  char peek(size_t ahead = 0) const {
    return pos + ahead < src.size() ? src[pos + ahead] : '\0';
  }
  bool starts_with(const std::string& s) const {
    return src.compare(pos, s.size(), s) == 0;
  }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("surface syntax at offset " + std::to_string(pos) + ": " +
                     message);
  }
  void expect(const std::string& s) {
    if (!starts_with(s)) fail("expected '" + s + "'");
    pos += s.size();
  }
};

std::string parse_ident(Cursor& c) {
  c.skip_ws();
  size_t start = c.pos;
  if (!std::isalpha(static_cast<unsigned char>(c.peek())) && c.peek() != '_') {
    c.fail("expected an identifier");
  }
  while (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_') {
    ++c.pos;
  }
  return c.src.substr(start, c.pos - start);
}

std::string parse_quoted(Cursor& c) {
  c.expect("\"");
  std::string out;
  while (!c.done() && c.peek() != '"') {
    char ch = c.peek();
    if (ch == '\\') {
      ++c.pos;
      char esc = c.peek();
      if (esc == 'n') out += '\n';
      else if (esc == '\\') out += '\\';
      else if (esc == '"') out += '"';
      else c.fail("unknown escape");
      ++c.pos;
    } else {
      out += ch;
      ++c.pos;
    }
  }
  c.expect("\"");
  return out;
}

Expr parse_expr(Cursor& c);

Expr parse_atom(Cursor& c) {
  c.skip_ws();
  if (c.peek() == '"') return Expr::str_lit(parse_quoted(c));
  if (c.peek() == '(') {
    ++c.pos;
    Expr inner = parse_expr(c);
    c.skip_ws();
    c.expect(")");
    return inner;
  }
  std::string name = parse_ident(c);
  if (name == "true") return Expr::bool_lit(true);
  if (name == "false") return Expr::bool_lit(false);
  return Expr::var(name);
}

Expr parse_expr(Cursor& c) {
  Expr lhs = parse_atom(c);
  for (;;) {
    c.skip_ws();
    if (c.peek() == '+') {
      ++c.pos;
      lhs = Expr::concat(lhs, parse_atom(c));
    } else {
      return lhs;
    }
  }
}

// Splits plain text so "\n\n" is always its own literal part.
void push_text(Template& t, const std::string& text) {
  size_t pos = 0;
  while (pos < text.size()) {
    size_t brk = text.find("\n\n", pos);
    if (brk == std::string::npos) {
      t.parts.push_back(kernel::LitPart{text.substr(pos)});
      return;
    }
    if (brk > pos)
      t.parts.push_back(kernel::LitPart{text.substr(pos, brk - pos)});
    t.parts.push_back(kernel::LitPart{"\n\n"});
    pos = brk + 2;
  }
}

enum class StopReason { End, Else, Endif, Endfor, CloseTag };

struct ParsedBlock {
  Template body;
  StopReason reason;
  std::string close_tag;
};

bool is_directive(Cursor& c, const std::string& name) {
  if (!c.starts_with("{%")) return false;
  Cursor probe = c;
  probe.pos += 2;
  probe.skip_ws();
  size_t start = probe.pos;
  while (std::isalnum(static_cast<unsigned char>(probe.peek()))) ++probe.pos;
  return probe.src.substr(start, probe.pos - start) == name;
}

ParsedBlock parse_block(Cursor& c, bool stop_on_else, bool stop_on_endif,
                        bool stop_on_endfor, bool stop_on_close_tag);

TemplatePart parse_node_part(Cursor& c) {
  c.expect("<");
  std::string name = parse_ident(c);
  std::vector<kernel::NodeAttr> attrs;
  for (;;) {
    c.skip_ws();
    if (c.peek() == '>') {
      ++c.pos;
      break;
    }
    std::string key = parse_ident(c);
    c.skip_ws();
    c.expect("=");
    c.skip_ws();
    attrs.push_back(kernel::NodeAttr{key, Expr::str_lit(parse_quoted(c))});
  }
  ParsedBlock block = parse_block(c, false, false, false, true);
  if (block.reason != StopReason::CloseTag || block.close_tag != name) {
    c.fail("unclosed <" + name + ">");
  }
  return kernel::NodePart{name, std::move(attrs), std::move(block.body)};
}

ParsedBlock parse_block(Cursor& c, bool stop_on_else, bool stop_on_endif,
                        bool stop_on_endfor, bool stop_on_close_tag) {
  Template body;
  std::string text;
  auto flush = [&] {
    if (!text.empty()) {
      push_text(body, text);
      text.clear();
    }
  };
  while (!c.done()) {
    if (c.starts_with("{{")) {
      flush();
      c.pos += 2;
      Expr e = parse_expr(c);
      c.skip_ws();
      c.expect("}}");
      body.parts.push_back(kernel::ExprPart{e});
      continue;
    }
    if (c.starts_with("{%")) {
      if (stop_on_else && is_directive(c, "else")) {
        flush();
        c.pos += 2;
        c.skip_ws();
        c.expect("else");
        c.skip_ws();
        c.expect("%}");
        return {std::move(body), StopReason::Else, ""};
      }
      if (stop_on_endif && is_directive(c, "endif")) {
        flush();
        c.pos += 2;
        c.skip_ws();
        c.expect("endif");
        c.skip_ws();
        c.expect("%}");
        return {std::move(body), StopReason::Endif, ""};
      }
      if (stop_on_endfor && is_directive(c, "endfor")) {
        flush();
        c.pos += 2;
        c.skip_ws();
        c.expect("endfor");
        c.skip_ws();
        c.expect("%}");
        return {std::move(body), StopReason::Endfor, ""};
      }
      flush();
      c.pos += 2;
      c.skip_ws();
      std::string directive = parse_ident(c);
      if (directive == "set") {
        std::string name = parse_ident(c);
        c.skip_ws();
        c.expect("=");
        Expr e = parse_expr(c);
        c.skip_ws();
        c.expect("%}");
        body.parts.push_back(kernel::SetPart{name, e});
      } else if (directive == "if") {
        Expr cond = parse_expr(c);
        c.skip_ws();
        c.expect("%}");
        ParsedBlock then_block = parse_block(c, true, true, false, false);
        Template else_body;
        if (then_block.reason == StopReason::Else) {
          ParsedBlock else_block = parse_block(c, false, true, false, false);
          if (else_block.reason != StopReason::Endif) c.fail("missing endif");
          else_body = std::move(else_block.body);
        } else if (then_block.reason != StopReason::Endif) {
          c.fail("missing endif");
        }
        body.parts.push_back(
            kernel::IfPart{cond, std::move(then_block.body), else_body});
      } else if (directive == "for") {
        std::string binder = parse_ident(c);
        c.skip_ws();
        c.expect("in");
        Expr source = parse_expr(c);
        c.skip_ws();
        c.expect("%}");
        ParsedBlock loop = parse_block(c, false, false, true, false);
        if (loop.reason != StopReason::Endfor) c.fail("missing endfor");
        body.parts.push_back(
            kernel::ForeachPart{source, binder, std::move(loop.body)});
      } else if (directive == "splice") {
        Expr e = parse_expr(c);
        c.skip_ws();
        c.expect("%}");
        body.parts.push_back(kernel::SplicePart{e});
      } else {
        c.fail("unknown directive '" + directive + "'");
      }
      continue;
    }
    if (stop_on_close_tag && c.starts_with("</")) {
      flush();
      c.pos += 2;
      std::string name = parse_ident(c);
      c.skip_ws();
      c.expect(">");
      return {std::move(body), StopReason::CloseTag, name};
    }
    if (c.peek() == '<' &&
        (std::isalpha(static_cast<unsigned char>(c.peek(1))) ||
         c.peek(1) == '_')) {
      flush();
      body.parts.push_back(parse_node_part(c));
      continue;
    }
    text += c.peek();
    ++c.pos;
  }
  flush();
  return {std::move(body), StopReason::End, ""};
}

// --- printing ---------------------------------------------------------------

void print_expr(std::ostringstream& os, const Expr& e, bool parenthesize) {
  std::visit(
      overloaded{
          [&](const kernel::StrLit& x) {
            os << '"';
            for (char ch : x.value) {
              if (ch == '"') os << "\\\"";
              else if (ch == '\\') os << "\\\\";
              else if (ch == '\n') os << "\\n";
              else os << ch;
            }
            os << '"';
          },
          [&](const kernel::VarE& x) { os << x.name; },
          [&](const kernel::BoolE& x) { os << (x.value ? "true" : "false"); },
          [&](const kernel::ConcatE& x) {
            if (parenthesize) os << "(";
            print_expr(os, x.lhs, false);
            os << " + ";
            print_expr(os, x.rhs, true);
            if (parenthesize) os << ")";
          },
          [&](const auto&) {
            throw ParseError(
                "expression is not representable in the surface syntax");
          },
      },
      e.node());
}

std::string expr_str(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e, false);
  return os.str();
}

void print_template(std::ostringstream& os, const Template& t) {
  for (const auto& part : t.parts) {
    std::visit(
        overloaded{
            [&](const kernel::LitPart& p) { os << p.value; },
            [&](const kernel::ExprPart& p) {
              os << "{{ " << expr_str(p.expr) << " }}";
            },
            [&](const kernel::SetPart& p) {
              os << "{% set " << p.name << " = " << expr_str(p.expr) << " %}";
            },
            [&](const kernel::IfPart& p) {
              os << "{% if " << expr_str(p.cond) << " %}";
              print_template(os, p.then_parts);
              if (!p.else_parts.parts.empty()) {
                os << "{% else %}";
                print_template(os, p.else_parts);
              }
              os << "{% endif %}";
            },
            [&](const kernel::ForeachPart& p) {
              os << "{% for " << p.binder << " in " << expr_str(p.source)
                 << " %}";
              print_template(os, p.body);
              os << "{% endfor %}";
            },
            [&](const kernel::NodePart& p) {
              os << "<" << p.name;
              for (const auto& attr : p.attrs) {
                const auto* lit = std::get_if<kernel::StrLit>(&attr.value.node());
                if (!lit) {
                  throw ParseError(
                      "non-literal attribute is not representable in the "
                      "surface syntax");
                }
                os << " " << attr.key << "=" << expr_str(attr.value);
              }
              os << ">";
              print_template(os, p.children);
              os << "</" << p.name << ">";
            },
            [&](const kernel::SplicePart& p) {
              os << "{% splice " << expr_str(p.expr) << " %}";
            },
            [&](const kernel::ComponentPart&) {
              throw ParseError(
                  "component parts are not representable in the surface "
                  "syntax");
            },
        },
        part);
  }
}

}  // namespace

Template parse_surface(const std::string& text) {
  std::string normalized = normalize_newlines(text);
  Cursor c{normalized};
  ParsedBlock block = parse_block(c, false, false, false, false);
  if (block.reason != StopReason::End) {
    throw ParseError("unexpected end of surface template");
  }
  return std::move(block.body);
}

std::string surface_to_string(const Template& t) {
  std::ostringstream os;
  print_template(os, t);
  return os.str();
}

}  // namespace doccalc::io
