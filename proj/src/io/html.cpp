#include "doccalc/io/html.hpp"

#include <sstream>

#include "doccalc/util/overloaded.hpp"

namespace doccalc::io {

std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

std::string map_tag(const std::string& name) {
  if (name == "para") return "p";
  if (name == "bold") return "strong";
  if (name == "list") return "ul";
  if (name == "item") return "li";
  return name;  // section, figure, and unmapped tags keep their name
}

void emit(std::ostringstream& os, const doc::NodeTy& n) {
  std::visit(overloaded{
                 [&](const doc::TextNode& t) { os << html_escape(t.text); },
                 [&](const doc::StructNode& s) {
                   std::string tag = map_tag(s.name);
                   os << "<" << tag;
                   for (const auto& [k, v] : s.attrs) {
                     os << " " << k << "=\"" << html_escape(v) << "\"";
                   }
                   os << ">";
                   for (const auto& c : s.children) emit(os, c);
                   os << "</" << tag << ">";
                 },
             },
             n);
}

}  // namespace

std::string to_html(const doc::NodeTy& n) {
  std::ostringstream os;
  emit(os, n);
  return os.str();
}

std::string to_html(const doc::NodeList& doc) {
  std::ostringstream os;
  for (const auto& n : doc) emit(os, n);
  return os.str();
}

}  // namespace doccalc::io
